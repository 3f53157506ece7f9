//! Finite-dimensional algebras given by structure constants.
//!
//! A [`StructureTensor`] of dimension `n` stores `c[i][j][k]` with
//! `e_i * e_j = sum_k c[i][j][k] e_k`. Indices are 0-based here and 1-based in
//! every rendered or serialized form.
//!
//! The space of all bilinear multiplications on `V_n` is itself an
//! `n^3`-dimensional algebra under the Kantor product with a fixed vector `v`:
//!
//! ```text
//! (A.B)(x, y) = A(v, B(x, y)) - B(A(v, x), y) - B(x, A(v, y))
//! ```
//!
//! [`build_kantor`] constructs it in the basis of elementary multiplications
//! `alpha^k_{ij}` (`alpha^k_{ij}(v_t, v_l) = delta_it delta_jl v_k`), ordered
//! `(k, i, j)` lexicographically with `k` outermost.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{format_scalar, int, invert, QMatrix, QVector, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    dim: usize,
    c: Vec<Scalar>,
}

impl StructureTensor {
    pub fn zero(dim: usize) -> Self {
        StructureTensor {
            dim,
            c: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    /// Dense constructor; `c` is indexed `(i * dim + j) * dim + k`.
    pub fn new(dim: usize, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: c.len(),
            });
        }
        Ok(StructureTensor { dim, c })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t.c[(i * dim + j) * dim + k] = f(i, j, k);
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.dim;
        self.c[(i * n + j) * n + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// `e_i * e_j` as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> QVector {
        let n = self.dim;
        let start = (i * n + j) * n;
        QVector::new(self.c[start..start + n].to_vec())
    }

    /// Bilinear extension of the table.
    pub fn product(&self, x: &QVector, y: &QVector) -> Result<QVector> {
        let n = self.dim;
        for v in [x, y] {
            if v.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim(),
                });
            }
        }
        let mut out = vec![Scalar::zero(); n];
        for i in (0..n).filter(|&i| !x[i].is_zero()) {
            for j in (0..n).filter(|&j| !y[j].is_zero()) {
                let w = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        Ok(QVector::new(out))
    }

    /// Nonzero structure constants as `(i, j, k, value)`, 0-based, in index order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        out.push((i, j, k, v.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Index of the elementary multiplication `alpha^k_{ij}` (0-based fields).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicationKey {
    pub k: usize,
    pub i: usize,
    pub j: usize,
}

impl MultiplicationKey {
    pub fn index(&self, n: usize) -> usize {
        (self.k * n + self.i) * n + self.j
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        MultiplicationKey {
            k: idx / (n * n),
            i: (idx / n) % n,
            j: idx % n,
        }
    }

    /// `a^k_ij` label with 1-based indices.
    pub fn label(&self) -> String {
        format!("a^{}_{}{}", self.k + 1, self.i + 1, self.j + 1)
    }
}

/// Reads `alpha`-basis coordinates as a multiplication on `V_n`.
fn as_multiplication(coords: &QVector, n: usize) -> StructureTensor {
    StructureTensor::from_fn(n, |i, j, k| {
        coords[MultiplicationKey { k, i, j }.index(n)].clone()
    })
}

fn as_coordinates(m: &StructureTensor) -> QVector {
    let n = m.dim();
    let mut v = QVector::zeros(n * n * n);
    for (i, j, k, c) in m.nonzero_entries() {
        v[MultiplicationKey { k, i, j }.index(n)] = c;
    }
    v
}

/// `(A.B)(x, y) = A(v, B(x, y)) - B(A(v, x), y) - B(x, A(v, y))` on basis pairs.
fn kantor_product(
    a: &StructureTensor,
    b: &StructureTensor,
    fixed: &QVector,
) -> Result<StructureTensor> {
    let n = a.dim();
    let mut out = StructureTensor::zero(n);
    for t in 0..n {
        let vt = QVector::unit(n, t);
        let a_vt = a.product(fixed, &vt)?;
        for l in 0..n {
            let vl = QVector::unit(n, l);
            let b_xy = b.basis_product(t, l);
            let first = a.product(fixed, &b_xy)?;
            let second = b.product(&a_vt, &vl)?;
            let third = b.product(&vt, &a.product(fixed, &vl)?)?;
            let r = &(&first - &second) - &third;
            for k in 0..n {
                out.set(t, l, k, r[k].clone());
            }
        }
    }
    Ok(out)
}

/// The algebra `W(n)` of all multiplications on `V_n` under the Kantor product
/// with fixed vector `v_{fixed+1}`, in the `alpha` basis.
pub fn build_kantor(n: usize, fixed: usize) -> Result<StructureTensor> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if fixed >= n {
        return Err(Error::InvalidParameter(format!(
            "fixed vector index {} out of range 1..={n}",
            fixed + 1
        )));
    }
    let dim = n * n * n;
    let v = QVector::unit(n, fixed);
    let basis: Vec<StructureTensor> = (0..dim)
        .map(|p| as_multiplication(&QVector::unit(dim, p), n))
        .collect();
    let mut out = StructureTensor::zero(dim);
    for (p, a) in basis.iter().enumerate() {
        for (q, b) in basis.iter().enumerate() {
            let coords = as_coordinates(&kantor_product(a, b, &v)?);
            for r in 0..dim {
                out.set(p, q, r, coords[r].clone());
            }
        }
    }
    Ok(out)
}

/// Change of basis; the columns of `p` are the new basis vectors written in
/// the old basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    p: QMatrix,
    p_inv: QMatrix,
}

impl BasisChange {
    pub fn new(p: QMatrix) -> Result<Self> {
        let p_inv = invert(&p)?.ok_or(Error::Singular)?;
        Ok(BasisChange { p, p_inv })
    }

    pub fn identity(dim: usize) -> Self {
        BasisChange {
            p: QMatrix::identity(dim),
            p_inv: QMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.p
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            p: self.p_inv.clone(),
            p_inv: self.p.clone(),
        }
    }
}

/// Columns of `E_BASIS`: `e_1 .. e_8` in the `alpha` basis
/// `(a^1_11, a^1_12, a^1_21, a^1_22, a^2_11, a^2_12, a^2_21, a^2_22)`.
pub const E_BASIS: [[i64; 8]; 8] = [
    [1, 0, 0, 0, 0, -1, -1, 0], // a^1_11 - a^2_12 - a^2_21
    [0, 0, 0, 0, 1, 0, 0, 0],   // a^2_11
    [0, -1, -1, 0, 0, 0, 0, 1], // a^2_22 - a^1_12 - a^1_21
    [0, 0, 0, 1, 0, 0, 0, 0],   // a^1_22
    [2, 0, 0, 0, 0, 1, 1, 0],   // 2a^1_11 + a^2_12 + a^2_21
    [0, 1, 1, 0, 0, 0, 0, 2],   // 2a^2_22 + a^1_12 + a^1_21
    [0, 1, -1, 0, 0, 0, 0, 0],  // a^1_12 - a^1_21
    [0, 0, 0, 0, 0, 1, -1, 0],  // a^2_12 - a^2_21
];

pub fn e_basis() -> BasisChange {
    let cols: Vec<QVector> = E_BASIS.iter().map(|c| QVector::from_ints(c)).collect();
    BasisChange::new(QMatrix::from_columns(8, &cols).expect("8 columns of length 8"))
        .expect("E_BASIS is invertible")
}

/// Published multiplication table of `W(2)` in the `e` basis. Every entry is a
/// single term `(coefficient, k)` meaning `coefficient * e_k` (1-based `k`);
/// coefficient 0 means the product is zero. Kept for comparison only.
pub const PUBLISHED_W2_TABLE: [[(i64, usize); 8]; 8] = [
    [
        (-1, 1),
        (-3, 2),
        (1, 3),
        (3, 4),
        (-1, 5),
        (1, 6),
        (1, 7),
        (-1, 8),
    ],
    [
        (3, 2),
        (0, 0),
        (2, 1),
        (1, 3),
        (0, 0),
        (-1, 5),
        (1, 8),
        (0, 0),
    ],
    [
        (-2, 3),
        (-1, 1),
        (-3, 4),
        (0, 0),
        (1, 6),
        (0, 0),
        (0, 0),
        (-1, 7),
    ],
    [(0, 0); 8],
    [
        (-2, 1),
        (-3, 2),
        (-1, 3),
        (0, 0),
        (-2, 5),
        (-1, 6),
        (-1, 7),
        (-2, 8),
    ],
    [
        (2, 3),
        (1, 1),
        (3, 4),
        (0, 0),
        (-1, 6),
        (0, 0),
        (0, 0),
        (1, 7),
    ],
    [
        (2, 3),
        (1, 1),
        (3, 4),
        (0, 0),
        (-1, 6),
        (0, 0),
        (0, 0),
        (1, 7),
    ],
    [
        (0, 0),
        (1, 2),
        (-1, 3),
        (-2, 4),
        (0, 0),
        (-1, 6),
        (-1, 7),
        (0, 0),
    ],
];

pub fn published_w2_table() -> StructureTensor {
    let mut t = StructureTensor::zero(8);
    for (i, row) in PUBLISHED_W2_TABLE.iter().enumerate() {
        for (j, &(coeff, k)) in row.iter().enumerate() {
            if coeff != 0 {
                t.set(i, j, k - 1, int(coeff));
            }
        }
    }
    t
}

/// Structure constants in the new basis: `c'(i, j) = P^-1 (P e_i * P e_j)`.
pub fn change_basis(alg: &StructureTensor, ch: &BasisChange) -> Result<StructureTensor> {
    let n = alg.dim();
    if ch.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ch.dim(),
        });
    }
    let cols: Vec<QVector> = (0..n).map(|i| ch.p.column(i)).collect();
    let mut out = StructureTensor::zero(n);
    for i in 0..n {
        for j in 0..n {
            let old = alg.product(&cols[i], &cols[j])?;
            let new = ch.p_inv.mul_vec(&old)?;
            for k in 0..n {
                out.set(i, j, k, new[k].clone());
            }
        }
    }
    Ok(out)
}

/// `W(2)` (fixed vector `v_1`) in the `e` basis, derived from the Kantor product.
pub fn kantor_w2() -> StructureTensor {
    let alpha = build_kantor(2, 0).expect("n = 2 is valid");
    change_basis(&alpha, &e_basis()).expect("dimensions agree")
}

/// Commutative multiplications: span of `e_1 .. e_6`.
pub fn kantor_w2_commutative() -> StructureTensor {
    subalgebra(&kantor_w2(), &[0, 1, 2, 3, 4, 5]).expect("span e1..e6 is closed")
}

/// Commutative multiplications with zero trace: span of `e_1 .. e_4`.
pub fn kantor_s2() -> StructureTensor {
    subalgebra(&kantor_w2(), &[0, 1, 2, 3]).expect("span e1..e4 is closed")
}

/// Restriction to the span of the given basis vectors (0-based), in the given
/// order. Fails with the first pair whose product leaves the span.
pub fn subalgebra(alg: &StructureTensor, span: &[usize]) -> Result<StructureTensor> {
    let n = alg.dim();
    let mut seen = vec![false; n];
    for &s in span {
        if s >= n {
            return Err(Error::InvalidSpan(format!(
                "index {} out of range 1..={n}",
                s + 1
            )));
        }
        if seen[s] {
            return Err(Error::InvalidSpan(format!("index {} repeated", s + 1)));
        }
        seen[s] = true;
    }
    if span.is_empty() {
        return Err(Error::InvalidSpan("empty span".into()));
    }
    let m = span.len();
    let mut out = StructureTensor::zero(m);
    for (a, &i) in span.iter().enumerate() {
        for (b, &j) in span.iter().enumerate() {
            for k in 0..n {
                let c = alg.get(i, j, k);
                if c.is_zero() {
                    continue;
                }
                match span.iter().position(|&s| s == k) {
                    Some(pos) => out.set(a, b, pos, c.clone()),
                    None => return Err(Error::NotClosed { i: i + 1, j: j + 1 }),
                }
            }
        }
    }
    Ok(out)
}

/// `e1`, `e2`, ... labels.
pub fn e_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// A coordinate vector as a signed combination of labels, e.g. `2e1-e3`.
pub fn render_combination(v: &QVector, names: &[String]) -> String {
    let mut out = String::new();
    for (k, c) in v.entries().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Scalar::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if !abs.is_one() {
            if abs.is_integer() {
                out.push_str(&format_scalar(&abs));
            } else {
                let _ = write!(out, "({})", format_scalar(&abs));
            }
        }
        out.push_str(&names[k]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Cells of row `i` of the multiplication table.
pub fn table_row(alg: &StructureTensor, i: usize, names: &[String]) -> Vec<String> {
    (0..alg.dim())
        .map(|j| render_combination(&alg.basis_product(i, j), names))
        .collect()
}

/// Plain-text multiplication table; row label times column label.
pub fn render_table(alg: &StructureTensor, names: &[String]) -> Result<String> {
    let n = alg.dim();
    if names.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: names.len(),
        });
    }
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(n + 1);
    let mut header = vec![String::new()];
    header.extend(names.iter().cloned());
    cells.push(header);
    for i in 0..n {
        let mut row = vec![names[i].clone()];
        row.extend(table_row(alg, i, names));
        cells.push(row);
    }
    let widths: Vec<usize> = (0..=n)
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:>w$}"))
            .collect();
        let _ = writeln!(out, "| {} |", line.join(" | "));
    }
    Ok(out)
}

/// One disagreeing table cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDiff {
    pub i: usize,
    pub j: usize,
    pub left: QVector,
    pub right: QVector,
}

pub fn diff_tables(a: &StructureTensor, b: &StructureTensor) -> Result<Vec<TableDiff>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let n = a.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (l, r) = (a.basis_product(i, j), b.basis_product(i, j));
            if l != r {
                out.push(TableDiff {
                    i,
                    j,
                    left: l,
                    right: r,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> QVector {
        QVector::unit(8, i - 1)
    }

    #[test]
    fn w2_product_examples() {
        let w = kantor_w2();
        assert_eq!(w.product(&e(2), &e(3)).unwrap(), e(1).scale(&int(2)));
        for j in 1..=8 {
            assert!(w.product(&e(4), &e(j)).unwrap().is_zero());
        }
        assert!(w.product(&e(5), &QVector::zeros(8)).unwrap().is_zero());
    }

    #[test]
    fn product_dim_mismatch() {
        let w = kantor_w2();
        assert!(matches!(
            w.product(&QVector::zeros(3), &e(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kantor_n1_single_value() {
        // A = B = a^1_11: A(v, A(v, v)) - A(A(v, v), v) - A(v, A(v, v)) = -v
        let t = build_kantor(1, 0).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t.get(0, 0, 0), &int(-1));
    }

    #[test]
    fn kantor_rejects_bad_arguments() {
        assert!(build_kantor(0, 0).is_err());
        assert!(build_kantor(2, 2).is_err());
    }

    #[test]
    fn kantor_zero_left_factor() {
        // A = 0 makes every term of (A.B) vanish.
        let v = QVector::unit(2, 0);
        let zero = StructureTensor::zero(2);
        let b = as_multiplication(&QVector::from_ints(&[1, -2, 0, 3, 0, 1, 1, 0]), 2);
        assert!(kantor_product(&zero, &b, &v).unwrap().is_zero());
    }

    #[test]
    fn identity_change_is_noop() {
        let a = build_kantor(2, 0).unwrap();
        assert_eq!(change_basis(&a, &BasisChange::identity(8)).unwrap(), a);
    }

    #[test]
    fn change_basis_round_trip() {
        let a = build_kantor(2, 0).unwrap();
        let ch = e_basis();
        let there = change_basis(&a, &ch).unwrap();
        assert_eq!(change_basis(&there, &ch.inverse()).unwrap(), a);
    }

    #[test]
    fn singular_change_rejected() {
        assert_eq!(
            BasisChange::new(QMatrix::from_ints(&[&[1, 1], &[1, 1]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn subalgebras_of_w2() {
        let w = kantor_w2();
        assert_eq!(subalgebra(&w, &[0, 1, 2, 3]).unwrap().dim(), 4);
        assert_eq!(subalgebra(&w, &[0, 1, 2, 3, 4, 5]).unwrap().dim(), 6);
        assert_eq!(
            subalgebra(&w, &[1, 2]),
            Err(Error::NotClosed { i: 2, j: 3 })
        );
        assert!(matches!(
            subalgebra(&w, &[1, 1]),
            Err(Error::InvalidSpan(_))
        ));
        assert!(matches!(subalgebra(&w, &[8]), Err(Error::InvalidSpan(_))));
    }

    #[test]
    fn render_rows() {
        let w = kantor_w2();
        let names = e_labels(8);
        assert_eq!(
            table_row(&w, 0, &names),
            ["-e1", "-3e2", "e3", "3e4", "-e5", "e6", "e7", "-e8"]
        );
        let z = render_table(&StructureTensor::zero(2), &e_labels(2)).unwrap();
        assert_eq!(z.lines().count(), 3);
        assert!(z.lines().skip(1).all(|l| l.matches(" 0 ").count() == 2));
        let one = render_table(&build_kantor(1, 0).unwrap(), &e_labels(1)).unwrap();
        assert_eq!(one.lines().nth(1).unwrap(), "| e1 | -e1 |");
        assert!(render_table(&w, &e_labels(3)).is_err());
    }

    #[test]
    fn rational_cells() {
        let v = QVector::new(vec![crate::linalg::ratio(1, 2), int(0), int(-1)]);
        assert_eq!(render_combination(&v, &e_labels(3)), "(1/2)e1-e3");
    }

    #[test]
    fn diff_single_cell() {
        let w = kantor_w2();
        assert!(diff_tables(&w, &w).unwrap().is_empty());
        let mut flipped = w.clone();
        flipped.set(2, 5, 0, int(7));
        let d = diff_tables(&w, &flipped).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].i, d[0].j), (2, 5));
        assert!(diff_tables(&w, &StructureTensor::zero(4)).is_err());
    }

    #[test]
    fn multiplication_key_round_trip() {
        for idx in 0..27 {
            assert_eq!(MultiplicationKey::from_index(idx, 3).index(3), idx);
        }
        assert_eq!(MultiplicationKey::from_index(5, 2).label(), "a^2_12");
    }
}
