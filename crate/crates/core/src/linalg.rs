//! Exact rational vectors and matrices.
//!
//! Everything is built on [`Scalar`], an arbitrary-precision rational that is
//! always kept in lowest terms with a positive denominator, so structural
//! equality is value equality. Elimination routines never round.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ground-field element.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// `p/q` in lowest terms. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`; whitespace around the value is ignored.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = |message: &str| Error::Parse {
        context: format!("rational {s:?}"),
        message: message.to_string(),
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad("bad numerator"))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad("bad denominator"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(Scalar::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad("not an integer or p/q"))?;
            Ok(Scalar::from_integer(p))
        }
    }
}

/// Canonical `"p/q"` (or `"p"` when integral) rendering.
pub fn format_scalar(v: &Scalar) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QVector(Vec<Scalar>);

impl QVector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Scalar::zero(); dim])
    }

    /// Standard basis vector `e_{i+1}` (0-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        QVector(values.iter().map(|&v| int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        QVector(self.0.iter().map(|v| v * s).collect())
    }

    pub fn dot(&self, other: &QVector) -> Scalar {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    fn check_dim(&self, other: &QVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QVector) -> Result<QVector> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &QVector) -> Result<QVector> {
        self.check_dim(other)?;
        Ok(self - other)
    }

    /// Comma-separated canonical rationals, e.g. `1, -1/2, 0`.
    pub fn render(&self) -> String {
        self.0
            .iter()
            .map(format_scalar)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl Index<usize> for QVector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

// Operator impls assume equal dimensions; use `try_add`/`try_sub` on untrusted input.
impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render())
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn diagonal(values: &[Scalar]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(QMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Convenience for literals in tests and constants. Panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .expect("ragged integer matrix literal")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[QVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.dim() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.dim(),
                });
            }
            for i in 0..rows {
                m[(i, j)] = col[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> QVector {
        QVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> QVector {
        QVector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).into_entries()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &QVector) -> Result<QVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(QVector::new(
            (0..self.rows)
                .map(|i| {
                    let row = &self.data[i * self.cols..(i + 1) * self.cols];
                    row.iter()
                        .zip(v.entries())
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn try_mul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &QMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(other)?;
        Ok(self - other)
    }

    /// Row-major flattening, used to treat `n x n` operators as `n^2`-vectors.
    pub fn vectorize(&self) -> QVector {
        QVector::new(self.data.clone())
    }

    pub fn from_vectorized(rows: usize, cols: usize, v: &QVector) -> Result<QMatrix> {
        Self::new(rows, cols, v.entries().to_vec())
    }

    pub fn render(&self) -> String {
        (0..self.rows)
            .map(|i| format!("[{}]", self.row(i).render()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.try_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Reduced row echelon form together with the pivot columns (0-based).
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut rows = m.to_rows();
    let pivots = rref_in_place(&mut rows, m.cols());
    let reduced = if rows.is_empty() {
        QMatrix::zeros(0, m.cols())
    } else {
        QMatrix::from_rows(rows).expect("rref preserves shape")
    };
    (reduced, pivots)
}

pub(crate) fn rref_in_place(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows.len() {
            break;
        }
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(found, pivot_row);

        let inv = rows[pivot_row][col].recip();
        if !inv.is_one() {
            for v in rows[pivot_row][col..].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }

        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Canonical kernel basis: one vector per free column, in increasing column
/// order, with that free variable set to 1 and the other free variables 0.
pub fn nullspace(m: &QMatrix) -> Vec<QVector> {
    let (r, pivots) = rref(m);
    nullspace_from_rref(&r, &pivots)
}

fn nullspace_from_rref(r: &QMatrix, pivots: &[usize]) -> Vec<QVector> {
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = QVector::zeros(n);
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, free)].clone();
            }
            v
        })
        .collect()
}

/// One exact solution of `m x = b` (free variables set to 0), or `None` when
/// the system is inconsistent.
pub fn solve(m: &QMatrix, b: &QVector) -> Result<Option<QVector>> {
    if b.dim() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.dim(),
        });
    }
    let n = m.cols();
    let mut rows: Vec<Vec<Scalar>> = m
        .to_rows()
        .into_iter()
        .zip(b.entries())
        .map(|(mut row, rhs)| {
            row.push(rhs.clone());
            row
        })
        .collect();
    let pivots = rref_in_place(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = QVector::zeros(n);
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = rows[row][n].clone();
    }
    Ok(Some(x))
}

pub fn invert(m: &QMatrix) -> Result<Option<QMatrix>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut rows: Vec<Vec<Scalar>> = m
        .to_rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = rref_in_place(&mut rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    let data = rows.into_iter().flat_map(|row| row[n..].to_vec()).collect();
    Ok(Some(QMatrix::new(n, n, data)?))
}

/// Left kernel of `m`: vectors `w` with `w^T m = 0`, read off the zero rows of
/// the reduced augmented matrix `[m | I]`.
pub fn left_nullspace(m: &QMatrix) -> Vec<QVector> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug: Vec<Vec<Scalar>> = m
        .to_rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..rows).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            row
        })
        .collect();
    let pivots = rref_in_place(&mut aug, cols + rows);
    let known_rank = pivots.iter().filter(|&&p| p < cols).count();
    aug[known_rank..]
        .iter()
        .map(|row| QVector::new(row[cols..].to_vec()))
        .collect()
}

/// Row space kept in reduced row echelon form while rows are streamed in.
///
/// Suited to tall constraint systems: each insertion costs at most
/// `rank * cols` operations and memory stays at `rank` rows.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(cols: usize) -> Self {
        RowEchelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, mut row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (v, b) in row.iter_mut().zip(r) {
                if !b.is_zero() {
                    *v -= &f * b;
                }
            }
        }
        let Some(pivot) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = row[pivot].recip();
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        for r in self.rows.iter_mut() {
            if r[pivot].is_zero() {
                continue;
            }
            let f = r[pivot].clone();
            for (v, b) in r.iter_mut().zip(&row) {
                if !b.is_zero() {
                    *v -= &f * b;
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(at, pivot);
        self.rows.insert(at, row);
        true
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    /// Same canonical kernel basis as [`nullspace`].
    pub fn nullspace(&self) -> Vec<QVector> {
        nullspace_from_rref(&self.to_matrix(), &self.pivots)
    }
}

/// Exact rational square root, when one exists.
pub fn rational_sqrt(v: &Scalar) -> Option<Scalar> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Scalar::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_ints(rows)
    }

    #[test]
    fn scalar_normalized() {
        let v = ratio(6, -4);
        assert_eq!(v, ratio(-3, 2));
        assert_eq!(format_scalar(&v), "-3/2");
        assert_eq!(format_scalar(&int(0)), "0");
        assert_eq!(parse_scalar(" -6/4 ").unwrap(), ratio(-3, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&QMatrix::identity(3));
        assert_eq!(r, QMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = rref(&q(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, q(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);

        let (r, p) = rref(&QMatrix::zeros(2, 3));
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&QMatrix::identity(4)).is_empty());
        assert_eq!(nullspace(&QMatrix::zeros(2, 3)).len(), 3);
        let ns = nullspace(&q(&[&[1, 1, 0]]));
        assert_eq!(
            ns,
            vec![
                QVector::from_ints(&[-1, 1, 0]),
                QVector::from_ints(&[0, 0, 1])
            ]
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(4)), 4);
        assert_eq!(rank(&QMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn solve_examples() {
        let b = QVector::from_ints(&[3, -1, 7]);
        assert_eq!(solve(&QMatrix::identity(3), &b).unwrap(), Some(b));
        // free variable y set to 0
        assert_eq!(
            solve(&q(&[&[1, 1]]), &QVector::from_ints(&[2])).unwrap(),
            Some(QVector::from_ints(&[2, 0]))
        );
        assert_eq!(solve(&q(&[&[0]]), &QVector::from_ints(&[1])).unwrap(), None);
        assert!(matches!(
            solve(&QMatrix::identity(2), &QVector::from_ints(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            invert(&QMatrix::identity(3)).unwrap(),
            Some(QMatrix::identity(3))
        );
        let d = QMatrix::diagonal(&[int(2), int(3)]);
        assert_eq!(
            invert(&d).unwrap(),
            Some(QMatrix::diagonal(&[ratio(1, 2), ratio(1, 3)]))
        );
        assert_eq!(invert(&q(&[&[1, 1], &[1, 1]])).unwrap(), None);
        assert!(matches!(
            invert(&QMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn left_nullspace_annihilates() {
        let m = q(&[&[1, 0], &[2, 0], &[0, 1]]);
        let w = left_nullspace(&m);
        assert_eq!(w.len(), 1);
        let wt = QMatrix::from_columns(3, &w).unwrap().transpose();
        assert!((&wt * &m).is_zero());
    }

    #[test]
    fn row_echelon_matches_rref() {
        let m = q(&[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2], &[2, 0, -2, 3]]);
        let mut acc = RowEchelon::new(4);
        for r in m.to_rows() {
            acc.insert(r);
        }
        let (r, p) = rref(&m);
        assert_eq!(acc.pivots(), &p[..]);
        assert_eq!(
            acc.to_matrix(),
            QMatrix::from_rows(r.to_rows()[..p.len()].to_vec()).unwrap()
        );
        assert_eq!(acc.nullspace(), nullspace(&m));
    }

    #[test]
    fn sqrt_rational() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
    }
}
