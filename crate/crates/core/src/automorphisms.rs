//! Automorphisms of `W(2)`, local automorphism detection and 2-local recovery.
//!
//! Every automorphism of `W(2)` in the `e` basis has the form
//!
//! ```text
//! | 1       a        0      0   0    0   0   0  |
//! | 0       1/b      0      0   0    0   0   0  |
//! | 2ab     a^2 b    b      0   0    0   0   0  |
//! | 3a^2b^2 a^3 b^2  3ab^2  b^2 0    0   0   0  |
//! | 0       0        0      0   1    0   0   0  |
//! | 0       0        0      0   -ab  b   0   0  |
//! | 0       0        0      0   0    0   b   ab |
//! | 0       0        0      0   0    0   0   1  |
//! ```
//!
//! with `b != 0`. [`family_verify_symbolic`] checks that every such matrix is
//! multiplicative as an identity of Laurent polynomials in `(a, b)`.

use rayon::prelude::*;

use num_traits::{One, Zero};

use crate::algebra::{kantor_w2, StructureTensor};
use crate::derivations::{check_samples_against, find_e2_sample};
use crate::error::{Error, Result};
use crate::formats::Sample;
use crate::linalg::{format_scalar, int, invert, rational_sqrt, QMatrix, QVector, Scalar};
use crate::poly::{LaurentPoly, Monomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutParams {
    a: Scalar,
    b: Scalar,
}

impl AutParams {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::InvalidParameter("b must be nonzero".into()));
        }
        Ok(AutParams { a, b })
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    /// `a=..,b=..` with canonical rationals.
    pub fn render(&self) -> String {
        format!("a={},b={}", format_scalar(&self.a), format_scalar(&self.b))
    }
}

/// `coefficient * a^i * b^j` as `(coefficient, i, j)`.
type Monomial2 = (i64, i32, i32);

/// Nonzero positions of the automorphism family (0-based).
const FAMILY_PATTERN: [((usize, usize), Monomial2); 16] = [
    ((0, 0), (1, 0, 0)),
    ((0, 1), (1, 1, 0)),
    ((1, 1), (1, 0, -1)),
    ((2, 0), (2, 1, 1)),
    ((2, 1), (1, 2, 1)),
    ((2, 2), (1, 0, 1)),
    ((3, 0), (3, 2, 2)),
    ((3, 1), (1, 3, 2)),
    ((3, 2), (3, 1, 2)),
    ((3, 3), (1, 0, 2)),
    ((4, 4), (1, 0, 0)),
    ((5, 4), (-1, 1, 1)),
    ((5, 5), (1, 0, 1)),
    ((6, 6), (1, 0, 1)),
    ((6, 7), (1, 1, 1)),
    ((7, 7), (1, 0, 0)),
];

fn in_pattern(r: usize, c: usize) -> bool {
    FAMILY_PATTERN.iter().any(|&(pos, _)| pos == (r, c))
}

fn signed_pow(x: &Scalar, e: i32) -> Scalar {
    let mut v = Scalar::one();
    for _ in 0..e.unsigned_abs() {
        v *= x;
    }
    if e < 0 {
        v.recip()
    } else {
        v
    }
}

/// The automorphism of `W(2)` with parameters `(a, b)`.
pub fn aut_family(p: &AutParams) -> QMatrix {
    let mut m = QMatrix::zeros(8, 8);
    for &((r, c), (coeff, ea, eb)) in &FAMILY_PATTERN {
        m[(r, c)] = int(coeff) * signed_pow(&p.a, ea) * signed_pow(&p.b, eb);
    }
    m
}

/// The family as an `8 x 8` matrix of Laurent polynomials in `(a, b)`.
pub fn symbolic_aut_family() -> Vec<Vec<LaurentPoly>> {
    let mut m = vec![vec![LaurentPoly::zero(2); 8]; 8];
    for &((r, c), (coeff, ea, eb)) in &FAMILY_PATTERN {
        m[r][c] = LaurentPoly::term(2, Monomial::new(vec![ea, eb]), int(coeff));
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutWitness {
    Singular,
    /// First basis pair (0-based) with `phi(e_i e_j) != phi(e_i) phi(e_j)`.
    Pair(usize, usize),
}

/// `None` iff `m` is an automorphism of `alg`.
pub fn aut_check(alg: &StructureTensor, m: &QMatrix) -> Result<Option<AutWitness>> {
    let n = alg.dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows().max(m.cols()),
        });
    }
    if invert(m)?.is_none() {
        return Ok(Some(AutWitness::Singular));
    }
    let images: Vec<QVector> = (0..n).map(|i| m.column(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = m.mul_vec(&alg.basis_product(i, j))?;
            if lhs != alg.product(&images[i], &images[j])? {
                return Ok(Some(AutWitness::Pair(i, j)));
            }
        }
    }
    Ok(None)
}

/// A nonzero coordinate of `phi(e_i e_j) - phi(e_i) phi(e_j)` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicResidual {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicReport {
    /// Residual coordinates computed (`n^2` pairs times `n` coordinates).
    pub checked: usize,
    pub nonzero: Vec<SymbolicResidual>,
}

impl SymbolicReport {
    pub fn is_certified(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// Multiplicativity of the symbolic family on the derived `W(2)`.
pub fn family_verify_symbolic() -> SymbolicReport {
    family_verify_symbolic_with(&kantor_w2(), &symbolic_aut_family())
        .expect("family and W(2) are both 8-dimensional")
}

/// Multiplicativity of a matrix of Laurent polynomials on `alg`, checked
/// coordinate-wise on all basis pairs.
pub fn family_verify_symbolic_with(
    alg: &StructureTensor,
    family: &[Vec<LaurentPoly>],
) -> Result<SymbolicReport> {
    let n = alg.dim();
    if family.len() != n || family.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: family.len(),
        });
    }
    let nvars = family[0][0].nvars();
    let apply = |v: &QVector| -> Vec<LaurentPoly> {
        (0..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| !v[c].is_zero())
                    .fold(LaurentPoly::zero(nvars), |acc, c| {
                        &acc + &family[r][c].scale(&v[c])
                    })
            })
            .collect()
    };
    let columns: Vec<Vec<LaurentPoly>> = (0..n).map(|c| apply(&QVector::unit(n, c))).collect();

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let nonzero: Vec<SymbolicResidual> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let lhs = apply(&alg.basis_product(i, j));
            let mut rhs = vec![LaurentPoly::zero(nvars); n];
            for p in 0..n {
                if columns[i][p].is_zero() {
                    continue;
                }
                for q in 0..n {
                    if columns[j][q].is_zero() {
                        continue;
                    }
                    let pq = &columns[i][p] * &columns[j][q];
                    for (k, r) in rhs.iter_mut().enumerate() {
                        let c = alg.get(p, q, k);
                        if !c.is_zero() {
                            *r = &*r + &pq.scale(c);
                        }
                    }
                }
            }
            lhs.into_iter()
                .zip(rhs)
                .enumerate()
                .filter_map(move |(k, (l, r))| {
                    let residual = &l - &r;
                    (!residual.is_zero()).then_some(SymbolicResidual { i, j, k, residual })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(SymbolicReport {
        checked: n * n * n,
        nonzero,
    })
}

/// `(a, b)` from the image of `e_2`, which is `(a, 1/b, a^2 b, a^3 b^2, 0, 0, 0, 0)`.
pub fn recover_aut_params(image_of_e2: &QVector) -> Result<AutParams> {
    let v = image_of_e2;
    if v.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: v.dim(),
        });
    }
    if v[1].is_zero() {
        return Err(Error::Unreachable(
            "coordinate 2 of the image of e2 is zero; no admissible b".into(),
        ));
    }
    let p = AutParams::new(v[0].clone(), v[1].recip())?;
    let expected = aut_family(&p).column(1);
    if let Some(c) = (2..8).find(|&c| v[c] != expected[c]) {
        return Err(Error::Unreachable(format!(
            "coordinate {} of the image of e2 is {}, expected {} for {}",
            c + 1,
            format_scalar(&v[c]),
            format_scalar(&expected[c]),
            p.render()
        )));
    }
    Ok(p)
}

/// Recovers `(a, b)` from the `e_2` sample and checks every sample against
/// the resulting automorphism.
pub fn twolocal_aut_check(samples: &[Sample]) -> Result<AutParams> {
    let params = recover_aut_params(&find_e2_sample(samples)?.dx)?;
    check_samples_against(samples, &aut_family(&params))?;
    Ok(params)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutVerdict {
    Automorphism(AutParams),
    /// Column (0-based) whose image is reached by no automorphism, with the
    /// multiplicativity witness when one exists.
    NotAutomorphism {
        column: usize,
        witness: Option<AutWitness>,
    },
    /// The map fails a relation every member of the family satisfies.
    NotInFamily {
        relation: String,
    },
}

impl AutVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            AutVerdict::Automorphism(_) => "AUTOMORPHISM",
            AutVerdict::NotAutomorphism { .. } => "NOT_AUTOMORPHISM",
            AutVerdict::NotInFamily { .. } => "NOT_IN_FAMILY",
        }
    }
}

/// Parameter data read off one column, as far as that column determines it.
#[derive(Default)]
struct ColumnData {
    a: Option<Scalar>,
    b: Option<Scalar>,
    ab: Option<Scalar>,
    b_squared: Option<Scalar>,
}

/// Reads `(a, b)` information from column `c` of `m`, or `None` when no member
/// of the family maps `e_{c+1}` to that column. Assumes the zero pattern holds.
fn solve_column(m: &QMatrix, c: usize) -> Option<ColumnData> {
    let x = |r: usize| &m[(r, c)];
    let mut d = ColumnData::default();
    match c {
        // (1, 0, 2ab, 3(ab)^2, ...)
        0 => {
            let ab = x(2) / int(2);
            (x(0).is_one() && x(3) == &(int(3) * &ab * &ab)).then_some(())?;
            d.ab = Some(ab);
        }
        // (a, 1/b, a^2 b, a^3 b^2, ...)
        1 => {
            (!x(1).is_zero()).then_some(())?;
            let (a, b) = (x(0).clone(), x(1).recip());
            let ok = x(2) == &(&a * &a * &b) && x(3) == &(&a * &a * &a * &b * &b);
            ok.then_some(())?;
            d.ab = Some(&a * &b);
            d.a = Some(a);
            d.b = Some(b);
        }
        // (0, 0, b, 3ab^2, ...)
        2 => {
            let b = x(2).clone();
            (!b.is_zero()).then_some(())?;
            let a = x(3) / (int(3) * &b * &b);
            d.ab = Some(&a * &b);
            d.a = Some(a);
            d.b = Some(b);
        }
        // (0, 0, 0, b^2, ...): needs a nonzero rational square
        3 => {
            (!x(3).is_zero() && rational_sqrt(x(3)).is_some()).then_some(())?;
            d.b_squared = Some(x(3).clone());
        }
        // (..., 1, -ab, 0, 0)
        4 => {
            x(4).is_one().then_some(())?;
            d.ab = Some(-x(5).clone());
        }
        5 | 6 => {
            (!x(c).is_zero()).then_some(())?;
            d.b = Some(x(c).clone());
        }
        // (..., ab, 1)
        7 => {
            x(7).is_one().then_some(())?;
            d.ab = Some(x(6).clone());
        }
        _ => unreachable!("W(2) has 8 basis vectors"),
    }
    Some(d)
}

/// Decides whether an `8 x 8` linear map of `W(2)` (`e` basis) is an
/// automorphism by solving each column for its own parameters and forcing
/// them to agree through the additivity relations coming from the pair
/// vectors `e6+e7, e3+e6, e2+e6, e5+e8, e1+e8, e4+e6, e2+e8, e2+e3`.
pub fn local_aut_detect(alg: &StructureTensor, m: &QMatrix) -> Result<AutVerdict> {
    if alg.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: alg.dim(),
        });
    }
    if m.rows() != 8 || m.cols() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: m.rows().max(m.cols()),
        });
    }
    for r in 0..8 {
        for c in 0..8 {
            if !in_pattern(r, c) && !m[(r, c)].is_zero() {
                return Ok(AutVerdict::NotInFamily {
                    relation: format!("entry ({}, {}) must be zero", r + 1, c + 1),
                });
            }
        }
    }

    let mut cols = Vec::with_capacity(8);
    for c in 0..8 {
        match solve_column(m, c) {
            Some(d) => cols.push(d),
            None => {
                return Ok(AutVerdict::NotAutomorphism {
                    column: c,
                    witness: aut_check(alg, m)?,
                })
            }
        }
    }
    let get = |o: &Option<Scalar>| o.clone().expect("column determines this parameter");
    let (b2, b3, b6, b7) = (
        get(&cols[1].b),
        get(&cols[2].b),
        get(&cols[5].b),
        get(&cols[6].b),
    );
    let (ab1, ab2, ab5, ab8) = (
        get(&cols[0].ab),
        get(&cols[1].ab),
        get(&cols[4].ab),
        get(&cols[7].ab),
    );
    let (a2, a3) = (get(&cols[1].a), get(&cols[2].a));
    let b4_sq = get(&cols[3].b_squared);

    let relations: [(&str, bool); 6] = [
        (
            "b(e2) = b(e3) = b(e6) = b(e7)",
            b2 == b3 && b3 == b6 && b6 == b7,
        ),
        ("ab(e1) = ab(e5) = ab(e8)", ab1 == ab5 && ab5 == ab8),
        ("b(e4)^2 = b(e2)^2", b4_sq == &b2 * &b2),
        ("ab(e2) = ab(e8)", ab2 == ab8),
        ("a(e2) = a(e3)", a2 == a3),
        ("ab(e1) = ab(e2)", ab1 == ab2),
    ];
    if let Some((name, _)) = relations.iter().find(|(_, ok)| !ok) {
        return Ok(AutVerdict::NotInFamily {
            relation: name.to_string(),
        });
    }

    let params = AutParams::new(a2, b2)?;
    let family = aut_family(&params);
    for r in 0..8 {
        for c in 0..8 {
            if family[(r, c)] != m[(r, c)] {
                return Ok(AutVerdict::NotInFamily {
                    relation: format!("entry ({}, {}) differs from the family", r + 1, c + 1),
                });
            }
        }
    }
    if let Some(w) = aut_check(alg, m)? {
        return Ok(AutVerdict::NotAutomorphism {
            column: 0,
            witness: Some(w),
        });
    }
    Ok(AutVerdict::Automorphism(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::kantor_s2;
    use crate::linalg::ratio;

    fn p(a: Scalar, b: Scalar) -> AutParams {
        AutParams::new(a, b).unwrap()
    }

    #[test]
    fn family_examples() {
        assert_eq!(aut_family(&p(int(0), int(1))), QMatrix::identity(8));
        let m = aut_family(&p(int(1), int(1)));
        assert_eq!(m.row(2), QVector::from_ints(&[2, 1, 1, 0, 0, 0, 0, 0]));
        assert_eq!(m.row(3), QVector::from_ints(&[3, 1, 3, 1, 0, 0, 0, 0]));
        assert!(AutParams::new(int(0), int(0)).is_err());
    }

    #[test]
    fn aut_check_examples() {
        let w = kantor_w2();
        assert_eq!(aut_check(&w, &QMatrix::identity(8)).unwrap(), None);
        assert_eq!(
            aut_check(&w, &aut_family(&p(ratio(1, 2), int(3)))).unwrap(),
            None
        );
        let mut swap = QMatrix::identity(8);
        swap[(0, 0)] = int(0);
        swap[(1, 1)] = int(0);
        swap[(0, 1)] = int(1);
        swap[(1, 0)] = int(1);
        assert_eq!(aut_check(&w, &swap).unwrap(), Some(AutWitness::Pair(0, 0)));
        assert_eq!(
            aut_check(&w, &QMatrix::zeros(8, 8)).unwrap(),
            Some(AutWitness::Singular)
        );
        assert!(aut_check(&w, &QMatrix::identity(3)).is_err());
    }

    #[test]
    fn symbolic_certification() {
        let report = family_verify_symbolic();
        assert_eq!(report.checked, 512);
        assert!(report.is_certified(), "{:?}", report.nonzero);
    }

    #[test]
    fn symbolic_detects_injected_fault() {
        let mut fam = symbolic_aut_family();
        fam[6][7] = LaurentPoly::var_pow(2, 0, 1);
        let report = family_verify_symbolic_with(&kantor_w2(), &fam).unwrap();
        assert!(!report.is_certified());
    }

    #[test]
    fn symbolic_on_s2_block() {
        let fam: Vec<Vec<LaurentPoly>> = symbolic_aut_family()[..4]
            .iter()
            .map(|r| r[..4].to_vec())
            .collect();
        let report = family_verify_symbolic_with(&kantor_s2(), &fam).unwrap();
        assert_eq!(report.checked, 64);
        assert!(report.is_certified());
    }

    #[test]
    fn recover_examples() {
        let v = QVector::new(vec![
            int(1),
            ratio(1, 2),
            int(2),
            int(4),
            int(0),
            int(0),
            int(0),
            int(0),
        ]);
        assert_eq!(recover_aut_params(&v).unwrap(), p(int(1), int(2)));
        assert_eq!(
            recover_aut_params(&QVector::unit(8, 1)).unwrap(),
            p(int(0), int(1))
        );
        assert!(matches!(
            recover_aut_params(&QVector::unit(8, 0)),
            Err(Error::Unreachable(_))
        ));
        let mut off = v.clone();
        off[4] = int(1);
        assert!(matches!(
            recover_aut_params(&off),
            Err(Error::Unreachable(_))
        ));
    }

    #[test]
    fn detect_examples() {
        let w = kantor_w2();
        let params = p(int(2), ratio(1, 3));
        assert_eq!(
            local_aut_detect(&w, &aut_family(&params)).unwrap(),
            AutVerdict::Automorphism(params)
        );
        assert_eq!(
            local_aut_detect(&w, &QMatrix::identity(8)).unwrap(),
            AutVerdict::Automorphism(p(int(0), int(1)))
        );
        let mut m = aut_family(&p(int(1), int(1)));
        m[(0, 2)] = int(1);
        assert_eq!(local_aut_detect(&w, &m).unwrap().tag(), "NOT_IN_FAMILY");
        assert!(local_aut_detect(&w, &QMatrix::identity(4)).is_err());
    }

    #[test]
    fn detect_relation_and_column_failures() {
        let w = kantor_w2();
        // b(e6) disagrees with b(e2)
        let mut m = aut_family(&p(int(1), int(2)));
        m[(5, 5)] = int(5);
        assert_eq!(
            local_aut_detect(&w, &m).unwrap(),
            AutVerdict::NotInFamily {
                relation: "b(e2) = b(e3) = b(e6) = b(e7)".into()
            }
        );
        // b(e4)^2 = 2 has no rational square root
        let mut m = QMatrix::identity(8);
        m[(3, 3)] = int(2);
        assert!(matches!(
            local_aut_detect(&w, &m).unwrap(),
            AutVerdict::NotAutomorphism {
                column: 3,
                witness: Some(_)
            }
        ));
        // b(e4)^2 = 4 is a square but disagrees with b(e2)^2 = 1
        let mut m = QMatrix::identity(8);
        m[(3, 3)] = int(4);
        assert_eq!(
            local_aut_detect(&w, &m).unwrap(),
            AutVerdict::NotInFamily {
                relation: "b(e4)^2 = b(e2)^2".into()
            }
        );
    }

    #[test]
    fn twolocal_examples() {
        let fam = aut_family(&p(int(1), int(2)));
        let xs = [
            QVector::unit(8, 1),
            QVector::unit(8, 0),
            &QVector::unit(8, 2) + &QVector::unit(8, 4),
        ];
        let mut samples: Vec<Sample> = xs
            .iter()
            .map(|x| Sample {
                x: x.clone(),
                dx: fam.mul_vec(x).unwrap(),
            })
            .collect();
        assert_eq!(twolocal_aut_check(&samples).unwrap(), p(int(1), int(2)));

        let id: Vec<Sample> = xs
            .iter()
            .map(|x| Sample {
                x: x.clone(),
                dx: x.clone(),
            })
            .collect();
        assert_eq!(twolocal_aut_check(&id).unwrap(), p(int(0), int(1)));

        samples[1].dx[2] += int(1);
        assert!(matches!(
            twolocal_aut_check(&samples),
            Err(Error::Counterexample { index: 1, .. })
        ));
    }
}
