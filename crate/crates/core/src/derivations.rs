//! Derivations, local derivations and 2-local derivations.
//!
//! Matrices act on column vectors: column `i` of `D` is `D(e_i)`.
//!
//! Local derivations are handled by a squeeze. Every local derivation `B`
//! satisfies `B x in span{D_1 x, ..., D_k x}` for each `x`, where `D_1..D_k`
//! is a basis of `Der`. Imposing that condition on finitely many `x`
//! (sampling) or identically in `x` through minors gives a linear space
//! `outer` with `Der <= LocDer <= outer`; when `outer == Der` every local
//! derivation is a derivation.

use rayon::prelude::*;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::StructureTensor;
use crate::error::{Error, Result};
use crate::formats::Sample;
use crate::linalg::{int, left_nullspace, QMatrix, QVector, RowEchelon, Scalar};
use crate::poly::{Monomial, MultiPoly};

/// Linearly independent `n x n` matrices spanning a space of operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapSpace {
    dim: usize,
    basis: Vec<QMatrix>,
}

impl LinearMapSpace {
    pub fn new(dim: usize, basis: Vec<QMatrix>) -> Result<Self> {
        for m in &basis {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.rows().max(m.cols()),
                });
            }
        }
        let mut acc = RowEchelon::new(dim * dim);
        for m in &basis {
            if !acc.insert(m.entries().to_vec()) {
                return Err(Error::InvalidParameter(
                    "basis matrices are linearly dependent".into(),
                ));
            }
        }
        Ok(LinearMapSpace { dim, basis })
    }

    /// Kernel vectors of an `n^2`-column system, reshaped row-major.
    pub fn from_kernel(dim: usize, kernel: Vec<QVector>) -> Self {
        let basis = kernel
            .iter()
            .map(|v| QMatrix::from_vectorized(dim, dim, v).expect("kernel vector has n^2 entries"))
            .collect();
        LinearMapSpace { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        LinearMapSpace {
            dim,
            basis: Vec::new(),
        }
    }

    /// All of `End(V)`, basis of matrix units in row-major order.
    pub fn full(dim: usize) -> Self {
        let basis = (0..dim * dim)
            .map(|u| {
                let mut m = QMatrix::zeros(dim, dim);
                m[(u / dim, u % dim)] = Scalar::one();
                m
            })
            .collect();
        LinearMapSpace { dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the space.
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    fn echelon(&self) -> RowEchelon {
        let mut acc = RowEchelon::new(self.dim * self.dim);
        for m in &self.basis {
            acc.insert(m.entries().to_vec());
        }
        acc
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        let mut acc = self.echelon();
        !acc.insert(m.entries().to_vec())
    }

    /// `other <= self` as subspaces.
    pub fn contains_space(&self, other: &LinearMapSpace) -> bool {
        self.dim == other.dim && other.basis.iter().all(|m| self.contains(m))
    }

    pub fn same_span(&self, other: &LinearMapSpace) -> bool {
        self.size() == other.size() && self.contains_space(other)
    }

    /// Intersection, computed from the kernel of `[U | -V]`.
    pub fn intersect(&self, other: &LinearMapSpace) -> Result<LinearMapSpace> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n2 = self.dim * self.dim;
        let (p, q) = (self.size(), other.size());
        let mut system = QMatrix::zeros(n2, p + q);
        for (c, m) in self.basis.iter().enumerate() {
            for (r, v) in m.entries().iter().enumerate() {
                system[(r, c)] = v.clone();
            }
        }
        for (c, m) in other.basis.iter().enumerate() {
            for (r, v) in m.entries().iter().enumerate() {
                system[(r, p + c)] = -v.clone();
            }
        }
        let mut acc = RowEchelon::new(n2);
        let mut basis = Vec::new();
        for coeffs in crate::linalg::nullspace(&system) {
            let mut m = QMatrix::zeros(self.dim, self.dim);
            for (c, b) in self.basis.iter().enumerate() {
                if !coeffs[c].is_zero() {
                    m = &m + &b.scale(&coeffs[c]);
                }
            }
            if acc.insert(m.entries().to_vec()) {
                basis.push(m);
            }
        }
        Ok(LinearMapSpace {
            dim: self.dim,
            basis,
        })
    }
}

/// Basis of `Der(alg)` from the `n^3 x n^2` Leibniz system.
pub fn derivation_space(alg: &StructureTensor) -> LinearMapSpace {
    let n = alg.dim();
    let mut acc = RowEchelon::new(n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                // D(e_i e_j)_k
                for l in 0..n {
                    row[k * n + l] += alg.get(i, j, l);
                }
                // - (D(e_i) e_j)_k - (e_i D(e_j))_k
                for l in 0..n {
                    row[l * n + i] -= alg.get(l, j, k);
                    row[l * n + j] -= alg.get(i, l, k);
                }
                acc.insert(row);
            }
        }
    }
    LinearMapSpace::from_kernel(n, acc.nullspace())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationParams {
    pub alpha: Scalar,
    pub beta: Scalar,
}

impl DerivationParams {
    pub fn new(alpha: Scalar, beta: Scalar) -> Self {
        DerivationParams { alpha, beta }
    }
}

/// Positions (0-based) and `(alpha, beta)` weights of the derivation family of
/// `W(2)` in the `e` basis.
pub const DERIVATION_PATTERN: [((usize, usize), (i64, i64)); 10] = [
    ((0, 1), (1, 0)),
    ((1, 1), (0, -1)),
    ((2, 0), (2, 0)),
    ((2, 2), (0, 1)),
    ((3, 2), (3, 0)),
    ((3, 3), (0, 2)),
    ((5, 4), (-1, 0)),
    ((5, 5), (0, 1)),
    ((6, 6), (0, 1)),
    ((6, 7), (1, 0)),
];

/// The derivation of `W(2)` with parameters `(alpha, beta)`.
pub fn derivation_from_params(p: &DerivationParams) -> QMatrix {
    let mut m = QMatrix::zeros(8, 8);
    for &((r, c), (wa, wb)) in &DERIVATION_PATTERN {
        m[(r, c)] = &p.alpha * int(wa) + &p.beta * int(wb);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub i: usize,
    pub j: usize,
    pub residual: QVector,
}

/// Basis pairs with `D(e_i e_j) - D(e_i) e_j - e_i D(e_j) != 0`.
pub fn leibniz_residual(alg: &StructureTensor, d: &QMatrix) -> Result<Vec<LeibnizViolation>> {
    let n = alg.dim();
    if d.rows() != n || d.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.rows().max(d.cols()),
        });
    }
    let images: Vec<QVector> = (0..n).map(|i| d.column(i)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = d.mul_vec(&alg.basis_product(i, j))?;
            let a = alg.product(&images[i], &QVector::unit(n, j))?;
            let b = alg.product(&QVector::unit(n, i), &images[j])?;
            let r = &(&lhs - &a) - &b;
            if !r.is_zero() {
                out.push(LeibnizViolation { i, j, residual: r });
            }
        }
    }
    Ok(out)
}

pub fn is_derivation(alg: &StructureTensor, d: &QMatrix) -> Result<bool> {
    Ok(leibniz_residual(alg, d)?.is_empty())
}

/// `{e_i} u {e_i + e_j : i < j}`.
pub fn sampling_test_vectors(n: usize) -> Vec<QVector> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        out.push(QVector::unit(n, i));
        for j in i + 1..n {
            let mut v = QVector::unit(n, i);
            v[j] = Scalar::one();
            out.push(v);
        }
    }
    out
}

fn check_ambient(alg: &StructureTensor, der: &LinearMapSpace) -> Result<()> {
    if der.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: der.ambient_dim(),
        });
    }
    Ok(())
}

/// Outer approximation of the local derivations from the test vectors of
/// [`sampling_test_vectors`].
pub fn locder_sampling_constraints(
    alg: &StructureTensor,
    der: &LinearMapSpace,
) -> Result<LinearMapSpace> {
    locder_sampling_constraints_with(alg, der, &[])
}

/// As [`locder_sampling_constraints`], with additional test vectors.
pub fn locder_sampling_constraints_with(
    alg: &StructureTensor,
    der: &LinearMapSpace,
    extra: &[QVector],
) -> Result<LinearMapSpace> {
    check_ambient(alg, der)?;
    let n = alg.dim();
    let mut acc = RowEchelon::new(n * n);
    for x in sampling_test_vectors(n).iter().chain(extra) {
        if x.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.dim(),
            });
        }
        // Columns D_1 x .. D_k x; every w with w^T [D_t x] = 0 gives w^T B x = 0.
        let images = der
            .basis()
            .iter()
            .map(|d| d.mul_vec(x))
            .collect::<Result<Vec<_>>>()?;
        let known = QMatrix::from_columns(n, &images)?;
        for w in left_nullspace(&known) {
            let mut row = vec![Scalar::zero(); n * n];
            for r in (0..n).filter(|&r| !w[r].is_zero()) {
                for c in (0..n).filter(|&c| !x[c].is_zero()) {
                    row[r * n + c] = &w[r] * &x[c];
                }
            }
            acc.insert(row);
        }
    }
    Ok(LinearMapSpace::from_kernel(n, acc.nullspace()))
}

/// Lexicographic `size`-subsets of `0..n`.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < size - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    go(0, n, size, &mut cur, &mut out);
    out
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
fn poly_det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    match m.len() {
        0 => MultiPoly::one(nvars),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        k => {
            let mut total = MultiPoly::zero(nvars);
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][c] * &poly_det(&minor, nvars);
                total = if c % 2 == 0 { &total + &t } else { &total - &t };
            }
            total
        }
    }
}

/// Linear constraints on `B` (row-major unknowns) from one minor of
/// `[Bx | D_1 x | ... | D_k x]` on the rows `rows`, one per monomial in `x`.
fn minor_constraints(rows: &[usize], images: &[Vec<MultiPoly>], n: usize) -> Vec<Vec<Scalar>> {
    let mut by_monomial: BTreeMap<Monomial<u32>, Vec<Scalar>> = BTreeMap::new();
    for (p, &r) in rows.iter().enumerate() {
        let rest: Vec<Vec<MultiPoly>> = rows
            .iter()
            .filter(|&&s| s != r)
            .map(|&s| images.iter().map(|col| col[s].clone()).collect())
            .collect();
        let cofactor = poly_det(&rest, n);
        if cofactor.is_zero() {
            continue;
        }
        let cofactor = if p % 2 == 0 { cofactor } else { -&cofactor };
        for c in 0..n {
            let term = &MultiPoly::var_pow(n, c, 1) * &cofactor;
            for (m, coeff) in term.terms() {
                by_monomial
                    .entry(m.clone())
                    .or_insert_with(|| vec![Scalar::zero(); n * n])[r * n + c] += coeff;
            }
        }
    }
    by_monomial.into_values().collect()
}

/// Outer approximation of the local derivations from the vanishing of every
/// `(k+1) x (k+1)` minor of `[Bx | D_1 x | ... | D_k x]` identically in `x`.
/// Requires `k < n`.
pub fn locder_minor_constraints(
    alg: &StructureTensor,
    der: &LinearMapSpace,
) -> Result<LinearMapSpace> {
    check_ambient(alg, der)?;
    let n = alg.dim();
    let k = der.size();
    if k >= n {
        return Err(Error::MethodInapplicable(format!(
            "minor method needs dim Der < n (dim Der = {k}, n = {n})"
        )));
    }
    // D_t x as linear polynomials in x_1..x_n.
    let images: Vec<Vec<MultiPoly>> = der
        .basis()
        .iter()
        .map(|d| {
            (0..n)
                .map(|r| {
                    (0..n).fold(MultiPoly::zero(n), |acc, c| {
                        if d[(r, c)].is_zero() {
                            acc
                        } else {
                            &acc + &MultiPoly::var_pow(n, c, 1).scale(&d[(r, c)])
                        }
                    })
                })
                .collect()
        })
        .collect();
    let per_minor: Vec<Vec<Vec<Scalar>>> = combinations(n, k + 1)
        .par_iter()
        .map(|rows| minor_constraints(rows, &images, n))
        .collect();
    let mut acc = RowEchelon::new(n * n);
    for row in per_minor.into_iter().flatten() {
        acc.insert(row);
    }
    Ok(LinearMapSpace::from_kernel(n, acc.nullspace()))
}

/// Number of minors the minor method expands for `n` and `dim Der = k`.
pub fn minor_count(n: usize, k: usize) -> usize {
    combinations(n, k + 1).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocDerTag {
    Equal,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocDerVerdict {
    pub tag: LocDerTag,
    pub outer: LinearMapSpace,
    /// A member of `outer` outside `Der` when inconclusive.
    pub witness: Option<QMatrix>,
}

/// Squeeze check `Der <= LocDer <= outer`. An inconclusive verdict says only
/// that this outer bound is too coarse, not that `LocDer != Der`.
pub fn certify_locder(der: &LinearMapSpace, outer: &LinearMapSpace) -> Result<LocDerVerdict> {
    if der.ambient_dim() != outer.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: der.ambient_dim(),
            found: outer.ambient_dim(),
        });
    }
    let witness = outer.basis().iter().find(|m| !der.contains(m)).cloned();
    let tag = if witness.is_none() && der.contains_space(outer) && outer.contains_space(der) {
        LocDerTag::Equal
    } else {
        LocDerTag::Inconclusive
    };
    Ok(LocDerVerdict {
        tag,
        outer: outer.clone(),
        witness,
    })
}

/// `(alpha, beta)` from the image of `e_2` under a derivation of `W(2)`:
/// `D(e_2) = alpha e_1 - beta e_2`.
pub fn twolocal_der_recover(image_of_e2: &QVector) -> Result<DerivationParams> {
    if image_of_e2.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: image_of_e2.dim(),
        });
    }
    if let Some(c) = (2..8).find(|&c| !image_of_e2[c].is_zero()) {
        return Err(Error::Unreachable(format!(
            "coordinate {} of the image of e2 is nonzero; no derivation reaches it",
            c + 1
        )));
    }
    Ok(DerivationParams {
        alpha: image_of_e2[0].clone(),
        beta: -image_of_e2[1].clone(),
    })
}

pub(crate) fn find_e2_sample(samples: &[Sample]) -> Result<&Sample> {
    let e2 = QVector::unit(8, 1);
    samples
        .iter()
        .find(|s| s.x == e2)
        .ok_or_else(|| Error::Protocol("samples must include x = e2".into()))
}

pub(crate) fn check_samples_against(samples: &[Sample], m: &QMatrix) -> Result<()> {
    for (index, s) in samples.iter().enumerate() {
        if s.x.dim() != 8 || s.dx.dim() != 8 {
            return Err(Error::DimensionMismatch {
                expected: 8,
                found: if s.x.dim() != 8 {
                    s.x.dim()
                } else {
                    s.dx.dim()
                },
            });
        }
        if m.mul_vec(&s.x)? != s.dx {
            return Err(Error::Counterexample {
                index,
                x: s.x.render(),
            });
        }
    }
    Ok(())
}

/// Recovers `(alpha, beta)` from the `e_2` sample and checks every sample
/// against the resulting derivation.
pub fn twolocal_der_check(samples: &[Sample]) -> Result<DerivationParams> {
    let params = twolocal_der_recover(&find_e2_sample(samples)?.dx)?;
    check_samples_against(samples, &derivation_from_params(&params))?;
    Ok(params)
}
