//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! [`MultiPoly`] has nonnegative exponents, [`LaurentPoly`] signed ones. Both
//! are the same [`Poly`] type over a different exponent type. Terms live in a
//! `BTreeMap` keyed by [`Monomial`], whose order is graded: total degree first,
//! ties broken lexicographically starting from the highest-index variable, so
//! that `x1 < x2 < ...`. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{format_scalar, QVector, Scalar};

pub trait Exponent: Copy + Ord + Eq + Hash + Debug + Default + Send + Sync {
    fn as_i64(self) -> i64;
    fn plus(self, other: Self) -> Self;
}

impl Exponent for u32 {
    fn as_i64(self) -> i64 {
        self as i64
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
}

impl Exponent for i32 {
    fn as_i64(self) -> i64 {
        self as i64
    }
    fn plus(self, other: Self) -> Self {
        self + other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial<E>(Vec<E>);

impl<E: Exponent> Monomial<E> {
    pub fn new(exponents: Vec<E>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![E::default(); nvars])
    }

    pub fn exponents(&self) -> &[E] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|e| e.as_i64()).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.plus(*b))
                .collect(),
        )
    }
}

impl<E: Exponent> Ord for Monomial<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl<E: Exponent> PartialOrd for Monomial<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E: Exponent> {
    nvars: usize,
    terms: BTreeMap<Monomial<E>, Scalar>,
}

pub type MultiPoly = Poly<u32>;
pub type LaurentPoly = Poly<i32>;

impl<E: Exponent> Poly<E> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    /// `c * m`. Panics if the monomial length differs from `nvars`.
    pub fn term(nvars: usize, m: Monomial<E>, c: Scalar) -> Self {
        assert_eq!(
            m.0.len(),
            nvars,
            "monomial length must equal variable count"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    /// `x_{i+1}^exp` (0-based `i`).
    pub fn var_pow(nvars: usize, i: usize, exp: E) -> Self {
        let mut e = vec![E::default(); nvars];
        e[i] = exp;
        Self::term(nvars, Monomial(e), Scalar::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<E>, &Scalar)> {
        self.terms.iter()
    }

    /// All nonzero terms in ascending graded order.
    pub fn coeff_extract(&self) -> Vec<(Vec<E>, Scalar)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.0.clone(), c.clone()))
            .collect()
    }

    pub fn coefficient(&self, m: &Monomial<E>) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCount(self.nvars, other.nvars));
        }
        Ok(())
    }

    fn accumulate(&mut self, m: Monomial<E>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.accumulate(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Exact value at `point`. A zero coordinate under a negative exponent is a
    /// domain error.
    pub fn eval(&self, point: &QVector) -> Result<Scalar> {
        if point.dim() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.dim(),
            });
        }
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                let e = e.as_i64();
                if e == 0 {
                    continue;
                }
                let x = &point[i];
                if e < 0 && x.is_zero() {
                    return Err(Error::Pole { variable: i + 1 });
                }
                let p = pow(x, e.unsigned_abs());
                if e < 0 {
                    v /= p;
                } else {
                    v *= p;
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Human-readable form using the given variable names, highest term first.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, e)| e.as_i64() != 0)
                    .map(|(i, e)| {
                        let name = names.get(i).copied().unwrap_or("?");
                        match e.as_i64() {
                            1 => name.to_string(),
                            p => format!("{name}^{p}"),
                        }
                    })
                    .collect();
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let sign = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            out.push_str(sign);
            let body = if mono.is_empty() {
                format_scalar(&abs)
            } else if abs.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", format_scalar(&abs), mono.join("*"))
            };
            out.push_str(&body);
        }
        out
    }
}

fn pow(x: &Scalar, e: u64) -> Scalar {
    let mut acc = Scalar::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl<E: Exponent> Add for &Poly<E> {
    type Output = Poly<E>;
    fn add(self, rhs: &Poly<E>) -> Poly<E> {
        self.try_add(rhs)
            .expect("polynomial variable count mismatch")
    }
}

impl<E: Exponent> Sub for &Poly<E> {
    type Output = Poly<E>;
    fn sub(self, rhs: &Poly<E>) -> Poly<E> {
        self.try_sub(rhs)
            .expect("polynomial variable count mismatch")
    }
}

impl<E: Exponent> Mul for &Poly<E> {
    type Output = Poly<E>;
    fn mul(self, rhs: &Poly<E>) -> Poly<E> {
        self.try_mul(rhs)
            .expect("polynomial variable count mismatch")
    }
}

impl<E: Exponent> Neg for &Poly<E> {
    type Output = Poly<E>;
    fn neg(self) -> Poly<E> {
        self.scale(&-Scalar::one())
    }
}
