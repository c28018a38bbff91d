//! Sparse multivariate polynomials with complex coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! graded lexicographic with `z1` dominating: `1 < z1 < z2 < z1² < z1z2 < z2² < …`.
//! Every iteration, serialization and matrix indexing in the crate follows
//! this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// Coefficients with magnitude at or below this are dropped.
pub const ZERO_TOL: f64 = 1e-13;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    /// The exponent of `z_i`, i.e. `e_i`.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when it stays non-negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Signed difference `self − other`.
    pub fn diff(&self, other: &MultiIndex) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect()
    }

    /// `m! / Π α_i!` for `m = |α|`.
    pub fn multinomial(&self) -> f64 {
        let mut result = 1.0;
        let mut running = 0u32;
        for &e in &self.0 {
            for k in 1..=e {
                running += 1;
                result *= running as f64 / k as f64;
            }
        }
        result
    }

    /// Apply `z ↦ (z_{σ(0)}, …, z_{σ(n−1)})` to the monomial `z^α`.
    /// The result is the exponent of the monomial in the original variables.
    pub fn permuted(&self, sigma: &[usize]) -> MultiIndex {
        let mut e = vec![0; self.len()];
        for (i, &a) in self.0.iter().enumerate() {
            e[sigma[i]] += a;
        }
        MultiIndex(e)
    }

    /// All multi-indices of total degree `degree` in `nvars` variables, in
    /// graded-lex order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if i + 1 == nvars {
                cur[i] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(nvars, i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            return if degree == 0 { vec![MultiIndex(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(nvars, 0, degree, &mut vec![0; nvars], &mut out);
        out
    }

    /// All multi-indices with total degree at most `degree`, in graded-lex order.
    pub fn all_up_to_degree(nvars: usize, degree: u32) -> Vec<MultiIndex> {
        (0..=degree)
            .flat_map(|d| MultiIndex::all_of_degree(nvars, d))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Sparse polynomial in `nvars` complex variables.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<MultiIndex, C64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        Polynomial::monomial(nvars, MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, C64::new(1.0, 0.0))
    }

    pub fn monomial(nvars: usize, exp: MultiIndex, c: C64) -> Self {
        assert_eq!(exp.len(), nvars, "monomial exponent length");
        let mut p = Polynomial::zero(nvars);
        p.add_term(exp, c);
        p
    }

    /// The coordinate function `z_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Polynomial::monomial(nvars, MultiIndex::unit(nvars, i), C64::new(1.0, 0.0))
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C64)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::VariableMismatch { expected: nvars, found: exp.len() });
            }
            p.add_term(MultiIndex(exp), c);
        }
        Ok(p)
    }

    /// Linear form `Σ c_i z_i (+ constant)`.
    pub fn linear(coeffs: &[C64], constant: C64) -> Self {
        let n = coeffs.len();
        let mut p = Polynomial::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::unit(n, i), *c);
        }
        p
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

    /// Maximum total degree over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    /// Minimum total degree over stored terms (order of vanishing at 0).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &C64)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> C64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn constant_term(&self) -> C64 {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Accumulate `c·z^exp`, pruning the entry if it cancels.
    pub fn add_term(&mut self, exp: MultiIndex, c: C64) {
        debug_assert_eq!(exp.len(), self.nvars);
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if c.norm() > ZERO_TOL {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.norm() > ZERO_TOL {
                    *o.get_mut() = s;
                } else {
                    o.remove();
                }
            }
        }
    }

    /// Overwrite the coefficient of `z^exp`.
    pub fn set_coeff(&mut self, exp: MultiIndex, c: C64) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.norm() > ZERO_TOL {
            self.terms.insert(exp, c);
        } else {
            self.terms.remove(&exp);
        }
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -*c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Polynomial {
        self.scale(C64::new(s, 0.0))
    }

    /// Multiply by the monomial `c·z^exp`; cheaper than a general product.
    pub fn mul_monomial(&self, exp: &MultiIndex, c: C64) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.add(exp), a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Polynomial with conjugated coefficients, `conj(p(conj z))`.
    pub fn conj_coeffs(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Re-home the polynomial into `nvars` variables, placing its own
    /// variables at positions `offset..offset + self.nvars()`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.nvars <= nvars);
        let mut out = Polynomial::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            e[offset..offset + self.nvars].copy_from_slice(m.exponents());
            out.add_term(MultiIndex(e), *c);
        }
        out
    }

    /// Direct sum of monomial values in graded-lex order.
    pub fn evaluate(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self.terms.iter().map(|(m, c)| c * monomial_value(m, point)).sum())
    }

    /// `Σ_α c_α Π_i numerators_i^{α_i} · denominator^{degree_bound − |α|}`.
    ///
    /// This is `denominator^{degree_bound} · p(numerators / denominator)`,
    /// a polynomial whenever `degree_bound ≥ deg p`.
    pub fn substitute_fractional(
        &self,
        numerators: &[Polynomial],
        denominator: &Polynomial,
        degree_bound: u32,
    ) -> Result<Polynomial> {
        if numerators.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: numerators.len() });
        }
        let target = denominator.nvars;
        for q in numerators {
            if q.nvars != target {
                return Err(Error::VariableMismatch { expected: target, found: q.nvars });
            }
        }
        if self.degree() > degree_bound {
            return Err(Error::DegreeBound { bound: degree_bound, degree: self.degree() });
        }
        let den_is_one = denominator.terms.len() == 1
            && denominator.constant_term() == C64::new(1.0, 0.0);
        let den_powers: Vec<Polynomial> = if den_is_one {
            Vec::new()
        } else {
            let mut v = vec![Polynomial::one(target)];
            for k in 1..=degree_bound as usize {
                let next = &v[k - 1] * denominator;
                v.push(next);
            }
            v
        };
        // Powers of each numerator, grown on demand.
        let mut num_powers: Vec<Vec<Polynomial>> =
            numerators.iter().map(|_| vec![Polynomial::one(target)]).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, *c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while num_powers[i].len() <= e as usize {
                    let next = num_powers[i].last().unwrap() * &numerators[i];
                    num_powers[i].push(next);
                }
                term = &term * &num_powers[i][e as usize];
            }
            if !den_is_one {
                term = &term * &den_powers[(degree_bound - m.degree()) as usize];
            }
            for (mm, cc) in term.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Substitute `z ↦ (c_0 z_{σ(0)}, …)`, i.e. `p(Lσz)` for a diagonal
    /// phase matrix `L` and permutation matrix `σ` with `(σz)_i = z_{σ(i)}`.
    pub fn substitute_monomial(&self, sigma: &[usize], phases: &[C64]) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut factor = *c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    factor *= phases[i].powu(e);
                }
            }
            out.add_term(m.permuted(sigma), factor);
        }
        out
    }

    /// `|a − b| ≤ tol·max(1, scale)` for every coefficient, `scale` the largest
    /// coefficient magnitude of either input.
    pub fn approx_eq(&self, other: &Polynomial, tol: f64) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let scale = 1f64.max(self.max_abs_coeff()).max(other.max_abs_coeff());
        self.max_abs_diff(other) <= tol * scale
    }

    pub fn max_abs_diff(&self, other: &Polynomial) -> f64 {
        let mut worst = 0f64;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coeff(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

/// `Π point_i^{α_i}`.
pub fn monomial_value(m: &MultiIndex, point: &[C64]) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for (x, &e) in point.iter().zip(m.exponents()) {
        if e > 0 {
            v *= x.powu(e);
        }
    }
    v
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)z^{:?}", c.re, c.im, m)?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial variable counts differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial variable counts differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial variable counts differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale_real(-1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { exp: m.0.clone(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(d)?;
        Polynomial::from_terms(
            raw.nvars,
            raw.terms.into_iter().map(|t| (t.exp, C64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
