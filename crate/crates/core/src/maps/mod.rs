//! Rational maps `f = p/q` into (generalized) balls, ball automorphisms and
//! the construction algebra: tensor products, juxtaposition, descendants and
//! tensor powers.

mod automorphism;
mod catalog;
mod subspace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};
use crate::C64;

pub use automorphism::BallAutomorphism;
pub use automorphism::{matrix_from_json, matrix_to_json};
pub use catalog::{catalog, catalog_names};
pub use subspace::Subspace;

/// Relative tolerance for deciding that two denominators coincide.
const SAME_DENOMINATOR_TOL: f64 = 1e-12;

/// `f = p/q : C^n → C^{m+l}` with `q(0) = 1`.
///
/// The first `m` components carry a positive sign in the target form and the
/// last `l` a negative sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct RationalMap {
    n: usize,
    m: usize,
    l: usize,
    numerator: Vec<Polynomial>,
    denominator: Polynomial,
}

#[derive(Deserialize)]
struct RawMap {
    n: usize,
    #[serde(default)]
    m: Option<usize>,
    #[serde(default)]
    l: usize,
    numerator: Vec<Polynomial>,
    #[serde(default)]
    denominator: Option<Polynomial>,
}

impl TryFrom<RawMap> for RationalMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        let den = raw.denominator.unwrap_or_else(|| Polynomial::one(raw.n));
        if den.nvars() != raw.n {
            return Err(Error::VariableMismatch { expected: raw.n, found: den.nvars() });
        }
        if let Some(m) = raw.m {
            if m + raw.l != raw.numerator.len() {
                return Err(Error::Invalid(format!(
                    "m + l = {} but numerator has {} components",
                    m + raw.l,
                    raw.numerator.len()
                )));
            }
        }
        RationalMap::new(raw.numerator, den, raw.l)
    }
}

impl RationalMap {
    /// Normalize so that `q(0) = 1`. Lowest terms are the caller's responsibility.
    pub fn new(numerator: Vec<Polynomial>, denominator: Polynomial, l: usize) -> Result<Self> {
        if numerator.is_empty() {
            return Err(Error::EmptyNumerator);
        }
        let n = denominator.nvars();
        for p in &numerator {
            if p.nvars() != n {
                return Err(Error::VariableMismatch { expected: n, found: p.nvars() });
            }
        }
        if l > numerator.len() {
            return Err(Error::Invalid(format!("l = {l} exceeds target dimension {}", numerator.len())));
        }
        let q0 = denominator.constant_term();
        if q0.norm() <= crate::poly::ZERO_TOL {
            return Err(Error::DenominatorVanishes);
        }
        let inv = C64::new(1.0, 0.0) / q0;
        let mut denominator = denominator.scale(inv);
        // Pinned so that exact comparisons against 1 work.
        denominator.set_coeff(MultiIndex::zero(n), C64::new(1.0, 0.0));
        Ok(RationalMap {
            n,
            m: numerator.len() - l,
            l,
            numerator: numerator.iter().map(|p| p.scale(inv)).collect(),
            denominator,
        })
    }

    /// Polynomial map into a ball.
    pub fn polynomial(numerator: Vec<Polynomial>) -> Result<Self> {
        let n = numerator.first().map(|p| p.nvars()).ok_or(Error::EmptyNumerator)?;
        RationalMap::new(numerator, Polynomial::one(n), 0)
    }

    pub fn identity(n: usize) -> Self {
        RationalMap::polynomial((0..n).map(|i| Polynomial::var(n, i)).collect()).expect("n ≥ 1")
    }

    /// `γ` viewed as a rational map.
    pub fn from_automorphism(g: &BallAutomorphism) -> Self {
        let (nums, den) = g.fractional_parts();
        RationalMap::new(nums, den, 0).expect("denominator is 1 at the origin")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn target_dim(&self) -> usize {
        self.numerator.len()
    }

    pub fn numerator(&self) -> &[Polynomial] {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn degree(&self) -> u32 {
        self.numerator.iter().map(|p| p.degree()).max().unwrap_or(0).max(self.denominator.degree())
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.degree() == 0
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.numerator.iter().all(|p| p.constant_term().norm() <= crate::poly::ZERO_TOL)
    }

    /// Warning text when `deg q > d − 1` for `d ≥ 1`, which no proper map
    /// in lowest terms can have.
    pub fn denominator_degree_warning(&self) -> Option<String> {
        let d = self.degree();
        let dq = self.denominator.degree();
        (d >= 1 && dq + 1 > d).then(|| {
            format!("denominator degree {dq} exceeds d - 1 = {}; fraction may not be in lowest terms", d - 1)
        })
    }

    pub fn evaluate(&self, z: &[C64]) -> Result<Vec<C64>> {
        let q = self.denominator.evaluate(z)?;
        if q.norm() == 0.0 {
            return Err(Error::DenominatorVanishes);
        }
        self.numerator.iter().map(|p| Ok(p.evaluate(z)? / q)).collect()
    }

    /// Coefficientwise comparison of numerators and denominators.
    pub fn approx_eq(&self, other: &RationalMap, tol: f64) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.l == other.l
            && self.denominator.approx_eq(&other.denominator, tol)
            && self.numerator.iter().zip(&other.numerator).all(|(a, b)| a.approx_eq(b, tol))
    }

    fn with_parts(&self, numerator: Vec<Polynomial>, denominator: Polynomial) -> Result<Self> {
        RationalMap::new(numerator, denominator, self.l)
    }

    pub fn scale(&self, c: C64) -> RationalMap {
        RationalMap { numerator: self.numerator.iter().map(|p| p.scale(c)).collect(), ..self.clone() }
    }
}

/// `Σ_j w_j p_j + v q`.
fn linear_combination(ps: &[Polynomial], weights: &[C64], q: &Polynomial, v: C64) -> Polynomial {
    let mut out = q.scale(v);
    for (p, w) in ps.iter().zip(weights) {
        if w.norm() > 0.0 {
            out = &out + &p.scale(*w);
        }
    }
    out
}

/// `f∘γ`, renormalized so that the denominator is 1 at the origin.
pub fn compose_source(f: &RationalMap, g: &BallAutomorphism) -> Result<RationalMap> {
    if g.dim() != f.n {
        return Err(Error::DimensionMismatch { expected: f.n, found: g.dim() });
    }
    if let Some((sigma, phases)) = g.monomial_structure() {
        let num = f.numerator.iter().map(|p| p.substitute_monomial(&sigma, &phases)).collect();
        return f.with_parts(num, f.denominator.substitute_monomial(&sigma, &phases));
    }
    let d = f.degree();
    let (nums, den) = g.fractional_parts();
    let num = f
        .numerator
        .iter()
        .map(|p| p.substitute_fractional(&nums, &den, d))
        .collect::<Result<Vec<_>>>()?;
    let q = f.denominator.substitute_fractional(&nums, &den, d)?;
    f.with_parts(num, q)
}

/// `ψ∘f` for a ball target.
pub fn compose_target(f: &RationalMap, psi: &BallAutomorphism) -> Result<RationalMap> {
    if f.l != 0 {
        return Err(Error::GeneralizedTarget { l: f.l });
    }
    let big_n = f.target_dim();
    if psi.dim() != big_n {
        return Err(Error::DimensionMismatch { expected: big_n, found: psi.dim() });
    }
    // P = U(a q − L_a p), Q = q − ⟨p, a⟩.
    let u = psi.formula_unitary();
    let m = -(&u * psi.l_matrix());
    let v = &u * psi.a();
    let num = (0..big_n)
        .map(|k| {
            let row: Vec<C64> = (0..big_n).map(|j| m[(k, j)]).collect();
            linear_combination(&f.numerator, &row, &f.denominator, v[k])
        })
        .collect();
    let conj_a: Vec<C64> = psi.a().iter().map(|x| -x.conj()).collect();
    let q = linear_combination(&f.numerator, &conj_a, &f.denominator, C64::new(1.0, 0.0));
    RationalMap::new(num, q, 0)
}

/// `f ⊗ g`: components `p_i p'_j` in lexicographic `(i, j)` order.
pub fn tensor(f: &RationalMap, g: &RationalMap) -> Result<RationalMap> {
    if f.n != g.n {
        return Err(Error::VariableMismatch { expected: f.n, found: g.n });
    }
    if f.l != 0 || g.l != 0 {
        return Err(Error::GeneralizedTarget { l: f.l.max(g.l) });
    }
    let mut num = Vec::with_capacity(f.target_dim() * g.target_dim());
    for p in &f.numerator {
        for r in &g.numerator {
            num.push(p * r);
        }
    }
    RationalMap::new(num, &f.denominator * &g.denominator, 0)
}

/// Weighted orthogonal sum `w_1 f_1 ⊕ ⋯ ⊕ w_K f_K`.
///
/// Positive blocks come first in input order, then negative blocks.
/// Inputs must share one denominator.
pub fn direct_sum(maps: &[&RationalMap], weights: &[C64]) -> Result<RationalMap> {
    let first = maps.first().ok_or(Error::EmptyNumerator)?;
    if weights.len() != maps.len() {
        return Err(Error::DimensionMismatch { expected: maps.len(), found: weights.len() });
    }
    for f in maps {
        if f.n != first.n {
            return Err(Error::VariableMismatch { expected: first.n, found: f.n });
        }
        if !f.denominator.approx_eq(&first.denominator, SAME_DENOMINATOR_TOL) {
            return Err(Error::MixedDenominators);
        }
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (f, w) in maps.iter().zip(weights) {
        pos.extend(f.numerator[..f.m].iter().map(|p| p.scale(*w)));
        neg.extend(f.numerator[f.m..].iter().map(|p| p.scale(*w)));
    }
    let l = neg.len();
    pos.extend(neg);
    RationalMap::new(pos, first.denominator.clone(), l)
}

/// `c f ⊕ s g`.
pub fn oplus(f: &RationalMap, g: &RationalMap, weights: (f64, f64)) -> Result<RationalMap> {
    direct_sum(&[f, g], &[C64::new(weights.0, 0.0), C64::new(weights.1, 0.0)])
}

/// `J_θ(f, g) = cos θ f ⊕ sin θ g`.
pub fn juxtapose_theta(f: &RationalMap, g: &RationalMap, theta: f64) -> Result<RationalMap> {
    oplus(f, g, (theta.cos(), theta.sin()))
}

/// `J_λ(f_1, …, f_K) = λ_1 f_1 ⊕ ⋯ ⊕ λ_K f_K` with `‖λ‖ = 1`.
pub fn juxtapose_lambda(maps: &[&RationalMap], lambda: &[C64], tol: f64) -> Result<RationalMap> {
    let norm_sq: f64 = lambda.iter().map(|x| x.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > tol {
        return Err(Error::BadWeights { norm_sq });
    }
    direct_sum(maps, lambda)
}

/// `E_{A,g} f = ((π_A f) ⊗ g) ⊕ (1 − π_A) f`, expressed in orthonormal
/// coordinates on `A` and `A^⊥`. The result is unitarily equivalent to the
/// version with values in `C^N ⊗ C^{N'} ⊕ C^N`, with the same form.
pub fn descend(f: &RationalMap, a: &Subspace, g: &RationalMap) -> Result<RationalMap> {
    if a.ambient() != f.target_dim() {
        return Err(Error::DimensionMismatch { expected: f.target_dim(), found: a.ambient() });
    }
    if f.n != g.n {
        return Err(Error::VariableMismatch { expected: f.n, found: g.n });
    }
    if f.l != 0 || g.l != 0 {
        return Err(Error::GeneralizedTarget { l: f.l.max(g.l) });
    }
    let project = |e: &crate::linalg::CVector| -> Polynomial {
        let w: Vec<C64> = e.iter().map(|x| x.conj()).collect();
        linear_combination(&f.numerator, &w, &f.denominator, C64::new(0.0, 0.0))
    };
    let mut num = Vec::new();
    for e in a.basis() {
        let coord = project(e);
        for r in &g.numerator {
            num.push(&coord * r);
        }
    }
    for e in a.complement().basis() {
        num.push(&project(e) * &g.denominator);
    }
    RationalMap::new(num, &f.denominator * &g.denominator, 0)
}

/// Span of the coefficient vectors of the lowest-order homogeneous part.
pub fn lowest_order_subspace(f: &RationalMap) -> Result<Subspace> {
    if !f.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let nu = f.numerator.iter().filter_map(|p| p.order()).min().ok_or(Error::EmptyNumerator)?;
    let vectors: Vec<Vec<C64>> = MultiIndex::all_of_degree(f.n, nu)
        .iter()
        .map(|alpha| f.numerator.iter().map(|p| p.coeff(alpha)).collect())
        .collect();
    Subspace::span(f.target_dim(), &vectors)
}

/// `z^{⊗m}` with repeated components merged: `√(m!/α!) z^α` over `|α| = m`.
pub fn tensor_power(n: usize, m: u32) -> Result<RationalMap> {
    if n == 0 {
        return Err(Error::Invalid("source dimension must be positive".into()));
    }
    let num = MultiIndex::all_of_degree(n, m)
        .into_iter()
        .map(|alpha| {
            let c = alpha.multinomial().sqrt();
            Polynomial::monomial(n, alpha, C64::new(c, 0.0))
        })
        .collect();
    RationalMap::polynomial(num)
}

/// `(z_1, …, z_{n−1}, z_1 z_n, …, z_{n−1} z_n, z_n²)`.
pub fn whitney(n: usize) -> Result<RationalMap> {
    if n == 0 {
        return Err(Error::Invalid("source dimension must be positive".into()));
    }
    let last = Polynomial::var(n, n - 1);
    let mut num: Vec<Polynomial> = (0..n - 1).map(|i| Polynomial::var(n, i)).collect();
    num.extend((0..n - 1).map(|i| &Polynomial::var(n, i) * &last));
    num.push(&last * &last);
    RationalMap::polynomial(num)
}
