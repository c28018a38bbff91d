//! Proper maps with prescribed Hermitian invariant groups.
//!
//! All constructions rest on padding: for a polynomial map `p` and small
//! `ε > 0` there is a polynomial `q` with
//! `ε²‖p‖² + ‖q‖² = Σ_j λ_j² ‖z‖^{2m_j}`, so `εp ⊕ q` sends the sphere to
//! the sphere.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianForm;
use crate::invariance::{group_closure, membership, Permutation};
use crate::linalg::{self, CMatrix};
use crate::maps::{catalog, juxtapose_theta, oplus, tensor, tensor_power, BallAutomorphism, RationalMap};
use crate::poly::{MultiIndex, Polynomial};
use crate::{Tolerances, C64};

/// Upper limit on `m_j` increments when separating summand supports.
pub const DISJOINT_SCAN_CAP: u32 = 64;

/// `h = Σ|f_i|² − Σ|g_j|²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResult {
    pub positive: Vec<Polynomial>,
    pub negative: Vec<Polynomial>,
}

/// Eigenvectors scaled by `√|λ|`, split by sign; `|λ| ≤ tol_sig·max|λ|` dropped.
pub fn factor_form(h: &HermitianForm, tol_sig: f64) -> FactorizationResult {
    let n = h.nvars();
    let spectra: Vec<_> = h.blocks().into_iter().map(|b| (linalg::hermitian_eigen(&b.matrix), b.basis)).collect();
    let max = spectra.iter().flat_map(|((v, _), _)| v.iter().map(|x| x.abs())).fold(0.0, f64::max);
    let cut = tol_sig * max;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for ((values, vectors), basis) in spectra {
        for (k, &lambda) in values.iter().enumerate() {
            if lambda.abs() <= cut || max == 0.0 {
                continue;
            }
            let s = lambda.abs().sqrt();
            let mut p = Polynomial::zero(n);
            for (r, m) in basis.iter().enumerate() {
                p.add_term(m.clone(), vectors[(r, k)] * s);
            }
            if lambda > 0.0 {
                positive.push(p);
            } else {
                negative.push(p);
            }
        }
    }
    FactorizationResult { positive, negative }
}

/// Smallest eigenvalue and largest eigenvalue magnitude, blockwise.
fn spectrum_bounds(h: &HermitianForm) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    for b in h.blocks() {
        for x in linalg::hermitian_eigen(&b.matrix).0 {
            min = min.min(x);
            max = max.max(x.abs());
        }
    }
    (if min.is_finite() { min } else { 0.0 }, max)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PadOptions {
    /// `λ_j²` for each retained degree, summing to 1. Equal weights when absent.
    pub weights: Option<Vec<f64>>,
    /// Keep every degree `0..=d`, even those in which `p` has no monomial.
    pub keep_all_degrees: bool,
    /// Fixed `ε`, verified instead of searched.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadResult {
    pub epsilon: f64,
    pub q: Vec<Polynomial>,
    pub lambda: Vec<f64>,
    pub powers: Vec<u32>,
    /// `max|ε²‖p‖² + ‖q‖² − Σλ_j²‖z‖^{2m_j}|` over coefficients.
    pub residual: f64,
}

impl PadResult {
    /// `εp ⊕ q`.
    pub fn padded_map(&self, p: &[Polynomial]) -> Result<RationalMap> {
        let mut num: Vec<Polynomial> = p.iter().map(|c| c.scale_real(self.epsilon)).collect();
        num.extend(self.q.iter().cloned());
        RationalMap::polynomial(num)
    }
}

/// Find `ε` and `q` with `ε²‖p‖² + ‖q‖² = Σ_j λ_j² ‖z‖^{2m_j}`.
///
/// Without a fixed `ε`, the result uses half the supremum of admissible `ε`,
/// located by bisection on `ε²` to relative accuracy `1e−3`.
pub fn pad_to_proper(n: usize, p: &[Polynomial], opts: &PadOptions, tol: &Tolerances) -> Result<PadResult> {
    if n == 0 {
        return Err(Error::Invalid("source dimension must be positive".into()));
    }
    if let Some(c) = p.iter().find(|c| c.nvars() != n) {
        return Err(Error::VariableMismatch { expected: n, found: c.nvars() });
    }
    let d = p.iter().map(Polynomial::degree).max().unwrap_or(0);
    let present: BTreeSet<u32> = p.iter().flat_map(|c| c.terms().map(|(m, _)| m.degree())).collect();
    let powers: Vec<u32> = if present.is_empty() {
        vec![0]
    } else if opts.keep_all_degrees {
        (0..=d).collect()
    } else {
        present.into_iter().collect()
    };
    let weights = match &opts.weights {
        Some(w) => {
            if w.len() != powers.len() {
                return Err(Error::DimensionMismatch { expected: powers.len(), found: w.len() });
            }
            let norm_sq: f64 = w.iter().sum();
            if w.iter().any(|x| *x <= 0.0) || (norm_sq - 1.0).abs() > tol.eq {
                return Err(Error::BadWeights { norm_sq });
            }
            w.clone()
        }
        None => vec![1.0 / powers.len() as f64; powers.len()],
    };
    let mut target = HermitianForm::zero(n);
    for (&j, &w) in powers.iter().zip(&weights) {
        target = target.add(&HermitianForm::norm_power(n, j).scale(w));
    }
    let pf = HermitianForm::from_holomorphic(n, p, p.len());
    let remainder = |t: f64| target.sub(&pf.scale(t));
    let t = match opts.epsilon {
        Some(e) => {
            let (min, max) = spectrum_bounds(&remainder(e * e));
            if min < -tol.sig * max.max(1.0) {
                return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
            }
            e * e
        }
        None if pf.is_zero() => 1.0,
        None => {
            let psd = |t: f64| {
                let (min, max) = spectrum_bounds(&remainder(t));
                min >= -1e-12 * max.max(1.0)
            };
            // Diagonal entries bound the admissible ε² from above.
            let mut hi = pf
                .entries()
                .filter(|(a, b, c)| a == b && c.re > 0.0)
                .map(|(a, _, c)| target.entry(a, a).re / c.re)
                .fold(f64::INFINITY, f64::min);
            let mut lo = 0.0;
            if !psd(hi) {
                while hi - lo > 1e-3 * hi {
                    let mid = 0.5 * (lo + hi);
                    if psd(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            } else {
                lo = hi;
            }
            lo / 4.0
        }
    };
    let epsilon = t.sqrt();
    let rem = remainder(t);
    let q = factor_form(&rem, tol.sig).positive;
    let rebuilt = pf.scale(t).add(&HermitianForm::from_holomorphic(n, &q, q.len()));
    let residual = rebuilt.max_abs_diff(&target);
    Ok(PadResult { epsilon, q, lambda: weights.iter().map(|w| w.sqrt()).collect(), powers, residual })
}

fn poly_map(num: Vec<Polynomial>) -> Result<RationalMap> {
    RationalMap::polynomial(num)
}

/// `f ⊗ z^{⊗m}` for a polynomial component list.
fn tensor_z(num: &[Polynomial], n: usize, m: u32) -> Result<RationalMap> {
    tensor(&poly_map(num.to_vec())?, &tensor_power(n, m)?)
}

/// Degree-3 map with `Γ_f = S_n`; `n = 1` gives the trivial-group fixture.
pub fn symmetric_group_map(n: usize, tol: &Tolerances) -> Result<RationalMap> {
    if n == 0 {
        return Err(Error::Invalid("source dimension must be positive".into()));
    }
    if n == 1 {
        return catalog("corollary-6-2");
    }
    let s2 = 2f64.sqrt();
    // g = (√2 p ⊗ z) ⊕ ξ with p the mixed quadratic monomials, ξ the squares.
    let mut mixed = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            mixed.push(&Polynomial::var(n, j) * &Polynomial::var(n, k));
        }
    }
    let xi: Vec<Polynomial> = (0..n).map(|j| Polynomial::var(n, j).pow(2)).collect();
    let pz = tensor_z(&mixed, n, 1)?.scale(C64::new(s2, 0.0));
    let g = oplus(&pz, &poly_map(xi)?, (1.0, 1.0))?;
    // h = εα ⊕ (β ⊗ z) with α = 1 + Σ z_i.
    let alpha = (0..n).fold(Polynomial::one(n), |acc, j| &acc + &Polynomial::var(n, j));
    let pad = pad_to_proper(n, std::slice::from_ref(&alpha), &PadOptions::default(), tol)?;
    let h = oplus(&poly_map(vec![alpha.scale_real(pad.epsilon)])?, &tensor_z(&pad.q, n, 1)?, (1.0, 1.0))?;
    juxtapose_theta(&g, &h, FRAC_PI_4)
}

/// `εg ⊗ z ⊕ h ⊗ z^{⊗(n+2)}` with `g = Π(1 + z_j)`.
pub fn symmetric_group_map_v2(n: usize, tol: &Tolerances) -> Result<RationalMap> {
    if n == 0 {
        return Err(Error::Invalid("source dimension must be positive".into()));
    }
    let g = (0..n).fold(Polynomial::one(n), |acc, j| &acc * &(&Polynomial::one(n) + &Polynomial::var(n, j)));
    let opts = PadOptions { keep_all_degrees: true, ..PadOptions::default() };
    let pad = pad_to_proper(n, std::slice::from_ref(&g), &opts, tol)?;
    let big_g = tensor_z(&[g.scale_real(pad.epsilon)], n, 1)?;
    let big_h = tensor_z(&pad.q, n, n as u32 + 2)?;
    oplus(&big_g, &big_h, (1.0, 1.0))
}

/// Polynomial proper map with `Γ_f = G` for `G ≤ S_n` generated by `generators`.
pub fn realize_subgroup(n: usize, generators: &[Permutation], tol: &Tolerances) -> Result<RationalMap> {
    if n == 0 {
        return Err(Error::Invalid("source dimension must be positive".into()));
    }
    if n > crate::invariance::PERMUTATION_LIMIT {
        return Err(Error::TooManyVariables { n, limit: crate::invariance::PERMUTATION_LIMIT });
    }
    for g in generators {
        if g.len() != n {
            return Err(Error::NotPermutation { n, detail: format!("generator of length {}", g.len()) });
        }
    }
    let group = subgroup_elements(n, generators, tol)?;
    let full: usize = (1..=n).product();
    if group.len() == full {
        return symmetric_group_map(n, tol);
    }
    let f = symmetric_group_map(n, tol)?;
    // τ = 1 + Σ_{σ∈G} z^{σμ} with μ = (1, …, n).
    let mu = MultiIndex::new((1..=n as u32).collect());
    let mut tau = Polynomial::one(n);
    for s in &group {
        tau.add_term(mu.permuted(s.images()), C64::new(1.0, 0.0));
    }
    let pad = pad_to_proper(n, std::slice::from_ref(&tau), &PadOptions::default(), tol)?;
    let k3 = mu.degree() + 1;
    let g1 = oplus(&poly_map(vec![tau.scale_real(pad.epsilon)])?, &tensor_z(&pad.q, n, k3)?, (1.0, 1.0))?;
    let k4 = f.degree() + 1;
    let g1z = tensor(&g1, &tensor_power(n, k4)?)?;
    juxtapose_theta(&f, &g1z, FRAC_PI_4)
}

/// Elements of the permutation group generated by `generators`, via matrix closure.
pub fn subgroup_elements(n: usize, generators: &[Permutation], tol: &Tolerances) -> Result<Vec<Permutation>> {
    let mats: Vec<CMatrix> = generators.iter().map(Permutation::matrix).collect();
    if mats.is_empty() {
        return Ok(vec![Permutation::identity(n)]);
    }
    let cap: usize = (1..=n).product();
    let mut out = group_closure(&mats, cap, tol.group)?
        .iter()
        .map(|m| Permutation::from_matrix(m, tol.group).expect("products of permutations"))
        .collect::<Vec<_>>();
    out.sort();
    Ok(out)
}

/// Support of `(1 + h) ⊗ z^{⊗m}`.
fn summand_support(h: &Polynomial, m: u32) -> BTreeSet<MultiIndex> {
    let one_plus: Vec<MultiIndex> = std::iter::once(MultiIndex::zero(h.nvars()))
        .chain(h.terms().map(|(a, _)| a.clone()))
        .collect();
    let mut out = BTreeSet::new();
    for b in MultiIndex::all_of_degree(h.nvars(), m) {
        for a in &one_plus {
            out.insert(a.add(&b));
        }
    }
    out
}

/// `m_j`, starting at `j·(max deg h + 1)`, raised until the summand supports
/// are pairwise disjoint.
fn disjoint_powers(invariants: &[Polynomial]) -> Result<Vec<u32>> {
    let step = invariants.iter().map(Polynomial::degree).max().unwrap_or(0) + 1;
    let mut m: Vec<u32> = (1..=invariants.len() as u32).map(|j| j * step).collect();
    for _ in 0..DISJOINT_SCAN_CAP {
        let supports: Vec<_> = invariants.iter().zip(&m).map(|(h, &mj)| summand_support(h, mj)).collect();
        let clash = (0..m.len()).flat_map(|j| (j + 1..m.len()).map(move |k| (j, k))).find(|&(j, k)| {
            !supports[j].is_disjoint(&supports[k])
        });
        match clash {
            None => return Ok(m),
            Some((_, k)) => m[k] += 1,
        }
    }
    Err(Error::DisjointnessUnreachable { cap: DISJOINT_SCAN_CAP })
}

/// Polynomial proper map invariant under the unitary group generated by
/// `generators`, built from a generating set of its invariant polynomials.
///
/// Exactness `Γ_f = G` requires the invariants to generate the invariant
/// algebra; only `G ⊆ Γ_f` is verified.
pub fn realize_from_invariants(
    n: usize,
    invariants: &[Polynomial],
    generators: &[CMatrix],
    tol: &Tolerances,
) -> Result<RationalMap> {
    if invariants.is_empty() {
        return Err(Error::EmptyNumerator);
    }
    for (i, h) in invariants.iter().enumerate() {
        if h.nvars() != n {
            return Err(Error::VariableMismatch { expected: n, found: h.nvars() });
        }
        if h.constant_term().norm() > crate::poly::ZERO_TOL {
            return Err(Error::NonzeroAtOrigin { what: format!("invariant {}", i + 1) });
        }
    }
    let gammas = generators
        .iter()
        .map(|g| {
            if g.nrows() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.nrows() });
            }
            BallAutomorphism::unitary(g.clone(), tol.group)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = disjoint_powers(invariants)?;
    let mut p = Vec::new();
    for (h, &mj) in invariants.iter().zip(&m) {
        let one_plus = h + &Polynomial::one(n);
        p.extend(tensor_z(&[one_plus], n, mj)?.numerator().iter().cloned());
    }
    let pad = pad_to_proper(n, &p, &PadOptions::default(), tol)?;
    let deg_p = p.iter().map(Polynomial::degree).max().unwrap_or(0);
    let eps_p = poly_map(p.iter().map(|c| c.scale_real(pad.epsilon)).collect())?;
    let f = oplus(&eps_p, &tensor_z(&pad.q, n, deg_p + 1)?, (1.0, 1.0))?;
    for (i, g) in gammas.iter().enumerate() {
        let r = membership(&f, g, tol)?;
        if !r.member {
            return Err(Error::Invalid(format!(
                "generator {} does not preserve the construction (deviation {:e}); are the invariants invariant?",
                i + 1,
                r.deviation
            )));
        }
    }
    Ok(f)
}
