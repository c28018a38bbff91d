//! Polynomial equations in the entries of `U ∈ SU(n,1)` whose solutions are
//! the Hermitian invariant group of a map.
//!
//! In homogeneous coordinates `w = (z, s)` and row-vector convention
//! `w ↦ wU`, a matrix `U` lies in the group iff
//! `‖P(wU)‖² − |Q(wU)|² − (λ(U)/h_0)(‖P(w)‖² − |Q(w)|²) = 0`
//! with `λ(U) = ‖P(e_{n+1}U)‖² − |Q(e_{n+1}U)|²` and
//! `h_0 = ‖p(0)‖² − |q(0)|²` (`h_0 = −1` when `f(0) = 0`). Each coefficient
//! of `w^A w̄^B` gives one equation in the unknowns `u_ik` and `ū_ik`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::maps::{BallAutomorphism, RationalMap};
use crate::poly::{MultiIndex, Polynomial};
use crate::C64;

/// One equation: the coefficient of `w^A w̄^B`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Equation {
    pub w_exp: Vec<u32>,
    pub wbar_exp: Vec<u32>,
    /// Polynomial in the unknowns listed in [`InvarianceSystem::unknowns`].
    pub poly: Polynomial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceSystem {
    pub n: usize,
    pub degree: u32,
    /// `u_ik` (row-major) then `conj(u_ik)`.
    pub unknowns: Vec<String>,
    /// Homogenized numerator and denominator in `w = (z, s)`.
    pub homogenized: Vec<Polynomial>,
    pub lambda: Polynomial,
    pub equations: Vec<Equation>,
    /// Entries `i ≤ j` of `U J U* − J`, `J = diag(1, …, 1, −1)`.
    pub group_constraints: Vec<Polynomial>,
    /// `det U − 1`.
    pub determinant_constraint: Polynomial,
}

/// Residuals of a system at a numeric `U`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemResiduals {
    /// `max |E_AB|` divided by the size of the two sides.
    pub invariance: f64,
    pub invariance_abs: f64,
    pub group: f64,
    pub determinant: f64,
}

fn homogenize(p: &Polynomial, d: u32) -> Polynomial {
    let n = p.nvars();
    let mut out = Polynomial::zero(n + 1);
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        e.push(d - m.degree());
        out.add_term(MultiIndex::new(e), *c);
    }
    out
}

pub fn emit_invariance_system(f: &RationalMap) -> Result<InvarianceSystem> {
    let n = f.n();
    let k = n + 1;
    let nu = k * k;
    let d = f.degree();
    let mut comps: Vec<Polynomial> = f.numerator().iter().map(|p| homogenize(p, d)).collect();
    comps.push(homogenize(f.denominator(), d));
    let signs: Vec<f64> = (0..comps.len()).map(|j| if j < f.m() { 1.0 } else { -1.0 }).collect();

    // Variables of the joint ring: [w (k), u (nu), w̄ (k), ū (nu)].
    let half = k + nu;
    let total = 2 * half;
    let u_var = |i: usize, c: usize| k + i * k + c;
    // (wU)_c = Σ_i w_i u_ic
    let substituted: Vec<Polynomial> = (0..k)
        .map(|c| {
            let mut p = Polynomial::zero(half);
            for i in 0..k {
                let mut e = vec![0; half];
                e[i] = 1;
                e[u_var(i, c)] = 1;
                p.add_term(MultiIndex::new(e), C64::new(1.0, 0.0));
            }
            p
        })
        .collect();
    let one = Polynomial::one(half);
    let mut lhs: BTreeMap<(Vec<u32>, Vec<u32>), Polynomial> = BTreeMap::new();
    for (p, s) in comps.iter().zip(&signs) {
        let pu = p.substitute_fractional(&substituted, &one, d)?;
        let left = pu.embed(total, 0);
        let right = pu.conj_coeffs().embed(total, half);
        let prod = (&left * &right).scale_real(*s);
        for (m, c) in prod.terms() {
            let e = m.exponents();
            let key = (e[..k].to_vec(), e[half..half + k].to_vec());
            let mut ue = e[k..half].to_vec();
            ue.extend_from_slice(&e[half + k..]);
            lhs.entry(key).or_insert_with(|| Polynomial::zero(2 * nu)).add_term(MultiIndex::new(ue), *c);
        }
    }

    // λ(U): components evaluated at the last row of U.
    let last_row: Vec<Polynomial> = (0..k)
        .map(|c| Polynomial::monomial(2 * nu, MultiIndex::unit(2 * nu, n * k + c), C64::new(1.0, 0.0)))
        .collect();
    let one_u = Polynomial::one(2 * nu);
    let mut lambda = Polynomial::zero(2 * nu);
    for (p, s) in comps.iter().zip(&signs) {
        let v = p.substitute_fractional(&last_row, &one_u, d)?;
        let vbar = conj_unknowns(&v, nu);
        lambda = &lambda + &(&v * &vbar).scale_real(*s);
    }

    // Form of the homogenized map in w, w̄.
    let mut form: BTreeMap<(Vec<u32>, Vec<u32>), C64> = BTreeMap::new();
    for (p, s) in comps.iter().zip(&signs) {
        for (a, ca) in p.terms() {
            for (b, cb) in p.terms() {
                *form.entry((a.exponents().to_vec(), b.exponents().to_vec())).or_default() +=
                    ca * cb.conj() * s;
            }
        }
    }
    let origin = vec![0; n].into_iter().chain([d]).collect::<Vec<u32>>();
    let h0 = form.get(&(origin.clone(), origin)).copied().unwrap_or_default().re;
    if h0.abs() <= crate::poly::ZERO_TOL {
        return Err(Error::Invalid("map sends the origin to the boundary".into()));
    }
    for (key, c) in &form {
        if c.norm() > crate::poly::ZERO_TOL {
            let e = lhs.entry(key.clone()).or_insert_with(|| Polynomial::zero(2 * nu));
            *e = &*e + &lambda.scale(-*c / h0);
        }
    }
    let equations = lhs
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|((a, b), poly)| Equation { w_exp: a, wbar_exp: b, poly })
        .collect();

    let mut unknowns: Vec<String> = Vec::with_capacity(2 * nu);
    for conj in [false, true] {
        for i in 0..k {
            for c in 0..k {
                let name = format!("u{}{}", i + 1, c + 1);
                unknowns.push(if conj { format!("conj({name})") } else { name });
            }
        }
    }
    Ok(InvarianceSystem {
        n,
        degree: d,
        unknowns,
        homogenized: comps,
        lambda,
        equations,
        group_constraints: group_constraints(k),
        determinant_constraint: determinant(k),
    })
}

/// Swap `u ↔ ū` and conjugate coefficients.
fn conj_unknowns(p: &Polynomial, nu: usize) -> Polynomial {
    let mut out = Polynomial::zero(2 * nu);
    for (m, c) in p.terms() {
        let e = m.exponents();
        let mut swapped = e[nu..].to_vec();
        swapped.extend_from_slice(&e[..nu]);
        out.add_term(MultiIndex::new(swapped), c.conj());
    }
    out
}

fn group_constraints(k: usize) -> Vec<Polynomial> {
    let nu = k * k;
    let mut out = Vec::new();
    for i in 0..k {
        for j in i..k {
            let mut p = Polynomial::zero(2 * nu);
            for c in 0..k {
                let sign = if c + 1 == k { -1.0 } else { 1.0 };
                let mut e = vec![0; 2 * nu];
                e[i * k + c] += 1;
                e[nu + j * k + c] += 1;
                p.add_term(MultiIndex::new(e), C64::new(sign, 0.0));
            }
            if i == j {
                let target = if i + 1 == k { -1.0 } else { 1.0 };
                p.add_term(MultiIndex::zero(2 * nu), C64::new(-target, 0.0));
            }
            out.push(p);
        }
    }
    out
}

fn determinant(k: usize) -> Polynomial {
    let nu = k * k;
    let mut p = Polynomial::constant(2 * nu, C64::new(-1.0, 0.0));
    for perm in super::group::Permutation::all(k) {
        let sigma = perm.images();
        let mut inversions = 0;
        for a in 0..k {
            for b in a + 1..k {
                if sigma[a] > sigma[b] {
                    inversions += 1;
                }
            }
        }
        let mut e = vec![0; 2 * nu];
        for (i, &s) in sigma.iter().enumerate() {
            e[i * k + s] += 1;
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        p.add_term(MultiIndex::new(e), C64::new(sign, 0.0));
    }
    p
}

/// Row-convention matrix `U` of `γ`, scaled to determinant 1.
pub fn row_matrix(g: &BallAutomorphism) -> CMatrix {
    let m = g.homogeneous_matrix().transpose();
    let k = m.nrows();
    let det = m.determinant();
    let scale = det.powf(1.0 / k as f64);
    m.map(|x| x / scale)
}

impl InvarianceSystem {
    fn values(&self, u: &CMatrix) -> Result<Vec<C64>> {
        let k = self.n + 1;
        if u.nrows() != k || u.ncols() != k {
            return Err(Error::DimensionMismatch { expected: k, found: u.nrows() });
        }
        let mut v: Vec<C64> = (0..k).flat_map(|i| (0..k).map(move |c| (i, c))).map(|(i, c)| u[(i, c)]).collect();
        let conj: Vec<C64> = v.iter().map(|x| x.conj()).collect();
        v.extend(conj);
        Ok(v)
    }

    pub fn evaluate(&self, u: &CMatrix) -> Result<SystemResiduals> {
        let x = self.values(u)?;
        let lambda = self.lambda.evaluate(&x)?;
        let mut worst = 0f64;
        for e in &self.equations {
            worst = worst.max(e.poly.evaluate(&x)?.norm());
        }
        // Both sides are homogeneous of degree 2d in U; |λ(U)| sets the scale.
        let scale = lambda.norm().max(f64::MIN_POSITIVE);
        let mut group = 0f64;
        for p in &self.group_constraints {
            group = group.max(p.evaluate(&x)?.norm());
        }
        Ok(SystemResiduals {
            invariance: worst / scale,
            invariance_abs: worst,
            group,
            determinant: self.determinant_constraint.evaluate(&x)?.norm(),
        })
    }
}
