//! Hermitian forms `Σ c_{αβ} z^α z̄^β` over the monomial basis.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::maps::{tensor, BallAutomorphism, RationalMap};
use crate::poly::{monomial_value, MultiIndex, Polynomial, ZERO_TOL};
use crate::C64;

/// Real polynomial `Σ c_{αβ} z^α z̄^β` with `c_{βα} = conj(c_{αβ})`.
///
/// Both `(α, β)` and `(β, α)` are stored.
#[derive(Clone, PartialEq)]
pub struct HermitianForm {
    nvars: usize,
    entries: BTreeMap<(MultiIndex, MultiIndex), C64>,
}

/// Inertia of a Hermitian coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    /// Eigenvalues with `|λ| ≤ threshold` count as zero.
    pub threshold: f64,
    /// Smallest `|λ|` classified nonzero.
    pub smallest_nonzero: Option<f64>,
    /// Largest `|λ|` classified zero.
    pub largest_zero: Option<f64>,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

/// Connected diagonal block of a form's coefficient matrix.
pub struct FormBlock {
    pub basis: Vec<MultiIndex>,
    pub matrix: CMatrix,
}

impl HermitianForm {
    pub fn zero(nvars: usize) -> Self {
        HermitianForm { nvars, entries: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut h = HermitianForm::zero(nvars);
        let z = MultiIndex::zero(nvars);
        h.add_entry(z.clone(), z, C64::new(c, 0.0));
        h
    }

    /// `‖z‖^{2k} = Σ_{|α|=k} (k!/α!) |z^α|²`.
    pub fn norm_power(nvars: usize, k: u32) -> Self {
        let mut h = HermitianForm::zero(nvars);
        for a in MultiIndex::all_of_degree(nvars, k) {
            let w = a.multinomial();
            h.add_entry(a.clone(), a, C64::new(w, 0.0));
        }
        h
    }

    /// `ρ = ‖z‖² − 1`.
    pub fn rho(nvars: usize) -> Self {
        HermitianForm::norm_power(nvars, 1).sub(&HermitianForm::constant(nvars, 1.0))
    }

    /// `Σ_{j<m} |p_j|² − Σ_{j≥m} |p_j|²`.
    pub fn from_holomorphic(nvars: usize, components: &[Polynomial], m: usize) -> Self {
        let mut acc: HashMap<(MultiIndex, MultiIndex), C64> = HashMap::new();
        for (j, p) in components.iter().enumerate() {
            let sign = if j < m { 1.0 } else { -1.0 };
            let terms: Vec<(&MultiIndex, &C64)> = p.terms().collect();
            for (a, ca) in &terms {
                for (b, cb) in &terms {
                    *acc.entry(((*a).clone(), (*b).clone())).or_default() += **ca * cb.conj() * sign;
                }
            }
        }
        let mut h = HermitianForm::zero(nvars);
        for (k, v) in acc {
            if v.norm() > ZERO_TOL {
                h.entries.insert(k, v);
            }
        }
        h
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, alpha: &MultiIndex, beta: &MultiIndex) -> C64 {
        self.entries.get(&(alpha.clone(), beta.clone())).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &C64)> + '_ {
        self.entries.iter().map(|((a, b), c)| (a, b, c))
    }

    /// Accumulate `c z^α z̄^β + conj(c) z^β z̄^α` (once when `α = β`).
    pub fn add_entry(&mut self, alpha: MultiIndex, beta: MultiIndex, c: C64) {
        if alpha == beta {
            self.bump((alpha.clone(), beta), C64::new(c.re, 0.0));
        } else {
            self.bump((beta.clone(), alpha.clone()), c.conj());
            self.bump((alpha, beta), c);
        }
    }

    fn bump(&mut self, key: (MultiIndex, MultiIndex), c: C64) {
        use std::collections::btree_map::Entry;
        match self.entries.entry(key) {
            Entry::Vacant(v) => {
                if c.norm() > ZERO_TOL {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.norm() > ZERO_TOL {
                    *o.get_mut() = s;
                } else {
                    o.remove();
                }
            }
        }
    }

    fn combine(&self, other: &HermitianForm, sign: f64) -> HermitianForm {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.bump(k.clone(), v * sign);
        }
        out
    }

    pub fn add(&self, other: &HermitianForm) -> HermitianForm {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &HermitianForm) -> HermitianForm {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, s: f64) -> HermitianForm {
        let mut out = HermitianForm::zero(self.nvars);
        for (k, v) in &self.entries {
            out.bump(k.clone(), v * s);
        }
        out
    }

    /// Pointwise product of the two real polynomials.
    pub fn mul(&self, other: &HermitianForm) -> HermitianForm {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut acc: HashMap<(MultiIndex, MultiIndex), C64> = HashMap::new();
        for ((a, b), c) in &self.entries {
            for ((g, d), e) in &other.entries {
                *acc.entry((a.add(g), b.add(d))).or_default() += c * e;
            }
        }
        let mut out = HermitianForm::zero(self.nvars);
        for (k, v) in acc {
            if v.norm() > ZERO_TOL {
                out.entries.insert(k, v);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Unpruned: differences below the pruning threshold are still reported.
    pub fn max_abs_diff(&self, other: &HermitianForm) -> f64 {
        let zero = C64::new(0.0, 0.0);
        let one_sided = |a: &HermitianForm, b: &HermitianForm| {
            a.entries.iter().map(|(k, v)| (v - b.entries.get(k).unwrap_or(&zero)).norm()).fold(0.0, f64::max)
        };
        one_sided(self, other).max(one_sided(other, self))
    }

    pub fn approx_eq(&self, other: &HermitianForm, tol: f64) -> bool {
        let scale = 1f64.max(self.max_abs()).max(other.max_abs());
        self.max_abs_diff(other) <= tol * scale
    }

    /// True when every entry with `|c| > tol·max|c|` has `α = β`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let cut = tol * self.max_abs();
        self.entries.iter().all(|((a, b), c)| a == b || c.norm() <= cut)
    }

    /// Maximum `max(|α|, |β|)`.
    pub fn degree(&self) -> u32 {
        self.entries.keys().map(|(a, b)| a.degree().max(b.degree())).max().unwrap_or(0)
    }

    /// Value at `z` (real up to rounding).
    pub fn evaluate(&self, z: &[C64]) -> Result<f64> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: z.len() });
        }
        let mut cache: HashMap<&MultiIndex, C64> = HashMap::new();
        let mut sum = C64::new(0.0, 0.0);
        for ((a, b), c) in &self.entries {
            let za = *cache.entry(a).or_insert_with(|| monomial_value(a, z));
            let zb = *cache.entry(b).or_insert_with(|| monomial_value(b, z));
            sum += c * za * zb.conj();
        }
        Ok(sum.re)
    }

    /// Monomials indexing nonzero rows, in graded-lex order.
    pub fn basis(&self) -> Vec<MultiIndex> {
        let set: BTreeSet<&MultiIndex> = self.entries.keys().map(|(a, _)| a).collect();
        set.into_iter().cloned().collect()
    }

    /// Dense coefficient matrix over `basis()`.
    pub fn dense_matrix(&self) -> (Vec<MultiIndex>, CMatrix) {
        let basis = self.basis();
        let index: HashMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut m = CMatrix::zeros(basis.len(), basis.len());
        for ((a, b), c) in &self.entries {
            m[(index[a], index[b])] = *c;
        }
        (basis, m)
    }

    /// Diagonal blocks of the coefficient matrix, one per connected component
    /// of the graph whose edges are the nonzero entries.
    pub fn blocks(&self) -> Vec<FormBlock> {
        let basis = self.basis();
        let index: HashMap<&MultiIndex, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter(|(a, b)| a < b)
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        let comps = linalg::components(basis.len(), edges);
        comps
            .into_iter()
            .map(|comp| {
                let local: Vec<MultiIndex> = comp.iter().map(|&i| basis[i].clone()).collect();
                let m = CMatrix::from_fn(local.len(), local.len(), |r, c| self.entry(&local[r], &local[c]));
                FormBlock { basis: local, matrix: m }
            })
            .collect()
    }

    /// Form of `h(Lσz)` for `(Lσz)_i = phases_i z_{σ(i)}`.
    pub fn substitute_monomial(&self, sigma: &[usize], phases: &[C64]) -> HermitianForm {
        let phase = |m: &MultiIndex| {
            m.exponents().iter().zip(phases).fold(C64::new(1.0, 0.0), |acc, (&e, p)| acc * p.powu(e))
        };
        let entries = self
            .entries
            .iter()
            .map(|((a, b), c)| ((a.permuted(sigma), b.permuted(sigma)), c * phase(a) * phase(b).conj()))
            .collect();
        HermitianForm { nvars: self.nvars, entries }
    }

    /// Coefficients of `‖z‖²`-power expansion when the form is a polynomial
    /// in `‖z‖²`: `h = Σ_k a_k ‖z‖^{2k}`. `None` otherwise.
    pub fn radial_coefficients(&self, tol: f64) -> Option<Vec<f64>> {
        if !self.is_diagonal(tol) {
            return None;
        }
        let scale = 1f64.max(self.max_abs());
        let d = self.degree();
        let mut out = vec![0.0; d as usize + 1];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut ratio: Option<f64> = None;
            for a in MultiIndex::all_of_degree(self.nvars, k as u32) {
                let r = self.entry(&a, &a).re / a.multinomial();
                match ratio {
                    None => ratio = Some(r),
                    Some(r0) => {
                        if (r - r0).abs() > tol * scale {
                            return None;
                        }
                    }
                }
            }
            *slot = ratio.unwrap_or(0.0);
        }
        Some(out)
    }
}

impl std::fmt::Debug for HermitianForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for ((a, b), c) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i) z^{:?} zb^{:?}", c.re, c.im, a, b)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FormEntryJson {
    alpha: Vec<u32>,
    beta: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    nvars: usize,
    entries: Vec<FormEntryJson>,
}

impl Serialize for HermitianForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .filter(|((a, b), _)| a <= b)
            .map(|((a, b), c)| FormEntryJson {
                alpha: a.exponents().to_vec(),
                beta: b.exponents().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect();
        FormJson { nvars: self.nvars, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FormJson::deserialize(d)?;
        let mut h = HermitianForm::zero(raw.nvars);
        for e in raw.entries {
            if e.alpha.len() != raw.nvars || e.beta.len() != raw.nvars {
                return Err(serde::de::Error::custom("exponent length does not match nvars"));
            }
            h.add_entry(MultiIndex::new(e.alpha), MultiIndex::new(e.beta), C64::new(e.re, e.im));
        }
        Ok(h)
    }
}

/// `‖p‖²_l − |q|²`.
pub fn form_of(f: &RationalMap) -> HermitianForm {
    let mut comps: Vec<Polynomial> = f.numerator().to_vec();
    comps.push(f.denominator().clone());
    HermitianForm::from_holomorphic(f.n(), &comps, f.m())
}

/// Result of dividing a form by `ρ = ‖z‖² − 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereQuotient {
    pub quotient: HermitianForm,
    pub remainder: HermitianForm,
}

/// Write `h = u·ρ + r`, with `r = 0` exactly when `h` vanishes on the sphere.
///
/// Works on one diagonal `δ = α − β` at a time: with `γ = min(α, β)` the
/// coefficients satisfy `c(γ) = Σ_i u(γ − e_i) − u(γ)`, solved upward in
/// `|γ|` up to one below the top level; the top level is the remainder.
pub fn quotient_by_sphere(h: &HermitianForm) -> SphereQuotient {
    let n = h.nvars;
    // diagonal key: (δ⁺, δ⁻) → γ → c
    let mut diagonals: BTreeMap<(MultiIndex, MultiIndex), HashMap<MultiIndex, C64>> = BTreeMap::new();
    for ((a, b), c) in &h.entries {
        let g = a.meet(b);
        let dp = a.checked_sub(&g).expect("meet is below");
        let dm = b.checked_sub(&g).expect("meet is below");
        diagonals.entry((dp, dm)).or_default().insert(g, *c);
    }
    let mut quotient = HermitianForm::zero(n);
    let mut remainder = HermitianForm::zero(n);
    for ((dp, dm), coeffs) in &diagonals {
        let top = coeffs.keys().map(|g| g.degree()).max().unwrap_or(0);
        let mut u: HashMap<MultiIndex, C64> = HashMap::new();
        let below = |u: &HashMap<MultiIndex, C64>, g: &MultiIndex| -> C64 {
            (0..n)
                .filter_map(|i| g.checked_sub(&MultiIndex::unit(n, i)))
                .map(|s| u.get(&s).copied().unwrap_or_default())
                .sum()
        };
        for level in 0..top {
            for g in MultiIndex::all_of_degree(n, level) {
                let c = coeffs.get(&g).copied().unwrap_or_default();
                let v = below(&u, &g) - c;
                if v.norm() > 0.0 {
                    u.insert(g, v);
                }
            }
        }
        for g in MultiIndex::all_of_degree(n, top) {
            let c = coeffs.get(&g).copied().unwrap_or_default();
            let r = c - below(&u, &g);
            if r.norm() > ZERO_TOL {
                remainder.entries.insert((g.add(dp), g.add(dm)), r);
            }
        }
        for (g, v) in u {
            if v.norm() > ZERO_TOL {
                quotient.entries.insert((g.add(dp), g.add(dm)), v);
            }
        }
    }
    SphereQuotient { quotient, remainder }
}

/// Properness certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProperCertificate {
    pub proper: bool,
    pub quotient: HermitianForm,
    /// Largest remainder entry.
    pub residual: f64,
    /// `τ_div·(1 + max|c|)`.
    pub bound: f64,
}

pub fn is_proper(f: &RationalMap, tol_div: f64) -> ProperCertificate {
    certify(&form_of(f), tol_div)
}

/// Properness test on a form already computed.
pub fn certify(h: &HermitianForm, tol_div: f64) -> ProperCertificate {
    let SphereQuotient { quotient, remainder } = quotient_by_sphere(h);
    let residual = remainder.max_abs();
    let bound = tol_div * (1.0 + h.max_abs());
    ProperCertificate { proper: residual <= bound, quotient, residual, bound }
}

/// Inertia with zero threshold `tol_sig·max|λ|`, computed blockwise.
pub fn signature(h: &HermitianForm, tol_sig: f64) -> Signature {
    let mut eigenvalues = Vec::new();
    for block in h.blocks() {
        eigenvalues.extend(linalg::hermitian_eigen(&block.matrix).0);
    }
    classify(&eigenvalues, tol_sig)
}

fn classify(eigenvalues: &[f64], tol_sig: f64) -> Signature {
    let max = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let threshold = tol_sig * max;
    let mut s = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
        threshold,
        smallest_nonzero: None,
        largest_zero: None,
    };
    for &x in eigenvalues {
        let a = x.abs();
        if a <= threshold || max == 0.0 {
            s.zero += 1;
            s.largest_zero = Some(s.largest_zero.map_or(a, |v: f64| v.max(a)));
        } else {
            if x > 0.0 {
                s.positive += 1;
            } else {
                s.negative += 1;
            }
            s.smallest_nonzero = Some(s.smallest_nonzero.map_or(a, |v: f64| v.min(a)));
        }
    }
    s
}

pub fn hermitian_rank(f: &RationalMap, tol_sig: f64) -> usize {
    signature(&form_of(f), tol_sig).rank()
}

/// Rank of the stacked coefficient matrix of `(p, q)` minus one.
///
/// Rows and columns are split into independent blocks first (columns linked
/// when a row touches both), and singular values thresholded globally.
pub fn image_rank(f: &RationalMap, tol_sig: f64) -> Result<usize> {
    if f.l() != 0 {
        return Err(Error::GeneralizedTarget { l: f.l() });
    }
    let rows: Vec<&Polynomial> =
        f.numerator().iter().chain(std::iter::once(f.denominator())).filter(|p| !p.is_zero()).collect();
    let mut columns: BTreeMap<&MultiIndex, usize> = BTreeMap::new();
    for p in &rows {
        for (m, _) in p.terms() {
            let next = columns.len();
            columns.entry(m).or_insert(next);
        }
    }
    let mut edges = Vec::new();
    for p in &rows {
        let idx: Vec<usize> = p.terms().map(|(m, _)| columns[m]).collect();
        for w in idx.windows(2) {
            edges.push((w[0], w[1]));
        }
    }
    let comps = linalg::components(columns.len(), edges);
    let mut comp_of = vec![0; columns.len()];
    for (k, comp) in comps.iter().enumerate() {
        for &c in comp {
            comp_of[c] = k;
        }
    }
    let mut block_rows: Vec<Vec<&Polynomial>> = vec![Vec::new(); comps.len()];
    for p in &rows {
        let (m, _) = p.terms().next().expect("nonzero row");
        block_rows[comp_of[columns[m]]].push(p);
    }
    let mut singular = Vec::new();
    for (comp, rs) in comps.iter().zip(&block_rows) {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = CMatrix::zeros(rs.len(), comp.len());
        for (r, p) in rs.iter().enumerate() {
            for (mono, c) in p.terms() {
                m[(r, local[&columns[mono]])] = *c;
            }
        }
        singular.extend(m.singular_values().iter().copied());
    }
    let max = singular.iter().copied().fold(0.0, f64::max);
    let rank = singular.iter().filter(|&&s| s > tol_sig * max).count();
    Ok(rank.saturating_sub(1))
}

fn automorphism_factors(points: &[Vec<C64>]) -> Result<Vec<(f64, HermitianForm)>> {
    let n = points.first().map(|p| p.len()).ok_or_else(|| Error::Invalid("no points".into()))?;
    points
        .iter()
        .map(|a| {
            if a.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: a.len() });
            }
            let norm_sq: f64 = a.iter().map(|x| x.norm_sqr()).sum();
            if norm_sq >= 1.0 {
                return Err(Error::NotInBall { norm: norm_sq.sqrt() });
            }
            let coeffs: Vec<C64> = a.iter().map(|x| -x.conj()).collect();
            let lin = Polynomial::linear(&coeffs, C64::new(1.0, 0.0));
            Ok((1.0 - norm_sq, HermitianForm::from_holomorphic(n, &[lin], 1)))
        })
        .collect()
}

/// `Π_j (c_j ρ + ω_j) − Π_j ω_j` with `c_j = 1 − ‖a_j‖²` and
/// `ω_j = |1 − ⟨z, a_j⟩|²`: the form of the tensor product of the
/// automorphisms `φ_{a_j}`.
pub fn automorphism_tensor_form(points: &[Vec<C64>]) -> Result<HermitianForm> {
    let factors = automorphism_factors(points)?;
    let n = points[0].len();
    let rho = HermitianForm::rho(n);
    let mut prod = HermitianForm::constant(n, 1.0);
    let mut omegas = HermitianForm::constant(n, 1.0);
    for (c, omega) in &factors {
        prod = prod.mul(&rho.scale(*c).add(omega));
        omegas = omegas.mul(omega);
    }
    Ok(prod.sub(&omegas))
}

/// `B_0, …, B_K` with `Π_j (c_j ρ + ω_j) = Σ_k B_k ρ^k`; `B_K = Π c_j`.
pub fn automorphism_rho_expansion(points: &[Vec<C64>]) -> Result<Vec<HermitianForm>> {
    let factors = automorphism_factors(points)?;
    let n = points[0].len();
    let mut coeffs = vec![HermitianForm::constant(n, 1.0)];
    for (c, omega) in &factors {
        let mut next = vec![HermitianForm::zero(n); coeffs.len() + 1];
        for (k, b) in coeffs.iter().enumerate() {
            next[k] = next[k].add(&b.mul(omega));
            next[k + 1] = next[k + 1].add(&b.scale(*c));
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// `φ_{a_1} ⊗ ⋯ ⊗ φ_{a_K}` as an explicit rational map.
pub fn automorphism_tensor_map(points: &[Vec<C64>]) -> Result<RationalMap> {
    let mut out: Option<RationalMap> = None;
    for a in points {
        let g = BallAutomorphism::involution(linalg::CVector::from_column_slice(a))?;
        let f = RationalMap::from_automorphism(&g);
        out = Some(match out {
            None => f,
            Some(acc) => tensor(&acc, &f)?,
        });
    }
    out.ok_or_else(|| Error::Invalid("no points".into()))
}
