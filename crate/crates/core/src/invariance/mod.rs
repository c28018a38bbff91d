//! Membership in the Hermitian invariant group `Γ_f`, stabilizers inside
//! the group of monomial unitaries, structural detection and rank bounds.
//!
//! `γ ∈ Γ_f` exactly when `H(f∘γ) = c_γ H(f)` for a constant `c_γ`, where
//! `H(f) = ‖p‖²_l − |q|²`. Unitary members have `c_γ = 1`.

pub mod group;
pub mod lattice;
pub mod system;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermitian::{form_of, HermitianForm};
use crate::linalg;
use crate::maps::{compose_source, BallAutomorphism, RationalMap};
use crate::poly::{MultiIndex, Polynomial};
use crate::{Tolerances, C64};

pub use group::{group_closure, permutation_closure, Permutation};
pub use lattice::{dist_to_lattice, smith_normal_form, solve_mod_2pi, SmithForm, TorusSubgroup};
pub use system::{emit_invariance_system, row_matrix, Equation, InvarianceSystem, SystemResiduals};

/// Largest `n` for which `S_n` is enumerated.
pub const PERMUTATION_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub c_gamma: f64,
    /// `max|H(f∘γ) − c_γ H(f)|` relative to the larger of the two forms.
    pub deviation: f64,
}

/// Decide `γ ∈ Γ_f`.
///
/// For `l > 0` only unitary `γ` are accepted and compared by direct equality.
pub fn membership(f: &RationalMap, gamma: &BallAutomorphism, tol: &Tolerances) -> Result<Membership> {
    if gamma.dim() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: gamma.dim() });
    }
    if f.l() > 0 && !gamma.is_unitary() {
        return Err(Error::Unsupported(
            "membership for generalized-ball targets is limited to unitary automorphisms".into(),
        ));
    }
    let hf = form_of(f);
    let hg = match gamma.monomial_structure() {
        Some((sigma, phases)) => hf.substitute_monomial(&sigma, &phases),
        None => form_of(&compose_source(f, gamma)?),
    };
    let (c_gamma, deviation) = if f.l() > 0 { (1.0, relative_diff(&hg, &hf, 1.0)) } else { proportionality(&hf, &hg) };
    let mut member = deviation <= tol.eq;
    if gamma.is_unitary() {
        member &= (c_gamma - 1.0).abs() <= tol.eq;
    }
    Ok(Membership { member, c_gamma, deviation })
}

/// `c` anchored at the largest entry of `hf`, and the relative deviation of
/// `hg` from `c·hf`.
fn proportionality(hf: &HermitianForm, hg: &HermitianForm) -> (f64, f64) {
    let anchor = hf.entries().max_by(|x, y| x.2.norm().total_cmp(&y.2.norm()));
    let Some((a, b, c)) = anchor else { return (1.0, hg.max_abs()) };
    let c_gamma = (hg.entry(a, b) / c).re;
    (c_gamma, relative_diff(hg, hf, c_gamma))
}

fn relative_diff(hg: &HermitianForm, hf: &HermitianForm, c: f64) -> f64 {
    let scaled = hf.scale(c);
    let scale = hg.max_abs().max(scaled.max_abs());
    if scale == 0.0 {
        return 0.0;
    }
    hg.max_abs_diff(&scaled) / scale
}

/// `{θ : diag(e^{iθ}) ∈ Γ_f}`.
pub fn diagonal_stabilizer(f: &RationalMap, tol: &Tolerances) -> TorusSubgroup {
    form_stabilizer(&form_of(f), tol)
}

fn form_stabilizer(h: &HermitianForm, tol: &Tolerances) -> TorusSubgroup {
    let cut = tol.eq * h.max_abs();
    let rows = h.entries().filter(|(a, b, c)| a != b && c.norm() > cut).map(|(a, b, _)| a.diff(b)).collect();
    TorusSubgroup::from_lattice(h.nvars(), rows)
}

/// Permutations `σ` with `P_σ ∈ Γ_f`, in lexicographic order.
pub fn permutation_stabilizer(f: &RationalMap, tol: &Tolerances) -> Result<Vec<Permutation>> {
    form_permutations(&form_of(f), tol)
}

fn form_permutations(h: &HermitianForm, tol: &Tolerances) -> Result<Vec<Permutation>> {
    let n = h.nvars();
    if n > PERMUTATION_LIMIT {
        return Err(Error::TooManyVariables { n, limit: PERMUTATION_LIMIT });
    }
    let ones = vec![C64::new(1.0, 0.0); n];
    Ok(Permutation::all(n)
        .into_iter()
        .filter(|s| relative_diff(&h.substitute_monomial(s.images(), &ones), h, 1.0) <= tol.eq)
        .collect())
}

/// A coset `D_θ P_σ` of the diagonal part inside the strict stabilizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialCoset {
    pub permutation: Permutation,
    pub angles: Vec<f64>,
}

/// Monomial unitaries `γ` with `f∘γ = f` coefficientwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictStabilizer {
    pub diagonal: TorusSubgroup,
    /// `σ` with `f∘P_σ = f`.
    pub permutations: Vec<Permutation>,
    /// One representative `D_θ P_σ` for every `σ` admitting some phases.
    pub monomial_cosets: Vec<MonomialCoset>,
    /// `|diagonal| · |monomial_cosets|` when the diagonal part is finite.
    pub order: Option<u64>,
}

pub fn strict_stabilizer(f: &RationalMap, tol: &Tolerances) -> Result<StrictStabilizer> {
    let n = f.n();
    if n > PERMUTATION_LIMIT {
        return Err(Error::TooManyVariables { n, limit: PERMUTATION_LIMIT });
    }
    let comps: Vec<&Polynomial> = f.numerator().iter().chain([f.denominator()]).collect();
    let scale = comps.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max);
    let cut = tol.eq * scale;
    let rows = comps
        .iter()
        .flat_map(|p| p.terms().filter(|(_, c)| c.norm() > cut).map(|(m, _)| m.diff(&MultiIndex::zero(n))))
        .collect();
    let diagonal = TorusSubgroup::from_lattice(n, rows);
    let ones = vec![C64::new(1.0, 0.0); n];
    let mut permutations = Vec::new();
    let mut monomial_cosets = Vec::new();
    for sigma in Permutation::all(n) {
        let fixed =
            comps.iter().all(|p| p.substitute_monomial(sigma.images(), &ones).max_abs_diff(p) <= cut);
        if fixed {
            permutations.push(sigma.clone());
        }
        if let Some(angles) = coset_phases(&comps, &sigma, cut, tol.group) {
            monomial_cosets.push(MonomialCoset { permutation: sigma, angles });
        }
    }
    let order = diagonal.order().map(|d| d * monomial_cosets.len() as u64);
    Ok(StrictStabilizer { diagonal, permutations, monomial_cosets, order })
}

/// Angles `θ` with `c_α e^{iα·θ} = c_{σα}` for every significant term, if any.
fn coset_phases(comps: &[&Polynomial], sigma: &Permutation, cut: f64, angle_tol: f64) -> Option<Vec<f64>> {
    let n = sigma.len();
    let mut equations: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    for p in comps {
        // σ is injective on monomials, so matching every term gives a bijection.
        for (m, c) in p.terms().filter(|(_, c)| c.norm() > cut) {
            let image = p.coeff(&m.permuted(sigma.images()));
            if image.norm() <= cut || (image.norm() - c.norm()).abs() > cut {
                return None;
            }
            let b = (image / c).arg();
            let row = m.diff(&MultiIndex::zero(n));
            if row.iter().all(|&x| x == 0) {
                if dist_to_lattice(b) > angle_tol {
                    return None;
                }
                continue;
            }
            match equations.get(&row) {
                Some(&b0) if dist_to_lattice(b - b0) > angle_tol => return None,
                Some(_) => {}
                None => {
                    equations.insert(row, b);
                }
            }
        }
    }
    let (rows, rhs): (Vec<Vec<i64>>, Vec<f64>) = equations.into_iter().unzip();
    if rows.is_empty() {
        return Some(vec![0.0; n]);
    }
    solve_mod_2pi(&rows, n, &rhs, angle_tol)
        .map(|t| t.into_iter().map(|x| x.rem_euclid(std::f64::consts::TAU)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusTest {
    pub is_torus_invariant: bool,
    /// `(λ_k, α_k)` of the equivalent monomial map `(λ_k z^{α_k})_k`.
    pub monomial_form: Option<Vec<(f64, MultiIndex)>>,
}

/// Invariance under the full diagonal torus, i.e. `H(f)` has only entries
/// with `α = β`.
pub fn torus_test(f: &RationalMap, tol: &Tolerances) -> TorusTest {
    let h = form_of(f);
    let is_torus_invariant = h.is_diagonal(tol.eq);
    let monomial_form = (is_torus_invariant && f.is_polynomial() && f.vanishes_at_origin() && f.l() == 0)
        .then(|| monomial_data(&h, tol))
        .flatten();
    TorusTest { is_torus_invariant, monomial_form }
}

fn monomial_data(h: &HermitianForm, tol: &Tolerances) -> Option<Vec<(f64, MultiIndex)>> {
    let cut = tol.eq * h.max_abs();
    let mut out = Vec::new();
    for (a, b, c) in h.entries() {
        if a != b || a.is_zero() || c.norm() <= cut {
            continue;
        }
        if c.re < 0.0 {
            return None;
        }
        out.push((c.re.sqrt(), a.clone()));
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullUnitaryTest {
    pub is_un_invariant: bool,
    /// `(λ_j, m_j)` of the equivalent map `⊕_j λ_j z^{⊗m_j}`.
    pub powers: Option<Vec<(f64, u32)>>,
}

/// Invariance under `U(n)`, i.e. `H(f)` is a polynomial in `‖z‖²`.
///
/// `H` is normalized by `−H(0)`, which is the effect of the target automorphism
/// moving `f(0)` to the origin.
pub fn full_unitary_test(f: &RationalMap, tol: &Tolerances) -> FullUnitaryTest {
    let h = form_of(f);
    let Some(a) = h.radial_coefficients(tol.eq) else {
        return FullUnitaryTest { is_un_invariant: false, powers: None };
    };
    let powers = (f.l() == 0 && a[0] < 0.0)
        .then(|| {
            let cut = tol.eq * a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let mut out = Vec::new();
            for (k, &ak) in a.iter().enumerate().skip(1) {
                if ak < -cut {
                    return None;
                }
                if ak > cut {
                    out.push(((ak / -a[0]).sqrt(), k as u32));
                }
            }
            Some(out)
        })
        .flatten();
    FullUnitaryTest { is_un_invariant: true, powers }
}

/// Partition of `0..n` into blocks on which `H(f)` is `U(k)`-invariant.
/// Serialized 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>")]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block sizes `k_j`.
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

impl Serialize for BlockPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect();
        one.serialize(s)
    }
}

impl TryFrom<Vec<Vec<usize>>> for BlockPartition {
    type Error = String;

    fn try_from(raw: Vec<Vec<usize>>) -> std::result::Result<Self, String> {
        let n: usize = raw.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        let mut blocks = Vec::new();
        for b in raw {
            let mut block = Vec::new();
            for i in b {
                if i == 0 || i > n || seen[i - 1] {
                    return Err(format!("blocks must partition 1..={n}"));
                }
                seen[i - 1] = true;
                block.push(i - 1);
            }
            blocks.push(block);
        }
        Ok(BlockPartition { blocks })
    }
}

/// `(z_i ∂_{z_j} − z̄_j ∂_{z̄_i}) h`, relative to `max|h|`.
fn derivation_norm(h: &HermitianForm, i: usize, j: usize) -> f64 {
    let n = h.nvars();
    let (ei, ej) = (MultiIndex::unit(n, i), MultiIndex::unit(n, j));
    let mut out: BTreeMap<(MultiIndex, MultiIndex), C64> = BTreeMap::new();
    for (a, b, c) in h.entries() {
        let (aj, bi) = (a.exponents()[j], b.exponents()[i]);
        if aj > 0 {
            let a2 = a.checked_sub(&ej).expect("positive exponent").add(&ei);
            *out.entry((a2, b.clone())).or_default() += c * aj as f64;
        }
        if bi > 0 {
            let b2 = b.checked_sub(&ei).expect("positive exponent").add(&ej);
            *out.entry((a.clone(), b2)).or_default() -= c * bi as f64;
        }
    }
    let m = out.values().fold(0.0f64, |m, c| m.max(c.norm()));
    let scale = h.max_abs();
    if scale == 0.0 {
        0.0
    } else {
        m / scale
    }
}

pub fn block_partition(f: &RationalMap, tol: &Tolerances) -> BlockPartition {
    form_blocks(&form_of(f), tol)
}

fn form_blocks(h: &HermitianForm, tol: &Tolerances) -> BlockPartition {
    let n = h.nvars();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if derivation_norm(h, i, j) <= tol.eq && derivation_norm(h, j, i) <= tol.eq {
                edges.push((i, j));
            }
        }
    }
    let mut blocks = linalg::components(n, edges);
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort();
    BlockPartition { blocks }
}

/// `n − Σ_j (k_j − 1)` over the block partition of `f∘φ` (`φ` optional).
/// An upper bound for the source rank.
pub fn source_rank_upper(f: &RationalMap, conjugate: Option<&BallAutomorphism>, tol: &Tolerances) -> Result<usize> {
    let bp = match conjugate {
        Some(phi) => block_partition(&compose_source(f, phi)?, tol),
        None => block_partition(f, tol),
    };
    Ok(rank_from_blocks(f.n(), &bp))
}

fn rank_from_blocks(n: usize, bp: &BlockPartition) -> usize {
    n - bp.sizes().iter().map(|k| k.saturating_sub(1)).sum::<usize>()
}

/// 0-based indices `j` such that `z_j^k` appears in some component for every
/// `1 ≤ k ≤ deg f`.
pub fn power_chain_check(f: &RationalMap) -> Result<BTreeSet<usize>> {
    if !f.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let n = f.n();
    let d = f.degree();
    Ok((0..n)
        .filter(|&j| {
            (1..=d).all(|k| {
                let mut e = vec![0; n];
                e[j] = k;
                let m = MultiIndex::new(e);
                f.numerator().iter().any(|p| p.coeff(&m).norm() > 0.0)
            })
        })
        .collect())
}

/// `|H(a)·H(Ua) − (1 − ‖a‖²)^{2d}|` for `γ = U∘φ_a`; nonzero certifies `γ ∉ Γ_f`.
pub fn eq15_residual(f: &RationalMap, gamma: &BallAutomorphism) -> Result<f64> {
    if gamma.dim() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), found: gamma.dim() });
    }
    if let Some(i) = f.numerator().iter().position(|p| p.constant_term().norm() > crate::poly::ZERO_TOL) {
        return Err(Error::NonzeroAtOrigin { what: format!("component {} of p", i + 1) });
    }
    let h = form_of(f);
    let a: Vec<C64> = gamma.a().iter().copied().collect();
    let ua: Vec<C64> = (gamma.u() * gamma.a()).iter().copied().collect();
    let lhs = h.evaluate(&a)? * h.evaluate(&ua)?;
    let s2: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let rhs = (1.0 - s2).powi(2 * f.degree() as i32);
    Ok((lhs - rhs).abs())
}

/// Invariance structure of `Γ_f` detected from `H(f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub torus_invariant: bool,
    pub full_unitary_invariant: bool,
    pub block_partition: BlockPartition,
    pub diagonal_stabilizer: TorusSubgroup,
    /// `None` when `n` exceeds [`PERMUTATION_LIMIT`].
    pub permutation_stabilizer: Option<Vec<Permutation>>,
    pub source_rank_upper: usize,
    /// A polynomial `f` with `f(0) = 0`, `deg f ≥ 2` and no full power chain
    /// admits no origin-moving member.
    pub origin_moving_excluded: bool,
    pub notes: Vec<String>,
}

pub fn group_report(f: &RationalMap, tol: &Tolerances) -> GroupReport {
    let h = form_of(f);
    let n = f.n();
    let mut notes = Vec::new();
    let block_partition = form_blocks(&h, tol);
    let permutation_stabilizer = match form_permutations(&h, tol) {
        Ok(p) => Some(p),
        Err(e) => {
            notes.push(format!("permutation stabilizer skipped: {e}"));
            None
        }
    };
    let origin_moving_excluded = f.is_polynomial()
        && f.l() == 0
        && f.vanishes_at_origin()
        && f.degree() >= 2
        && power_chain_check(f).map(|s| s.is_empty()).unwrap_or(false);
    notes.push("source_rank_upper is an upper bound; no minimization over conjugating automorphisms".into());
    GroupReport {
        torus_invariant: h.is_diagonal(tol.eq),
        full_unitary_invariant: h.radial_coefficients(tol.eq).is_some(),
        source_rank_upper: rank_from_blocks(n, &block_partition),
        block_partition,
        diagonal_stabilizer: form_stabilizer(&h, tol),
        permutation_stabilizer,
        origin_moving_excluded,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, CVector};
    use crate::maps::catalog;
    use crate::maps::{tensor_power, whitney};
    use std::f64::consts::TAU;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn cat(name: &str) -> RationalMap {
        catalog(name).unwrap()
    }

    fn blocks_one_based(bp: &BlockPartition) -> Vec<Vec<usize>> {
        bp.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
    }

    #[test]
    fn faran2_membership() {
        let f = cat("faran-2");
        let d = BallAutomorphism::diagonal(&[0.3, -1.2]);
        let m = membership(&f, &d, &tol()).unwrap();
        assert!(m.member);
        assert!((m.c_gamma - 1.0).abs() < 1e-12);
        let swap = BallAutomorphism::permutation(&[1, 0]);
        assert!(!membership(&f, &swap, &tol()).unwrap().member);
    }

    #[test]
    fn identity_map_involution_constant() {
        let f = RationalMap::identity(2);
        let a = CVector::from_vec(vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.4)]);
        let g = BallAutomorphism::involution(a.clone()).unwrap();
        let m = membership(&f, &g, &tol()).unwrap();
        assert!(m.member);
        assert!((m.c_gamma - (1.0 - a.norm_squared())).abs() < 1e-12);
    }

    #[test]
    fn square_on_disc_not_member() {
        let f = RationalMap::polynomial(vec![Polynomial::monomial(1, MultiIndex::new(vec![2]), C64::new(1.0, 0.0))])
            .unwrap();
        let g = BallAutomorphism::involution(CVector::from_vec(vec![C64::new(0.5, 0.0)])).unwrap();
        assert!(!membership(&f, &g, &tol()).unwrap().member);
    }

    #[test]
    fn diagonal_stabilizers() {
        assert!(diagonal_stabilizer(&cat("faran-4"), &tol()).is_full_torus());
        assert!(diagonal_stabilizer(&cat("corollary-6-2"), &tol()).is_trivial());
        assert!(diagonal_stabilizer(&cat("example-7-2"), &tol()).is_trivial());
    }

    #[test]
    fn permutation_stabilizers() {
        let swap = Permutation::new(vec![1, 0]).unwrap();
        let id = Permutation::identity(2);
        assert_eq!(permutation_stabilizer(&cat("faran-4"), &tol()).unwrap(), vec![id.clone(), swap]);
        assert_eq!(permutation_stabilizer(&cat("faran-2"), &tol()).unwrap(), vec![id]);
    }

    #[test]
    fn torus_tests() {
        assert!(torus_test(&cat("faran-2"), &tol()).is_torus_invariant);
        assert!(!torus_test(&cat("example-7-2"), &tol()).is_torus_invariant);
        let t = torus_test(&cat("faran-4"), &tol());
        let mut data = t.monomial_form.unwrap();
        data.sort_by(|x, y| x.1.cmp(&y.1));
        let expect = [(1.0, vec![3, 0]), (3f64.sqrt(), vec![1, 1]), (1.0, vec![0, 3])];
        assert_eq!(data.len(), 3);
        for (l, e) in expect {
            let hit = data.iter().find(|(_, m)| m.exponents() == e.as_slice()).unwrap();
            assert!((hit.0 - l).abs() < 1e-12);
        }
    }

    #[test]
    fn full_unitary_tests() {
        let t = full_unitary_test(&cat("faran-3"), &tol());
        assert!(t.is_un_invariant);
        let p = t.powers.unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0].0 - 1.0).abs() < 1e-12 && p[0].1 == 2);
        assert!(!full_unitary_test(&cat("example-3-1"), &tol()).is_un_invariant);
        let r = full_unitary_test(&cat("remark-4-1"), &tol()).powers.unwrap();
        let h = 0.5f64.sqrt();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - h).abs() < 1e-12 && r[0].1 == 1);
        assert!((r[1].0 - h).abs() < 1e-12 && r[1].1 == 2);
    }

    #[test]
    fn block_partitions() {
        assert_eq!(blocks_one_based(&block_partition(&cat("example-3-1"), &tol())), vec![vec![1, 2], vec![3]]);
        assert_eq!(blocks_one_based(&block_partition(&cat("faran-3"), &tol())), vec![vec![1, 2]]);
        assert_eq!(blocks_one_based(&block_partition(&cat("example-7-2"), &tol())), vec![vec![1], vec![2]]);
        let json = serde_json::to_string(&block_partition(&cat("example-3-1"), &tol())).unwrap();
        assert_eq!(json, "[[1,2],[3]]");
        let back: BlockPartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, block_partition(&cat("example-3-1"), &tol()));
    }

    #[test]
    fn source_ranks() {
        assert_eq!(source_rank_upper(&cat("example-3-1"), None, &tol()).unwrap(), 2);
        assert_eq!(source_rank_upper(&tensor_power(3, 2).unwrap(), None, &tol()).unwrap(), 1);
        for n in 2..5 {
            assert_eq!(source_rank_upper(&whitney(n).unwrap(), None, &tol()).unwrap(), 2);
        }
    }

    #[test]
    fn power_chains() {
        assert!(power_chain_check(&whitney(3).unwrap()).unwrap().is_empty());
        assert_eq!(power_chain_check(&RationalMap::identity(3)).unwrap().len(), 3);
        assert!(power_chain_check(&cat("faran-4")).unwrap().is_empty());
    }

    #[test]
    fn eq15_values() {
        let a = CVector::from_vec(vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0)]);
        let g = BallAutomorphism::involution(a).unwrap();
        let r = eq15_residual(&cat("faran-3"), &g).unwrap();
        assert!((r - 0.5625).abs() < 1e-12);
        let (c, s) = (0.6, 0.8);
        let u = CMatrix::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(0.0, s), C64::new(0.0, c)]);
        let a = CVector::from_vec(vec![C64::new(0.1, 0.2), C64::new(-0.3, 0.1)]);
        let g = BallAutomorphism::new(u, a, 1e-9).unwrap();
        assert!(eq15_residual(&RationalMap::identity(2), &g).unwrap() < 1e-12);
    }

    #[test]
    fn strict_stabilizers() {
        let s3 = strict_stabilizer(&cat("faran-3"), &tol()).unwrap();
        assert_eq!(s3.order, Some(2));
        let s4 = strict_stabilizer(&cat("faran-4"), &tol()).unwrap();
        assert_eq!(s4.order, Some(3));
        let eta = TAU / 3.0;
        assert!(s4.diagonal.contains(&[eta, 2.0 * eta], 1e-9));
        let s2 = strict_stabilizer(&cat("faran-2"), &tol()).unwrap();
        assert_eq!(s2.order, Some(1));
    }

    #[test]
    fn report_for_whitney() {
        let r = group_report(&whitney(3).unwrap(), &tol());
        assert_eq!(r.source_rank_upper, 2);
        assert!(r.origin_moving_excluded);
        assert!(r.torus_invariant);
        assert!(!r.full_unitary_invariant);
    }
}
