//! Exact integer Smith normal form and the torus subgroups it describes.
//!
//! For an integer matrix `A` (rows = exponent vectors), the subgroup
//! `{θ ∈ (R/2πZ)^n : Aθ ≡ 0 mod 2π}` is read off from `PAQ = D`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

/// `P·A·Q = D` with `P`, `Q` unimodular and `D` diagonal, `d_1 | d_2 | ⋯`.
///
/// `P` is not stored; right-hand sides passed to [`smith_normal_form_rhs`]
/// are transformed by it instead.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub q: Vec<Vec<i128>>,
    pub diagonal: Vec<i128>,
    pub rows: usize,
    pub cols: usize,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Row operations are mirrored on every attached vector.
struct Rows<'a> {
    m: Vec<Vec<i128>>,
    rhs: Option<&'a mut Vec<f64>>,
}

impl Rows<'_> {
    fn swap(&mut self, a: usize, b: usize) {
        self.m.swap(a, b);
        if let Some(r) = self.rhs.as_mut() {
            r.swap(a, b);
        }
    }

    /// `row_i += f·row_t`.
    fn axpy(&mut self, i: usize, t: usize, f: i128) {
        for j in 0..self.m[i].len() {
            let v = self.m[t][j];
            self.m[i][j] += f * v;
        }
        if let Some(r) = self.rhs.as_mut() {
            r[i] += f as f64 * r[t];
        }
    }

    fn negate(&mut self, t: usize) {
        for x in self.m[t].iter_mut() {
            *x = -*x;
        }
        if let Some(r) = self.rhs.as_mut() {
            r[t] = -r[t];
        }
    }
}

pub fn smith_normal_form(a: &[Vec<i64>], cols: usize) -> SmithForm {
    snf(a, cols, None)
}

/// Smith form of `A` while applying `P` to `rhs` in place.
pub fn smith_normal_form_rhs(a: &[Vec<i64>], cols: usize, rhs: &mut Vec<f64>) -> SmithForm {
    snf(a, cols, Some(rhs))
}

/// Alternating row and column elimination.
fn snf(a: &[Vec<i64>], cols: usize, rhs: Option<&mut Vec<f64>>) -> SmithForm {
    let rows = a.len();
    let mut r = Rows { m: a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect(), rhs };
    let mut q = identity(cols);
    let mut diagonal = Vec::new();
    let swap_cols = |m: &mut Vec<Vec<i128>>, q: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in q.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = r.m[i][j];
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < r.m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        r.swap(t, pi);
        swap_cols(&mut r.m, &mut q, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let f = r.m[i][t] / r.m[t][t];
                if f != 0 {
                    r.axpy(i, t, -f);
                }
                dirty |= r.m[i][t] != 0;
            }
            for j in t + 1..cols {
                let f = r.m[t][j] / r.m[t][t];
                if f != 0 {
                    for row in r.m.iter_mut() {
                        row[j] -= f * row[t];
                    }
                    for row in q.iter_mut() {
                        row[j] -= f * row[t];
                    }
                }
                dirty |= r.m[t][j] != 0;
            }
            if !dirty {
                // The pivot must divide the remaining block.
                let pivot = r.m[t][t];
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| r.m[i][j] % pivot != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        r.axpy(t, i, 1);
                        continue;
                    }
                }
            }
            // Bring the smallest entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if r.m[i][t] != 0 && r.m[i][t].abs() < r.m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if r.m[t][j] != 0 && r.m[t][j].abs() < r.m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                r.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut r.m, &mut q, t, best.1);
            }
        }
        if r.m[t][t] < 0 {
            r.negate(t);
        }
        diagonal.push(r.m[t][t]);
        t += 1;
    }
    SmithForm { q, diagonal, rows, cols }
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    fn apply_q(&self, phi: &[f64]) -> Vec<f64> {
        self.q.iter().map(|row| row.iter().zip(phi).map(|(&x, &y)| x as f64 * y).sum()).collect()
    }
}

/// One solution of `Aθ ≡ b (mod 2π)`, or `None` when inconsistent beyond `tol`.
pub fn solve_mod_2pi(a: &[Vec<i64>], cols: usize, b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let mut pb = b.to_vec();
    let s = smith_normal_form_rhs(a, cols, &mut pb);
    if pb[s.rank()..].iter().any(|v| dist_to_lattice(*v) > tol) {
        return None;
    }
    let mut phi = vec![0.0; cols];
    for (i, &d) in s.diagonal.iter().enumerate() {
        phi[i] = pb[i] / d as f64;
    }
    Some(s.apply_q(&phi))
}

/// Distance from `x` to the nearest multiple of `2π`.
pub fn dist_to_lattice(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    r.min(TAU - r)
}

/// `{θ : (row · θ) ∈ 2πZ for every row}` as a subgroup of the n-torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusSubgroup {
    pub n: usize,
    pub lattice: Vec<Vec<i64>>,
    pub torus_dim: usize,
    /// Invariant factors greater than 1.
    pub finite_orders: Vec<u64>,
    /// Angle vectors generating the finite cyclic factors.
    pub finite_generators: Vec<Vec<f64>>,
    /// Integer directions spanning the identity component.
    pub torus_directions: Vec<Vec<i64>>,
}

impl TorusSubgroup {
    pub fn from_lattice(n: usize, mut lattice: Vec<Vec<i64>>) -> Self {
        lattice.retain(|r| r.iter().any(|&x| x != 0));
        lattice.sort();
        lattice.dedup();
        let snf = smith_normal_form(&lattice, n);
        let r = snf.rank();
        let mut finite_orders = Vec::new();
        let mut finite_generators = Vec::new();
        for (i, &d) in snf.diagonal.iter().enumerate() {
            if d > 1 {
                finite_orders.push(d as u64);
                let mut phi = vec![0.0; n];
                phi[i] = TAU / d as f64;
                let theta = snf.apply_q(&phi).into_iter().map(|t| t.rem_euclid(TAU)).collect();
                finite_generators.push(theta);
            }
        }
        let torus_directions =
            (r..n).map(|i| (0..n).map(|k| snf.q[k][i] as i64).collect()).collect();
        TorusSubgroup { n, lattice, torus_dim: n - r, finite_orders, finite_generators, torus_directions }
    }

    pub fn contains(&self, theta: &[f64], tol: f64) -> bool {
        self.lattice.iter().all(|row| {
            let v: f64 = row.iter().zip(theta).map(|(&a, &t)| a as f64 * t).sum();
            dist_to_lattice(v) <= tol
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.torus_dim == 0 && self.finite_orders.is_empty()
    }

    pub fn is_full_torus(&self) -> bool {
        self.torus_dim == self.n
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<u64> {
        (self.torus_dim == 0).then(|| self.finite_orders.iter().product())
    }
}
