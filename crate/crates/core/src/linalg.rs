//! Dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// `max |U†U − I|` over entries.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    let prod = u.adjoint() * u;
    let mut worst = 0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    if m.nrows() == 1 {
        return (vec![m[(0, 0)].re], CMatrix::identity(1, 1));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Numerical rank from singular values above `rel_tol·σ_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Connected components of an undirected graph on `0..n`.
pub fn components(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Orthonormalize with modified Gram–Schmidt, dropping vectors whose
/// residual norm falls below `tol` times their original norm.
pub fn orthonormalize(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::new();
    for v in vectors {
        let norm0 = v.norm();
        if norm0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let norm = w.norm();
        if norm > tol * norm0 {
            basis.push(w / C64::new(norm, 0.0));
        }
    }
    basis
}

/// `(n+1)×(n+1)` permutation matrix with `(Pz)_i = z_{σ(i)}`.
pub fn permutation_matrix(sigma: &[usize]) -> CMatrix {
    let n = sigma.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &s) in sigma.iter().enumerate() {
        m[(i, s)] = C64::new(1.0, 0.0);
    }
    m
}

/// If every row has exactly one nonzero entry, return `(σ, phases)` with
/// `U[i][σ(i)] = phases[i]`.
pub fn monomial_structure(u: &CMatrix, tol: f64) -> Option<(Vec<usize>, Vec<C64>)> {
    let n = u.nrows();
    let mut sigma = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        let nz: Vec<usize> = (0..u.ncols()).filter(|&j| u[(i, j)].norm() > tol).collect();
        if nz.len() != 1 || used[nz[0]] {
            return None;
        }
        used[nz[0]] = true;
        sigma.push(nz[0]);
        phases.push(u[(i, nz[0])]);
    }
    Some((sigma, phases))
}
