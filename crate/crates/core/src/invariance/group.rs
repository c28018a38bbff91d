//! Finite matrix groups and permutations.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Permutation `σ` of `0..n`, acting by `(P_σ z)_i = z_{σ(i)}`.
/// Serialized 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::NotPermutation { n, detail: format!("{:?}", one_based(&images)) });
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if images.contains(&0) {
            return Err(Error::NotPermutation { n, detail: format!("{images:?}") });
        }
        Permutation::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &s)| i == s)
    }

    pub fn matrix(&self) -> CMatrix {
        linalg::permutation_matrix(&self.0)
    }

    /// Permutation whose matrix is `P_self · P_other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn from_matrix(m: &CMatrix, tol: f64) -> Option<Permutation> {
        let (sigma, phases) = linalg::monomial_structure(m, tol)?;
        phases.iter().all(|p| (p - crate::C64::new(1.0, 0.0)).norm() <= tol).then_some(Permutation(sigma))
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        one_based(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// Breadth-first closure of a set of unitary generators under products.
/// Elements are compared entrywise within `tol`.
pub fn group_closure(generators: &[CMatrix], cap: usize, tol: f64) -> Result<Vec<CMatrix>> {
    let n = generators.first().map(|g| g.nrows()).unwrap_or(0);
    for g in generators {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.nrows() });
        }
        let deviation = linalg::unitarity_defect(g);
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
    }
    let mut elements = vec![CMatrix::identity(n, n)];
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let y = &x * g;
            if !elements.iter().any(|e| linalg::max_abs_diff(e, &y) <= tol) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                elements.push(y);
            }
        }
    }
    Ok(elements)
}

/// Closure of a set of permutations.
pub fn permutation_closure(generators: &[Permutation], n: usize) -> Result<Vec<Permutation>> {
    for g in generators {
        if g.len() != n {
            return Err(Error::NotPermutation { n, detail: format!("{:?}", one_based(g.images())) });
        }
    }
    let mut elements = vec![Permutation::identity(n)];
    let mut seen: std::collections::HashSet<Permutation> = elements.iter().cloned().collect();
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                elements.push(y);
            }
        }
    }
    elements.sort();
    Ok(elements)
}
