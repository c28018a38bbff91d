use crate::error::{Error, Result};
use crate::linalg::{self, CVector};
use crate::C64;

/// Subspace of `C^N` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<CVector>,
}

impl Subspace {
    /// Orthonormalized span; dependent vectors are dropped.
    pub fn span(ambient: usize, vectors: &[Vec<C64>]) -> Result<Self> {
        let mut vs = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
            }
            vs.push(CVector::from_column_slice(v));
        }
        Ok(Subspace { ambient, basis: linalg::orthonormalize(&vs, 1e-10) })
    }

    /// Span of the standard basis vectors with the given 0-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Result<Self> {
        let mut vectors = Vec::new();
        for &i in indices {
            if i >= ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: i + 1 });
            }
            let mut v = vec![C64::new(0.0, 0.0); ambient];
            v[i] = C64::new(1.0, 0.0);
            vectors.push(v);
        }
        Subspace::span(ambient, &vectors)
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::coordinate(ambient, &(0..ambient).collect::<Vec<_>>()).expect("indices in range")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    /// Orthogonal complement in `C^N`.
    pub fn complement(&self) -> Subspace {
        let mut all = self.basis.clone();
        for i in 0..self.ambient {
            let mut e = CVector::zeros(self.ambient);
            e[i] = C64::new(1.0, 0.0);
            all.push(e);
        }
        let full = linalg::orthonormalize(&all, 1e-8);
        Subspace { ambient: self.ambient, basis: full[self.basis.len()..].to_vec() }
    }

    /// `⟨w, e_k⟩` for each basis vector `e_k`.
    pub fn coordinates(&self, w: &[C64]) -> Vec<C64> {
        let wv = CVector::from_column_slice(w);
        self.basis.iter().map(|e| e.dotc(&wv)).collect()
    }
}
