use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::poly::Polynomial;
use crate::C64;

/// Automorphism `γ = U∘φ_a` of the unit ball, where
/// `φ_a(z) = (a − L_a z)/(1 − ⟨z,a⟩)` and `L_a z = ⟨z,a⟩a/(s+1) + s z`,
/// `s = √(1 − ‖a‖²)`.
///
/// At `a = 0` the formula gives `−z`; that case is taken to be `z ↦ Uz`
/// instead, so `(U, 0)` is the unitary map itself.
#[derive(Debug, Clone, PartialEq)]
pub struct BallAutomorphism {
    u: CMatrix,
    a: CVector,
}

impl BallAutomorphism {
    pub fn new(u: CMatrix, a: CVector, tol: f64) -> Result<Self> {
        let dim = a.len();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: u.nrows() });
        }
        let norm = a.norm();
        if norm >= 1.0 {
            return Err(Error::NotInBall { norm });
        }
        let deviation = linalg::unitarity_defect(&u);
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(BallAutomorphism { u, a })
    }

    pub fn identity(dim: usize) -> Self {
        BallAutomorphism { u: CMatrix::identity(dim, dim), a: CVector::zeros(dim) }
    }

    /// `z ↦ Uz`.
    pub fn unitary(u: CMatrix, tol: f64) -> Result<Self> {
        let dim = u.nrows();
        BallAutomorphism::new(u, CVector::zeros(dim), tol)
    }

    /// `φ_a` itself (`U = I`).
    pub fn involution(a: CVector) -> Result<Self> {
        let dim = a.len();
        BallAutomorphism::new(CMatrix::identity(dim, dim), a, 1e-12)
    }

    pub fn permutation(sigma: &[usize]) -> Self {
        BallAutomorphism { u: linalg::permutation_matrix(sigma), a: CVector::zeros(sigma.len()) }
    }

    pub fn diagonal(angles: &[f64]) -> Self {
        let d = CVector::from_iterator(angles.len(), angles.iter().map(|t| C64::from_polar(1.0, *t)));
        BallAutomorphism { u: CMatrix::from_diagonal(&d), a: CVector::zeros(angles.len()) }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn a(&self) -> &CVector {
        &self.a
    }

    pub fn s(&self) -> f64 {
        (1.0 - self.a.norm_squared()).sqrt()
    }

    pub fn is_unitary(&self) -> bool {
        self.a.iter().all(|x| *x == C64::new(0.0, 0.0))
    }

    /// Unitary factor in front of the `φ_a` formula.
    pub(crate) fn formula_unitary(&self) -> CMatrix {
        if self.is_unitary() {
            -self.u.clone()
        } else {
            self.u.clone()
        }
    }

    /// `L_a z`.
    pub fn l_a(&self, z: &CVector) -> CVector {
        let s = self.s();
        let za = self.a.dotc(z);
        &self.a * (za / C64::new(s + 1.0, 0.0)) + z * C64::new(s, 0.0)
    }

    pub fn apply(&self, z: &[C64]) -> Result<Vec<C64>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: z.len() });
        }
        let zv = CVector::from_column_slice(z);
        let den = C64::new(1.0, 0.0) - self.a.dotc(&zv);
        let num = &self.a - self.l_a(&zv);
        let w = self.formula_unitary() * (num / den);
        Ok(w.iter().copied().collect())
    }

    /// Matrix of `L_a`: `a a*/(s+1) + s I`.
    pub fn l_matrix(&self) -> CMatrix {
        let n = self.dim();
        let s = self.s();
        let mut l = DMatrix::<C64>::zeros(n, n);
        for k in 0..n {
            for i in 0..n {
                l[(k, i)] = self.a[k] * self.a[i].conj() / (s + 1.0);
            }
            l[(k, k)] += C64::new(s, 0.0);
        }
        l
    }

    /// Linear numerator components of `U(a − L_a z)` and the denominator
    /// `1 − ⟨z,a⟩`, as polynomials in `dim` variables.
    pub fn fractional_parts(&self) -> (Vec<Polynomial>, Polynomial) {
        let n = self.dim();
        let u = self.formula_unitary();
        let lin = &u * self.l_matrix();
        let ua = &u * &self.a;
        let nums = (0..n)
            .map(|k| {
                let coeffs: Vec<C64> = (0..n).map(|i| -lin[(k, i)]).collect();
                Polynomial::linear(&coeffs, ua[k])
            })
            .collect();
        let den_coeffs: Vec<C64> = self.a.iter().map(|x| -x.conj()).collect();
        (nums, Polynomial::linear(&den_coeffs, C64::new(1.0, 0.0)))
    }

    /// Matrix acting on homogeneous column vectors `[z; 1]`.
    pub fn homogeneous_matrix(&self) -> CMatrix {
        let n = self.dim();
        let s = self.s();
        let mut m = CMatrix::zeros(n + 1, n + 1);
        for k in 0..n {
            for i in 0..n {
                let mut v = -self.a[k] * self.a[i].conj() / (s + 1.0);
                if k == i {
                    v -= C64::new(s, 0.0);
                }
                m[(k, i)] = v;
            }
            m[(k, n)] = self.a[k];
            m[(n, k)] = -self.a[k].conj();
        }
        m[(n, n)] = C64::new(1.0, 0.0);
        let mut lift = CMatrix::identity(n + 1, n + 1);
        lift.view_mut((0, 0), (n, n)).copy_from(&self.formula_unitary());
        lift * m
    }

    /// Recover `U∘φ_b` from a homogeneous matrix of a ball automorphism.
    pub fn from_homogeneous(m: &CMatrix, tol: f64) -> Result<Self> {
        let n = m.nrows() - 1;
        let inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Invalid("singular homogeneous matrix".into()))?;
        let col = inv.column(n);
        let last = col[n];
        let b = CVector::from_iterator(n, (0..n).map(|i| col[i] / last));
        let phi_b = BallAutomorphism { u: CMatrix::identity(n, n), a: b.clone() };
        let k = m * phi_b.homogeneous_matrix();
        let scale = k[(n, n)];
        let u = k.view((0, 0), (n, n)).map(|x| x / scale);
        BallAutomorphism::new(u, b, tol)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BallAutomorphism) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if self.is_unitary() && other.is_unitary() {
            return Ok(BallAutomorphism { u: &self.u * &other.u, a: other.a.clone() });
        }
        BallAutomorphism::from_homogeneous(&(self.homogeneous_matrix() * other.homogeneous_matrix()), 1e-8)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_unitary() {
            return Ok(BallAutomorphism { u: self.u.adjoint(), a: self.a.clone() });
        }
        let inv = self
            .homogeneous_matrix()
            .try_inverse()
            .ok_or_else(|| Error::Invalid("singular homogeneous matrix".into()))?;
        BallAutomorphism::from_homogeneous(&inv, 1e-8)
    }

    /// `(σ, phases)` when `a = 0` and `U` has one nonzero per row.
    pub fn monomial_structure(&self) -> Option<(Vec<usize>, Vec<C64>)> {
        if !self.is_unitary() {
            return None;
        }
        linalg::monomial_structure(&self.u, 1e-14)
    }
}

/// JSON form: `{"u": [[[re, im], …], …], "a": [[re, im], …]}` with `u` row-major.
#[derive(Serialize, Deserialize)]
struct AutomorphismJson {
    u: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    a: Option<Vec<[f64; 2]>>,
}

pub fn matrix_to_json(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix must be square".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

impl Serialize for BallAutomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AutomorphismJson {
            u: matrix_to_json(&self.u),
            a: Some(self.a.iter().map(|x| [x.re, x.im]).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallAutomorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AutomorphismJson::deserialize(d)?;
        let u = matrix_from_json(&raw.u).map_err(serde::de::Error::custom)?;
        let n = u.nrows();
        let a = match raw.a {
            Some(a) => CVector::from_iterator(a.len(), a.iter().map(|x| C64::new(x[0], x[1]))),
            None => CVector::zeros(n),
        };
        BallAutomorphism::new(u, a, 1e-9).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn half_disc_automorphism() {
        let g = BallAutomorphism::involution(CVector::from_vec(vec![c(0.5)])).unwrap();
        assert!((g.apply(&[c(0.0)]).unwrap()[0] - c(0.5)).norm() < 1e-15);
        // z ↦ (1/2 − z)/(1 − z/2)
        let z = C64::new(0.2, -0.3);
        let expected = (c(0.5) - z) / (c(1.0) - z * 0.5);
        assert!((g.apply(&[z]).unwrap()[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn l_a_fixes_a() {
        let a = CVector::from_vec(vec![c(0.5), c(0.0)]);
        let g = BallAutomorphism::involution(a.clone()).unwrap();
        assert!((g.l_a(&a) - &a).norm() < 1e-15);
    }

    #[test]
    fn zero_point_is_linear() {
        let g = BallAutomorphism::identity(2);
        let z = [C64::new(0.1, 0.2), C64::new(-0.3, 0.0)];
        assert_eq!(g.apply(&z).unwrap(), z.to_vec());
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = CVector::from_vec(vec![c(1.0)]);
        assert!(matches!(BallAutomorphism::involution(a), Err(Error::NotInBall { .. })));
        let u = CMatrix::from_element(1, 1, c(2.0));
        assert!(matches!(
            BallAutomorphism::unitary(u, 1e-9),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn composition_and_inverse_agree_pointwise() {
        let g1 = BallAutomorphism::new(
            CMatrix::from_diagonal(&CVector::from_vec(vec![C64::from_polar(1.0, 0.4), c(1.0)])),
            CVector::from_vec(vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.25)]),
            1e-12,
        )
        .unwrap();
        let g2 = BallAutomorphism::new(
            linalg::permutation_matrix(&[1, 0]),
            CVector::from_vec(vec![C64::new(-0.1, 0.4), c(0.2)]),
            1e-12,
        )
        .unwrap();
        let h = g1.compose(&g2).unwrap();
        let z = [C64::new(0.1, -0.2), C64::new(0.3, 0.05)];
        let direct = g1.apply(&g2.apply(&z).unwrap()).unwrap();
        let composed = h.apply(&z).unwrap();
        for (x, y) in direct.iter().zip(&composed) {
            assert!((x - y).norm() < 1e-12);
        }
        let back = h.inverse().unwrap().apply(&composed).unwrap();
        for (x, y) in back.iter().zip(&z) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
