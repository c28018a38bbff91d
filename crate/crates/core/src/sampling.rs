//! Numeric properness oracle: `‖p(z)‖²_l / |q(z)|² − 1` at random points of
//! the unit sphere.
//!
//! Points are normalized complex Gaussians drawn from ChaCha8 seeded with
//! the caller's seed, so every report is reproducible.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::RationalMap;
use crate::poly::{MultiIndex, Polynomial};
use crate::C64;

/// Default seed for reproducible sampling.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub count: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_residual: f64,
    pub pass: bool,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on `S^{2n−1}`.
pub fn sphere_point<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let z: Vec<C64> =
            (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return z.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Point of the open ball with norm below `radius`.
pub fn ball_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<C64> {
    let r = radius * rng.random::<f64>().powf(1.0 / (2 * n) as f64);
    sphere_point(rng, n).into_iter().map(|x| x * r).collect()
}

/// Evaluator sharing monomial values across all components.
struct MapEvaluator {
    monomials: Vec<MultiIndex>,
    components: Vec<Vec<(usize, C64)>>,
    max_exp: Vec<u32>,
}

impl MapEvaluator {
    fn new(polys: &[&Polynomial], n: usize) -> Self {
        let mut index: HashMap<MultiIndex, usize> = HashMap::new();
        let mut monomials = Vec::new();
        let mut max_exp = vec![0; n];
        let components = polys
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        let k = *index.entry(m.clone()).or_insert_with(|| {
                            for (e, &x) in max_exp.iter_mut().zip(m.exponents()) {
                                *e = (*e).max(x);
                            }
                            monomials.push(m.clone());
                            monomials.len() - 1
                        });
                        (k, *c)
                    })
                    .collect()
            })
            .collect();
        MapEvaluator { monomials, components, max_exp }
    }

    fn values(&self, z: &[C64]) -> Vec<C64> {
        let powers: Vec<Vec<C64>> = z
            .iter()
            .zip(&self.max_exp)
            .map(|(x, &e)| {
                let mut v = vec![C64::new(1.0, 0.0)];
                for k in 0..e as usize {
                    v.push(v[k] * x);
                }
                v
            })
            .collect();
        let mono: Vec<C64> = self
            .monomials
            .iter()
            .map(|m| {
                m.exponents().iter().enumerate().fold(C64::new(1.0, 0.0), |acc, (i, &e)| acc * powers[i][e as usize])
            })
            .collect();
        self.components.iter().map(|terms| terms.iter().map(|(k, c)| c * mono[*k]).sum()).collect()
    }
}

/// Max of `|‖p(z)‖²_l / |q(z)|² − 1|` over `count` sphere points.
pub fn sphere_sample_check(f: &RationalMap, count: usize, tol: f64, seed: u64) -> Result<SampleReport> {
    if count == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let polys: Vec<&Polynomial> = f.numerator().iter().chain([f.denominator()]).collect();
    let eval = MapEvaluator::new(&polys, f.n());
    let m = f.m();
    let mut rng = rng_from_seed(seed);
    let mut max_residual = 0.0f64;
    for k in 0..count {
        let z = sphere_point(&mut rng, f.n());
        let v = eval.values(&z);
        let (num, q) = v.split_at(v.len() - 1);
        let q2 = q[0].norm_sqr();
        if q2 <= f64::MIN_POSITIVE {
            return Err(Error::Invalid(format!("denominator vanishes at sample {}", k + 1)));
        }
        let p2: f64 = num.iter().enumerate().map(|(i, x)| if i < m { x.norm_sqr() } else { -x.norm_sqr() }).sum();
        max_residual = max_residual.max((p2 / q2 - 1.0).abs());
    }
    Ok(SampleReport { count, seed, tol, max_residual, pass: max_residual <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::catalog;

    #[test]
    fn faran4_passes() {
        let r = sphere_sample_check(&catalog("faran-4").unwrap(), 1000, 1e-9, DEFAULT_SEED).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn identity_is_exact() {
        let r = sphere_sample_check(&RationalMap::identity(3), 1000, 1e-9, 7).unwrap();
        assert!(r.max_residual <= 1e-15);
    }

    #[test]
    fn repeated_coordinate_fails() {
        let z1 = Polynomial::var(2, 0);
        let f = RationalMap::polynomial(vec![z1.clone(), z1]).unwrap();
        let r = sphere_sample_check(&f, 1000, 1e-9, 3).unwrap();
        assert!(!r.pass);
        // Residual is 2|z1|² − 1 on the sphere.
        let mut rng = rng_from_seed(3);
        let expect = (0..1000)
            .map(|_| (2.0 * sphere_point(&mut rng, 2)[0].norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!((r.max_residual - expect).abs() < 1e-12);
    }

    #[test]
    fn seeded_runs_repeat() {
        let f = catalog("example-7-2").unwrap();
        assert_eq!(sphere_sample_check(&f, 50, 1e-9, 11).unwrap(), sphere_sample_check(&f, 50, 1e-9, 11).unwrap());
    }
}
