//! Named fixture maps.
//!
//! Parameterized entries take an optional `:value` suffix, e.g.
//! `example-7-4-f:0.3` (angle θ) or `whitney-seq-2` (index k).

use std::f64::consts::FRAC_PI_4;

use super::{juxtapose_lambda, tensor_power, whitney, RationalMap};
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};
use crate::C64;

const FIXED: &[&str] = &[
    "faran-1",
    "faran-2",
    "faran-3",
    "faran-4",
    "example-3-1",
    "example-7-2",
    "corollary-6-2",
    "whitney-seq-<k>",
    "example-7-4-f[:theta]",
    "example-7-4-g[:theta]",
    "remark-4-1[:n]",
];

pub fn catalog_names() -> &'static [&'static str] {
    FIXED
}

fn mono(n: usize, exp: &[u32], c: f64) -> Polynomial {
    Polynomial::monomial(n, MultiIndex::new(exp.to_vec()), C64::new(c, 0.0))
}

fn poly(n: usize, terms: &[(&[u32], f64)]) -> Polynomial {
    let mut p = Polynomial::zero(n);
    for (e, c) in terms {
        p.add_term(MultiIndex::new(e.to_vec()), C64::new(*c, 0.0));
    }
    p
}

fn parse_param(name: &str, param: Option<&str>) -> Result<Option<f64>> {
    param
        .map(|s| s.parse::<f64>().map_err(|_| Error::UnknownCatalog(name.to_string())))
        .transpose()
}

pub fn catalog(name: &str) -> Result<RationalMap> {
    let (base, param) = match name.split_once(':') {
        Some((b, p)) => (b, Some(p)),
        None => (name, None),
    };
    let value = parse_param(name, param)?;
    let unknown = || Error::UnknownCatalog(name.to_string());
    let no_param = |m: RationalMap| if param.is_some() { Err(unknown()) } else { Ok(m) };
    let s2 = std::f64::consts::SQRT_2;
    match base {
        "faran-1" => no_param(RationalMap::polynomial(vec![
            mono(2, &[1, 0], 1.0),
            mono(2, &[0, 1], 1.0),
            Polynomial::zero(2),
        ])?),
        "faran-2" => no_param(whitney(2)?),
        "faran-3" => no_param(RationalMap::polynomial(vec![
            mono(2, &[2, 0], 1.0),
            mono(2, &[1, 1], s2),
            mono(2, &[0, 2], 1.0),
        ])?),
        "faran-4" => no_param(RationalMap::polynomial(vec![
            mono(2, &[3, 0], 1.0),
            mono(2, &[1, 1], 3f64.sqrt()),
            mono(2, &[0, 3], 1.0),
        ])?),
        "example-3-1" => no_param(whitney(3)?),
        "example-7-2" => {
            let c = 1.0 / s2;
            // c(z − w²) ± zw
            let plus = poly(2, &[(&[1, 0], c), (&[0, 2], -c), (&[1, 1], 1.0)]);
            let minus = poly(2, &[(&[1, 0], c), (&[0, 2], -c), (&[1, 1], -1.0)]);
            let z = mono(2, &[1, 0], 1.0);
            let w = mono(2, &[0, 1], 1.0);
            no_param(RationalMap::polynomial(vec![
                poly(2, &[(&[1, 0], c), (&[0, 2], c)]),
                plus.scale_real(c),
                (&minus * &z).scale_real(c),
                (&minus * &w).scale_real(c),
            ])?)
        }
        "corollary-6-2" => no_param(RationalMap::polynomial(vec![
            poly(1, &[(&[1], 0.5), (&[2], 0.5)]),
            poly(1, &[(&[2], 0.5), (&[3], -0.5)]),
        ])?),
        "example-7-4-f" => {
            let theta = value.unwrap_or(FRAC_PI_4);
            let (s, c) = theta.sin_cos();
            RationalMap::polynomial(vec![
                mono(3, &[1, 0, 0], 1.0),
                mono(3, &[0, 1, 0], 1.0),
                mono(3, &[0, 0, 1], c),
                mono(3, &[1, 0, 1], s),
                mono(3, &[0, 1, 1], s),
                mono(3, &[0, 0, 2], s),
            ])
        }
        "example-7-4-g" => {
            let theta = value.unwrap_or(FRAC_PI_4);
            let (s, c) = theta.sin_cos();
            RationalMap::polynomial(vec![
                mono(3, &[1, 0, 0], c),
                mono(3, &[0, 1, 0], 1.0),
                mono(3, &[2, 0, 0], s),
                mono(3, &[1, 1, 0], s),
                mono(3, &[1, 0, 1], (1.0 + s * s).sqrt()),
                mono(3, &[0, 1, 1], 1.0),
                mono(3, &[0, 0, 2], 1.0),
            ])
        }
        "remark-4-1" => {
            let n = match value {
                None => 2,
                Some(v) if v >= 1.0 && v.fract() == 0.0 => v as usize,
                Some(_) => return Err(unknown()),
            };
            let h = C64::new(s2 / 2.0, 0.0);
            juxtapose_lambda(&[&tensor_power(n, 1)?, &tensor_power(n, 2)?], &[h, h], 1e-12)
        }
        _ => {
            if let Some(k) = base.strip_prefix("whitney-seq-") {
                let k: u32 = k.parse().map_err(|_| unknown())?;
                return no_param(whitney_sequence(k)?);
            }
            Err(unknown())
        }
    }
}

/// `(z1, z1 z2, …, z1 z2^k, z2^{k+1})`.
fn whitney_sequence(k: u32) -> Result<RationalMap> {
    let mut num: Vec<Polynomial> = (0..=k).map(|j| mono(2, &[1, j], 1.0)).collect();
    num.push(mono(2, &[0, k + 1], 1.0));
    RationalMap::polynomial(num)
}
