//! Combined analysis of a single map.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hermitian::{certify, form_of, image_rank, signature, ProperCertificate, Signature};
use crate::invariance::{
    full_unitary_test, group_report, power_chain_check, strict_stabilizer, torus_test, FullUnitaryTest,
    GroupReport, StrictStabilizer, TorusTest,
};
use crate::maps::RationalMap;
use crate::Tolerances;

/// Properness certificate without the (possibly large) quotient form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Properness {
    pub proper: bool,
    pub residual: f64,
    pub bound: f64,
}

impl From<&ProperCertificate> for Properness {
    fn from(c: &ProperCertificate) -> Self {
        Properness { proper: c.proper, residual: c.residual, bound: c.bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBundle {
    pub map: RationalMap,
    pub tolerances: Tolerances,
    pub properness: Properness,
    pub signature: Signature,
    pub hermitian_rank: usize,
    pub image_rank: usize,
    pub torus_test: TorusTest,
    pub full_unitary_test: FullUnitaryTest,
    pub group: GroupReport,
    /// `None` when `n` exceeds the permutation limit.
    pub strict_stabilizer: Option<StrictStabilizer>,
    /// 1-based; `None` for non-polynomial maps.
    pub power_chain: Option<Vec<usize>>,
    pub notes: Vec<String>,
}

pub fn analyze(f: &RationalMap, tol: &Tolerances) -> Result<AnalysisBundle> {
    let h = form_of(f);
    let cert = certify(&h, tol.div);
    let sig = signature(&h, tol.sig);
    let mut notes = Vec::new();
    if let Some(w) = f.denominator_degree_warning() {
        notes.push(w);
    }
    let strict = match strict_stabilizer(f, tol) {
        Ok(s) => Some(s),
        Err(e) => {
            notes.push(format!("strict stabilizer skipped: {e}"));
            None
        }
    };
    let power_chain = power_chain_check(f).ok().map(|s| s.into_iter().map(|j| j + 1).collect());
    Ok(AnalysisBundle {
        map: f.clone(),
        tolerances: *tol,
        properness: Properness::from(&cert),
        hermitian_rank: sig.rank(),
        signature: sig,
        image_rank: image_rank(f, tol.sig)?,
        torus_test: torus_test(f, tol),
        full_unitary_test: full_unitary_test(f, tol),
        group: group_report(f, tol),
        strict_stabilizer: strict,
        power_chain,
        notes,
    })
}
