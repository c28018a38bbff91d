use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the analysis routines.
///
/// `zero` is the pruning threshold for polynomial coefficients; the others are
/// relative to the scale of the quantity being compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eq: f64,
    pub zero: f64,
    pub div: f64,
    pub sig: f64,
    pub group: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq: 1e-9,
            zero: crate::poly::ZERO_TOL,
            div: 1e-9,
            sig: 1e-8,
            group: 1e-7,
        }
    }
}
