//! Parameter sets shared by the benchmarks.

use std::f64::consts::PI;

use hcs_core::{ComplexPoint, HcsParams, KerrSchemeParams};

/// Interference-heavy hybrid state at the given |α|.
pub fn hybrid(alpha: f64) -> HcsParams {
    HcsParams::new(0.5, PI, 0.0, ComplexPoint::real(alpha)).expect("valid parameters")
}

pub fn kerr(alpha: f64) -> KerrSchemeParams {
    KerrSchemeParams::new(ComplexPoint::real(alpha), 1e-2, -PI / 2.0, 0.5).expect("valid parameters")
}
