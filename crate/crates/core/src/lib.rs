//! Hybrid coherent states `N[√ε e^{iθ}|α⟩ + √(1−ε) e^{iφ} a†|α⟩]`.
//!
//! Closed-form photon statistics, moments and Wigner functions live in [`hcs`];
//! [`fock`], [`displacement`] and [`phase_space`] form an independent
//! truncated-basis oracle that every closed form is tested against. [`metrics`]
//! computes nonclassicality measures from oracle moments, [`wigner`] samples
//! phase-space grids, and [`kerr`] simulates heralded preparation through a
//! cross-Kerr coupling. [`audit`] compares published formulas with the oracle.

pub mod audit;
pub mod displacement;
pub mod error;
pub mod fock;
pub mod hcs;
pub mod kerr;
pub mod metrics;
pub mod phase_space;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{ComplexPoint, FockVector, MomentSet, TailPolicy};
pub use hcs::HcsParams;
pub use kerr::{HeraldedResult, JointState, KerrSchemeParams};
pub use metrics::{MetricSummary, QuadratureSpec};
pub use wigner::{GridBounds, NegativityReport, WignerGrid, WignerMethod};

pub use num_complex::Complex64;
