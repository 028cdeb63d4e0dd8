use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The truncated Fock basis drops more probability than the tail budget allows.
    #[error("Fock cutoff {cutoff} is insufficient: tail {tail:.3e} exceeds {limit:.1e}")]
    CutoffInsufficient { cutoff: usize, tail: f64, limit: f64 },

    /// The normalization bracket of the hybrid state is (numerically) zero.
    #[error(
        "degenerate state: normalization bracket {bracket:.3e} \
         (epsilon={epsilon}, theta={theta}, phi={phi}, alpha={alpha_re}{alpha_im:+}i)"
    )]
    DegenerateState { bracket: f64, epsilon: f64, theta: f64, phi: f64, alpha_re: f64, alpha_im: f64 },

    #[error("exponential series did not converge at |lambda|={lambda_abs}: last term {last_term:.3e}")]
    SeriesNotConverged { lambda_abs: f64, last_term: f64 },

    #[error("mean photon number {mean_n:.3e} is too small for the Mandel Q factor")]
    VacuumState { mean_n: f64 },

    #[error("heralding failed: success probability {probability:.3e}")]
    HeraldFailed { probability: f64 },

    #[error("both branch amplitudes are zero")]
    BothZero,

    #[error("state is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for failures caused by numerics (truncation, degeneracy, convergence)
    /// rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CutoffInsufficient { .. }
                | Error::DegenerateState { .. }
                | Error::SeriesNotConverged { .. }
                | Error::VacuumState { .. }
                | Error::NotNormalized { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
