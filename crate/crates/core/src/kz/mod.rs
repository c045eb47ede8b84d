//! The classical side: the phase `φ_cl = ∏(t − z_m)^{−1/2}` on the hyperelliptic
//! curve, cycles and the open contour between the two points at infinity, the
//! solutions built from them and the KZ differential equation check.

pub mod path;
pub mod solutions;

use crate::exact::ExactError;

pub use path::{min_gap, BranchPath, PathRule, Piece, StartBranch};
pub use solutions::{
    basis_cycle, calibration_integral, check_kz, classical_limit, gamma_inf, gamma_inf_with_sign, psi_s, psi_sv,
    ClassicalLimit, KzResidual,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KzError {
    #[error("branch of y jumped near {re}{im:+}i")]
    BranchJumpDetected { re: f64, im: f64 },
    #[error("path passes too close to the branch point {re}{im:+}i")]
    TooCloseToBranchPoint { re: f64, im: f64 },
    #[error("calibration integral is {re}{im:+}i instead of ±4")]
    CalibrationFailed { re: f64, im: f64 },
    #[error("path quadrature did not converge (relative change {error:e})")]
    NoConvergence { error: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
