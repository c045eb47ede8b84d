//! The qKZ side: states in `V^{⊗n}`, R-matrices, special bases and the assembly of
//! hypergeometric solutions.

pub mod assemble;
pub mod basis;
pub mod state;

use crate::cycles::CycleError;
use crate::exact::ExactError;
use crate::hyperint::HyperError;

pub use assemble::{
    assemble_psi, assemble_singlet, check_qkz, singular_defect, Assembled, Method, QkzResidual, SingletForm,
};
pub use basis::{basis_vectors, exchange_failures, BasisFamily, Family};
pub use state::{apply_k, r_matrix, sigma_minus, sigma_plus, sigma_three, StateVector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QkzError {
    #[error("R-matrix evaluated at its pole x = −ħ")]
    PoleOfR,
    #[error("expected {expected} cycle factors, got {got}")]
    FactorCount { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}
