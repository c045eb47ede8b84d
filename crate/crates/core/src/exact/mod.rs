//! Exact Gaussian-rational algebra and the rational-function bases.

pub mod bases;
pub mod gq;
pub mod identities;
pub mod params;
pub mod poly;
pub mod ratfun;
pub mod subset;

pub use gq::GaussianRational;
pub use params::ParamSet;
pub use poly::{Linear, Poly};
pub use ratfun::{Combination, MultiRatFun, NumericRat, ZeroTest, ZeroVerdict};
pub use subset::{subsets, Subset};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("expected {expected} points, got {got}")]
    WrongPointCount { expected: usize, got: usize },
    #[error("points z_{0} and z_{1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("points z_{0} and z_{1} differ by 0 or ±hbar")]
    ResonantPoints(usize, usize),
    #[error("weight {ell} is not allowed for {n} sites")]
    BadWeight { n: usize, ell: usize },
    #[error("pole of order {0} where a simple pole was required")]
    HigherOrderPole(u32),
    #[error("division by an identically vanishing factor")]
    DivisionByZero,
    #[error("evaluation point lies on a pole")]
    PoleHit,
    #[error("subset of size {got} where {expected} was required")]
    SubsetSize { expected: usize, got: usize },
    #[error("index {0} is not in the subset")]
    NotInSubset(usize),
}
