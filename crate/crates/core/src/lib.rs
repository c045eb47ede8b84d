//! Level-zero solutions of the rational KZ and qKZ equations.

pub mod exact;
pub mod qpoly;
pub mod cycles;
pub mod hyperint;
pub mod qkz;
pub mod kz;
pub mod trace;
pub mod config;
pub mod suite;
