//! Seedable randomness and the stochastic primitives shared by the path
//! simulators.

mod cir;
mod rng;
mod shock;

pub use cir::{cir_step, CirParams};
pub use rng::{correlated_pair, RngStream};
pub use shock::{gompertz_pdf, shock_step, GompertzShockConfig, ShockState};
