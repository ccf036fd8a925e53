//! Well-balanced moving-frame schemes for one-dimensional reaction-diffusion
//! fronts.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - reaction models (F/KPP and the cubic family) with closed-form growth
//!   factors, analytic reference speeds and initial data ([`model`]);
//! - the exact two-point cell solver behind the L-spline fluxes ([`cell`]);
//! - the moving-frame well-balanced step with LeVeque-Yee speed estimation
//!   ([`wb`]) and the tridiagonal solver it relies on ([`tridiag`]);
//! - the Strang splitting and "0-wave" comparison schemes ([`reference`]);
//! - level-set tracking and delay fitting on run records ([`analysis`]).
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod cell;
mod error;
mod math;
pub mod model;
pub mod reference;
pub mod tridiag;
pub mod wb;

pub use error::{Error, Result};
pub use model::{Grid, Profile, Reaction, ReactionKind, ReactionModel};
