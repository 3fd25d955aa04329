//! Curvature measures and normal-cycle index functions of finite unions of
//! convex polytopes, with exact checks of the Gauss-Bonnet slice identity and
//! additivity, and Monte Carlo checks of the Crofton formula.

// Matrix kernels read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod approx;
pub mod cli;
pub mod crofton;
pub mod curvature;
pub mod dcfun;
pub mod error;
pub mod ncycle;
pub mod polyhedra;
pub mod rational;
pub mod report;
pub mod rng;
pub mod scene;
pub mod special;

pub use error::{Error, Result};
pub use rational::Rat;
