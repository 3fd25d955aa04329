//! Gamma-function constants: sphere areas and ball volumes.

use std::f64::consts::PI;

pub use statrs::function::gamma::gamma;

/// `O_m = H^m(S^m) = 2 π^{(m+1)/2} / Γ((m+1)/2)`.
pub fn sphere_area(m: usize) -> f64 {
    let h = (m as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Volume `κ_j` of the unit ball in `R^j`.
pub fn ball_volume(j: usize) -> f64 {
    let h = j as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

/// The total measure of the unit sphere `S^m`, with its dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereConstant {
    pub dim: usize,
    pub value: f64,
}

impl SphereConstant {
    pub fn new(dim: usize) -> Self {
        SphereConstant { dim, value: sphere_area(dim) }
    }
}
