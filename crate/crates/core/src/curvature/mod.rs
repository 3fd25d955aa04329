//! Curvature measures `C_0, …, C_d` of convex polytopes and of finite unions,
//! total or localized to a window, together with the pointwise
//! Lipschitz-Killing forms they integrate.
//!
//! Normalization: `C_0` is the Euler characteristic, `C_{d-1}` half the
//! surface area and `C_d` the volume; facets carry external angle `1/2`.

mod angle;
pub(crate) mod lk;

pub use angle::{external_angle, external_angle_with, AngleConfig, AngleValue, FaceAngle};
pub use lk::{lk_form_eval, polygon_normal_bundle_integral};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedra::{ConvexPolytope, Face, FaceLattice, PolyUnion, Volume};
use crate::rational::{format_rat, Rat};

/// One curvature coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureEntry {
    pub value: f64,
    /// Present when every contributing angle and volume is exact.
    pub exact: Option<Rat>,
    /// Monte Carlo standard error carried from sampled angles.
    pub error: f64,
}

impl CurvatureEntry {
    fn zero() -> Self {
        CurvatureEntry { value: 0.0, exact: Some(Rat::zero()), error: 0.0 }
    }

    fn add_scaled(&mut self, o: &CurvatureEntry, s: i64) {
        let sr = Rat::from_integer(s.into());
        self.value += s as f64 * o.value;
        self.exact = self.exact.take().zip(o.exact.as_ref()).map(|(a, b)| a + b * sr);
        self.error = self.error.hypot(o.error);
    }
}

/// `C_0, …, C_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureVector {
    pub entries: Vec<CurvatureEntry>,
}

impl CurvatureVector {
    pub fn zeros(d: usize) -> Self {
        CurvatureVector { entries: vec![CurvatureEntry::zero(); d + 1] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn exact_values(&self) -> Option<Vec<Rat>> {
        self.entries.iter().map(|e| e.exact.clone()).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.exact.is_some())
    }

    /// `self + s·other`.
    pub fn add_scaled(&mut self, other: &CurvatureVector, s: i64) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, s);
        }
    }

    pub fn max_abs_diff(&self, other: &CurvatureVector) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a.value - b.value).abs()).fold(0.0, f64::max)
    }

    /// `C_0` rounded to the nearest integer when it lies within `tol` of one.
    pub fn euler(&self, tol: f64) -> Option<i64> {
        let e = &self.entries[0];
        if let Some(x) = &e.exact {
            return x.is_integer().then(|| x.to_integer().try_into().ok()).flatten();
        }
        let r = e.value.round();
        ((e.value - r).abs() <= tol + 4.0 * e.error).then_some(r as i64)
    }
}

/// JSON-friendly view used by reports.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureEntryView {
    pub k: usize,
    pub value: f64,
    pub exact: Option<String>,
    pub error: f64,
}

impl CurvatureVector {
    pub fn view(&self) -> Vec<CurvatureEntryView> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, e)| CurvatureEntryView {
                k,
                value: e.value,
                exact: e.exact.as_ref().map(format_rat),
                error: e.error,
            })
            .collect()
    }
}

pub fn curvature_convex(p: &ConvexPolytope) -> Result<CurvatureVector> {
    curvature_convex_with(p, &AngleConfig::default())
}

/// `C_k(P) = Σ_{k-faces F} γ(F, P) H^k(F)` with external angles `γ`.
pub fn curvature_convex_with(p: &ConvexPolytope, cfg: &AngleConfig) -> Result<CurvatureVector> {
    convex_sum(p, cfg, None, |lat, f| Ok(lat.volume(f)))
}

/// Face sums with `H^k(F ∩ W)` in place of `H^k(F)`.
pub fn curvature_convex_localized(
    p: &ConvexPolytope,
    window: &ConvexPolytope,
    cfg: &AngleConfig,
) -> Result<CurvatureVector> {
    if window.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: window.dim() });
    }
    convex_sum(p, cfg, None, |lat, f| clipped_volume(p, lat, f, window))
}

/// Face sums over all dimensions, or over `only` alone.
fn convex_sum<V>(p: &ConvexPolytope, cfg: &AngleConfig, only: Option<usize>, mut vol: V) -> Result<CurvatureVector>
where
    V: FnMut(&FaceLattice, &Face) -> Result<Volume>,
{
    if !p.feasible() {
        return Err(Error::Empty);
    }
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    let lat = FaceLattice::of(p)?;
    let mut out = CurvatureVector::zeros(p.dim());
    for f in lat.faces.iter().filter(|f| only.is_none_or(|k| f.dim == k)) {
        let v = vol(&lat, f)?;
        if v.value == 0.0 && v.exact.as_ref().is_none_or(Zero::is_zero) {
            continue;
        }
        let a = angle::face_angle(p, &lat, f, cfg)?;
        let term = CurvatureEntry {
            value: a.value * v.value,
            exact: a.exact.zip(v.exact).map(|(x, y)| x * y),
            error: a.std_error * v.value,
        };
        out.entries[f.dim].add_scaled(&term, 1);
    }
    Ok(out)
}

/// `H^k(F ∩ W)` for a k-face `F` of `p`.
fn clipped_volume(p: &ConvexPolytope, lat: &FaceLattice, f: &Face, window: &ConvexPolytope) -> Result<Volume> {
    if f.dim == 0 {
        let inside = window.contains(&lat.vertices[f.vertices[0]]);
        return Ok(Volume::exact(Rat::from_integer(i64::from(inside).into())));
    }
    let mut q = p.intersect(window)?;
    for &i in &f.tight {
        q = q.with(p.constraints()[i].flipped())?;
    }
    if !q.feasible() {
        return Ok(Volume::zero());
    }
    let ql = FaceLattice::of(&q)?;
    if ql.dim < f.dim {
        return Ok(Volume::zero());
    }
    Ok(ql.volume(ql.faces.last().expect("nonempty lattice")))
}

pub fn curvature_union(a: &PolyUnion) -> Result<CurvatureVector> {
    curvature_union_with(a, &AngleConfig::default())
}

/// Inclusion-exclusion of `curvature_convex` over the nerve of the parts.
pub fn curvature_union_with(a: &PolyUnion, cfg: &AngleConfig) -> Result<CurvatureVector> {
    let mut out = CurvatureVector::zeros(a.dim());
    for cell in a.nerve()? {
        out.add_scaled(&curvature_convex_with(&cell.polytope, cfg)?, cell.sign());
    }
    Ok(out)
}

/// The single coefficient `C_k(A)`, skipping faces of other dimensions.
pub fn curvature_entry_with(a: &PolyUnion, k: usize, cfg: &AngleConfig) -> Result<CurvatureEntry> {
    if k > a.dim() {
        return Err(Error::InvalidArgument(format!("no curvature C_{k} in dimension {}", a.dim())));
    }
    let mut out = CurvatureVector::zeros(a.dim());
    for cell in a.nerve()? {
        out.add_scaled(&convex_sum(&cell.polytope, cfg, Some(k), |lat, f| Ok(lat.volume(f)))?, cell.sign());
    }
    Ok(out.entries.swap_remove(k))
}

pub fn curvature_localized(a: &PolyUnion, window: &ConvexPolytope) -> Result<CurvatureVector> {
    curvature_localized_with(a, window, &AngleConfig::default())
}

/// `C_k(A, W)` for a polytope window `W`.
pub fn curvature_localized_with(a: &PolyUnion, window: &ConvexPolytope, cfg: &AngleConfig) -> Result<CurvatureVector> {
    let mut out = CurvatureVector::zeros(a.dim());
    for cell in a.nerve()? {
        out.add_scaled(&curvature_convex_localized(&cell.polytope, window, cfg)?, cell.sign());
    }
    Ok(out)
}

/// Image of `A` under `x -> m x + t`; `m` must be invertible.
pub fn affine_pushforward(a: &PolyUnion, m: &[Vec<Rat>], t: &[Rat]) -> Result<PolyUnion> {
    if m.len() != a.dim() || m.iter().any(|r| r.len() != a.dim()) {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: m.len() });
    }
    if t.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: t.len() });
    }
    a.affine_image(m, t)
}
