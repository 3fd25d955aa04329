//! Invariant measures on Grassmannians and affine flats, restriction of
//! polytope unions to flats, and Monte Carlo checks of the Crofton formula
//! `∫ C_k(A ∩ E) μ^d_m(dE) = β^d_{d+k-m,m} C_{d+k-m}(A)`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::curvature::{curvature_entry_with, curvature_union_with, AngleConfig};
use crate::error::{Error, Result};
use crate::polyhedra::lp::{self, LpOutcome};
use crate::polyhedra::{ConvexPolytope, Halfspace, PolyUnion};
use crate::rational::{rank, rationalize, to_f64, to_f64_vec, Rat};
use crate::rng::substream;
use crate::special::{ball_volume, gamma};

/// Denominator exponent used when pulling constraints back to a flat.
pub const RESTRICT_BITS: u32 = 40;

/// `z + span(basis)` with an orthonormal basis and `z ⟂ span(basis)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    basis: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl AffineSubspace {
    pub fn new(basis: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self> {
        let d = offset.len();
        if let Some(b) = basis.iter().find(|b| b.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: b.len() });
        }
        if basis.len() > d {
            return Err(Error::InvalidArgument(format!("{} basis vectors in R^{d}", basis.len())));
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (dotf(a, b) - want).abs() > 1e-12 {
                    return Err(Error::InvalidArgument("basis is not orthonormal".into()));
                }
            }
            if dotf(a, &offset).abs() > 1e-12 * (1.0 + dotf(&offset, &offset).sqrt()) {
                return Err(Error::InvalidArgument("offset is not orthogonal to the basis".into()));
            }
        }
        Ok(AffineSubspace { basis, offset })
    }

    /// Flat through `point` with the given orthonormal directions.
    pub fn through(point: &[f64], basis: Vec<Vec<f64>>) -> Result<Self> {
        let mut z = point.to_vec();
        for b in &basis {
            let c = dotf(&z, b);
            z.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        AffineSubspace::new(basis, z)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// `z + Σ u_i b_i`.
    pub fn point(&self, u: &[f64]) -> Vec<f64> {
        let mut x = self.offset.clone();
        for (c, b) in u.iter().zip(&self.basis) {
            x.iter_mut().zip(b).for_each(|(p, q)| *p += c * q);
        }
        x
    }
}

/// `β^d_{i,j} = Γ((i+1)/2) Γ((j+1)/2) / (Γ((d+1)/2) Γ((i+j-d+1)/2))`.
pub fn beta(d: usize, i: usize, j: usize) -> Result<f64> {
    if i + j < d {
        return Err(Error::InvalidArgument(format!("beta needs i + j >= d, got i={i}, j={j}, d={d}")));
    }
    let h = |n: usize| gamma((n as f64 + 1.0) / 2.0);
    Ok(h(i) * h(j) / (h(d) * h(i + j - d)))
}

/// Orthonormal `d`-frame from Gaussian columns; the first `m` vectors are a
/// sample of `ν^d_m`, the rest span the orthogonal complement.
fn gaussian_frame<R: Rng>(d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut tries = 0;
    while q.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for b in &q {
                let c = dotf(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dotf(&v, &v).sqrt();
        if n < 1e-8 {
            tries += 1;
            assert!(tries < 64, "gaussian draws keep degenerating");
            continue;
        }
        q.push(v.into_iter().map(|x| x / n).collect());
    }
    q
}

/// Orthonormal `m`-frame distributed by the rotation-invariant measure.
pub fn sample_grassmann<R: Rng>(d: usize, m: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    if m == 0 || m >= d {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= d-1, got m={m}, d={d}")));
    }
    let mut q = gaussian_frame(d, rng);
    q.truncate(m);
    Ok(q)
}

/// A random m-flat `L + z` with `L ~ ν^d_m` and `z` uniform in the ball of
/// radius `r` of `L^⊥` centered at the projection of `center`, together
/// with the weight `κ_{d-m} r^{d-m}` turning sample means into `μ^d_m`
/// integrals.
pub fn sample_affine_hitting_around<R: Rng>(
    center: &[f64],
    m: usize,
    r: f64,
    rng: &mut R,
) -> Result<(AffineSubspace, f64)> {
    let d = center.len();
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if m > d {
        return Err(Error::InvalidArgument(format!("flat dimension {m} exceeds {d}")));
    }
    let q = gaussian_frame(d, rng);
    let (l, perp) = q.split_at(m);
    let k = d - m;
    let mut z = vec![0.0; d];
    if k > 0 {
        let g: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let gn = dotf(&g, &g).sqrt();
        let u: f64 = rng.random();
        let rad = r * u.powf(1.0 / k as f64);
        for (gi, b) in g.iter().zip(perp) {
            let c = dotf(center, b) + rad * gi / gn;
            z.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        }
    }
    let flat = AffineSubspace::new(l.to_vec(), z)?;
    Ok((flat, ball_volume(k) * r.powi(k as i32)))
}

/// [`sample_affine_hitting_around`] the origin.
pub fn sample_affine_hitting<R: Rng>(d: usize, m: usize, r: f64, rng: &mut R) -> Result<(AffineSubspace, f64)> {
    sample_affine_hitting_around(&vec![0.0; d], m, r, rng)
}

/// Constraint `a·x <= b` pulled back through `u -> z + B u`, rationalized.
fn pull_back(h: &Halfspace, e: &AffineSubspace) -> (Vec<Rat>, Rat) {
    let a = to_f64_vec(h.normal());
    let normal = e.basis.iter().map(|b| rationalize(dotf(&a, b), RESTRICT_BITS)).collect();
    let offset = h.offset() - rationalize(dotf(&a, &e.offset), RESTRICT_BITS);
    (normal, offset)
}

/// Pullback of `p` to `E`, and whether some constraint hyperplane contains `E`.
fn restrict_polytope(p: &ConvexPolytope, e: &AffineSubspace) -> Result<(ConvexPolytope, bool)> {
    let m = e.dim();
    let mut cs = Vec::new();
    let mut empty = false;
    let mut contained = false;
    for h in p.constraints() {
        let (a, b) = pull_back(h, e);
        if a.iter().all(Zero::is_zero) {
            empty |= b.is_negative();
            contained |= b.is_zero();
        } else {
            cs.push(Halfspace::new(a, b)?);
        }
    }
    if empty {
        // an infeasible pair standing in for a constraint violated everywhere on E
        let mut unit = vec![Rat::zero(); m];
        unit[0] = Rat::one();
        cs.push(Halfspace::new(unit.clone(), -Rat::one())?);
        cs.push(Halfspace::new(unit.iter().map(|x| -x).collect(), -Rat::one())?);
    }
    Ok((ConvexPolytope::new(m, cs)?, contained))
}

/// `A ∩ E` expressed in the coordinates of `E` (`m >= 1`); an error when
/// `E` is tangent to `A`.
pub fn restrict(a: &PolyUnion, e: &AffineSubspace) -> Result<PolyUnion> {
    restrict_checked(a, e)?.ok_or_else(|| Error::Degenerate("flat is tangent to the set".into()))
}

/// False iff some nerve cell `P` has a point `x ∈ E` and a unit normal
/// `n ∈ N_P(x)` orthogonal to `E`, decided on the rationalized pullback.
pub fn is_transversal(a: &PolyUnion, e: &AffineSubspace) -> Result<bool> {
    Ok(restrict_checked(a, e)?.is_some())
}

/// The restriction, or `None` for a tangent flat.
///
/// A full-dimensional cell `P` is met transversally iff `E` misses it or
/// cuts its interior, i.e. the pullback is empty or m-dimensional and no
/// constraint hyperplane of a met part contains `E`. Lower-dimensional cells
/// go through [`cell_transversal`].
fn restrict_checked(a: &PolyUnion, e: &AffineSubspace) -> Result<Option<PolyUnion>> {
    if e.ambient_dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: e.ambient_dim() });
    }
    if e.dim() == 0 {
        return Err(Error::InvalidArgument("cannot restrict to a point".into()));
    }
    let m = e.dim();
    let mut parts = Vec::with_capacity(a.parts().len());
    for p in a.parts() {
        let (q, contained) = restrict_polytope(p, e)?;
        if contained && q.feasible() {
            return Ok(None);
        }
        parts.push(q);
    }
    let r = PolyUnion::new(parts)?;
    let cells = a.nerve()?;
    for q in r.nerve()? {
        let p = cells.iter().find(|c| c.subset == q.subset).expect("a met cell is nonempty");
        let ok = if p.polytope.implicit_equalities()?.is_empty() {
            q.polytope.affine_dim()? == Some(m)
        } else {
            cell_transversal(&p.polytope, e)?
        };
        if !ok {
            return Ok(None);
        }
    }
    Ok(Some(r))
}

/// `E` misses `P`, or meets its relative interior with `aff P + E = R^d`.
fn cell_transversal(p: &ConvexPolytope, e: &AffineSubspace) -> Result<bool> {
    let eq = p.implicit_equalities()?;
    let m = e.dim();
    let pulled: Vec<(Vec<Rat>, Rat)> = p.constraints().iter().map(|h| pull_back(h, e)).collect();
    // maximize s subject to a'·u + s <= b' off the equalities, a'·u = b' on them
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, (a, b)) in pulled.iter().enumerate() {
        let mut r = a.clone();
        if eq.contains(&i) {
            r.push(Rat::zero());
            rows.push(r.iter().map(|x| -x).collect());
            rhs.push(-b.clone());
        } else {
            r.push(Rat::one());
        }
        rows.push(r);
        rhs.push(b.clone());
    }
    let mut cap = vec![Rat::zero(); m];
    cap.push(Rat::one());
    rows.push(cap.clone());
    rhs.push(Rat::one());
    let s = match lp::maximize(&rows, &rhs, &cap) {
        LpOutcome::Infeasible => return Ok(true),
        LpOutcome::Unbounded => unreachable!("slack is capped"),
        LpOutcome::Optimal { value, .. } => value,
    };
    if s.is_negative() {
        return Ok(true);
    }
    if s.is_zero() {
        return Ok(false);
    }
    let full: Vec<Vec<Rat>> = eq.iter().map(|&i| p.constraints()[i].normal().to_vec()).collect();
    let restricted: Vec<Vec<Rat>> = eq.iter().map(|&i| pulled[i].0.clone()).collect();
    Ok(rank(&restricted) == rank(&full))
}

/// Center of the bounding box and the largest vertex distance from it.
pub fn scene_ball(a: &PolyUnion) -> Result<(Vec<f64>, f64)> {
    let (lo, hi) = a.bounding_box()?.ok_or(Error::Empty)?;
    let c: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| (to_f64(l) + to_f64(h)) / 2.0).collect();
    let mut r: f64 = 0.0;
    for p in a.parts() {
        if p.feasible() {
            for v in p.vertices()? {
                let dv: Vec<f64> = to_f64_vec(v).iter().zip(&c).map(|(x, y)| x - y).collect();
                r = r.max(dotf(&dv, &dv).sqrt());
            }
        }
    }
    Ok((c, r))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CroftonEstimate {
    pub k: usize,
    pub m: usize,
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub radius: f64,
    pub reference: f64,
    /// Tangent flats redrawn.
    pub rejected: usize,
}

impl CroftonEstimate {
    /// Within three standard errors of the reference, with the relative
    /// error bar at most `rel`.
    pub fn passes(&self, rel: f64) -> bool {
        (self.mean - self.reference).abs() <= 3.0 * self.std_error && self.std_error <= rel * self.reference.abs()
    }
}

/// Options shared by the estimators.
#[derive(Clone, Copy, Debug)]
pub struct CroftonConfig {
    pub samples: usize,
    pub seed: u64,
    /// Sampling radius; defaults to 1.1 times the scene circumradius.
    pub radius: Option<f64>,
    pub angles: AngleConfig,
}

impl CroftonConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        CroftonConfig { samples, seed, radius: None, angles: AngleConfig { samples: 20_000, seed } }
    }
}

/// Monte Carlo estimate of `∫ C_k(A ∩ E) μ^d_m(dE)` against its Crofton value.
pub fn crofton_estimate(a: &PolyUnion, k: usize, m: usize, cfg: &CroftonConfig) -> Result<CroftonEstimate> {
    let d = a.dim();
    if k > m || m > d {
        return Err(Error::InvalidArgument(format!("need 0 <= k <= m <= d, got k={k}, m={m}, d={d}")));
    }
    if cfg.samples < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 samples, got {}", cfg.samples)));
    }
    let (center, circ) = scene_ball(a)?;
    let radius = cfg.radius.unwrap_or(1.1 * circ);
    if radius.is_nan() || radius <= 0.0 || radius < circ {
        return Err(Error::InvalidArgument(format!("radius {radius} does not cover the scene (circumradius {circ})")));
    }
    let full = curvature_union_with(a, &cfg.angles)?;
    let reference = beta(d, d + k - m, m)? * full.entries[d + k - m].value;
    if m == d {
        return Ok(CroftonEstimate {
            k,
            m,
            mean: full.entries[k].value,
            std_error: 0.0,
            samples: cfg.samples,
            radius,
            reference,
            rejected: 0,
        });
    }
    let draws: Vec<Result<(f64, usize)>> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(cfg.seed, "crofton", i);
            let mut rejected = 0;
            loop {
                let (e, w) = sample_affine_hitting_around(&center, m, radius, &mut rng)?;
                if m == 0 {
                    let x: Vec<Rat> = e.offset.iter().map(|&v| rationalize(v, RESTRICT_BITS)).collect();
                    return Ok((if a.contains(&x) { w } else { 0.0 }, rejected));
                }
                let Some(r) = restrict_checked(a, &e)? else {
                    rejected += 1;
                    if rejected > 100 {
                        return Err(Error::Degenerate("flats keep touching the scene".into()));
                    }
                    continue;
                };
                return Ok((w * curvature_entry_with(&r, k, &cfg.angles)?.value, rejected));
            }
        })
        .collect();
    let mut values = Vec::with_capacity(draws.len());
    let mut rejected = 0;
    for r in draws {
        let (v, rj) = r?;
        values.push(v);
        rejected += rj;
    }
    if rejected as f64 > 0.01 * (values.len() + rejected) as f64 {
        return Err(Error::Degenerate(format!("{rejected} tangent flats out of {}", values.len() + rejected)));
    }
    let (mean, std_error) = mean_and_se(&values);
    Ok(CroftonEstimate { k, m, mean, std_error, samples: values.len(), radius, reference, rejected })
}

pub(crate) fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub d: usize,
    pub m: usize,
    pub i: usize,
    pub samples: usize,
    pub direct_mean: f64,
    pub direct_se: f64,
    pub two_stage_mean: f64,
    pub two_stage_se: f64,
    pub z: f64,
    pub p_value: f64,
}

impl DecompositionReport {
    pub fn passes(&self) -> bool {
        self.p_value > 0.01
    }
}

fn hits(target: &PolyUnion, e: &AffineSubspace) -> Result<bool> {
    for p in target.parts() {
        if restrict_polytope(p, e)?.0.feasible() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Two estimates of `μ^d_i{E : E ∩ [0,1]^d ≠ ∅}`: directly, and by first
/// drawing an m-flat and then an i-flat inside it. Returns the two-sample
/// z statistic and its two-sided p-value.
pub fn decomposition_check(d: usize, m: usize, i: usize, samples: usize, seed: u64) -> Result<DecompositionReport> {
    if !(1 <= i && i < m && m < d) {
        return Err(Error::InvalidArgument(format!("need 1 <= i < m <= d-1, got d={d}, m={m}, i={i}")));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let cube = PolyUnion::single(ConvexPolytope::unit_cube(d))?;
    let (center, circ) = scene_ball(&cube)?;
    let radius = 1.1 * circ;

    let direct: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = substream(seed, "decomposition/direct", s);
            let (e, w) = sample_affine_hitting_around(&center, i, radius, &mut rng)?;
            Ok(if hits(&cube, &e)? { w } else { 0.0 })
        })
        .collect::<Result<_>>()?;
    let staged: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = substream(seed, "decomposition/two-stage", s);
            let (outer, w1) = sample_affine_hitting_around(&center, m, radius, &mut rng)?;
            // an i-flat of E, sampled in E's own coordinates around the
            // point of E nearest the center
            let local: Vec<f64> = outer.basis.iter().map(|b| dotf(b, &center)).collect();
            let (inner, w2) = sample_affine_hitting_around(&local, i, radius, &mut rng)?;
            let basis: Vec<Vec<f64>> = inner
                .basis
                .iter()
                .map(|c| {
                    let mut v = vec![0.0; d];
                    for (cj, b) in c.iter().zip(&outer.basis) {
                        v.iter_mut().zip(b).for_each(|(x, y)| *x += cj * y);
                    }
                    v
                })
                .collect();
            let e = AffineSubspace::through(&outer.point(&inner.offset), basis)?;
            Ok(if hits(&cube, &e)? { w1 * w2 } else { 0.0 })
        })
        .collect::<Result<_>>()?;
    let (m1, s1) = mean_and_se(&direct);
    let (m2, s2) = mean_and_se(&staged);
    let se = s1.hypot(s2);
    let z = if se > 0.0 { (m1 - m2) / se } else { 0.0 };
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p_value = 2.0 * (1.0 - normal.cdf(z.abs()));
    Ok(DecompositionReport {
        d,
        m,
        i,
        samples,
        direct_mean: m1,
        direct_se: s1,
        two_stage_mean: m2,
        two_stage_se: s2,
        z,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::euler;
    use crate::rational::{frac, int, vec_i};
    use std::f64::consts::PI;

    #[test]
    fn beta_values() {
        for d in 1..=10 {
            for m in 0..=d {
                assert!((beta(d, d, m).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        assert!((beta(2, 1, 1).unwrap() - 2.0 / PI).abs() < 1e-12);
        assert!((beta(3, 2, 2).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!(beta(3, 1, 1).is_err());
    }

    #[test]
    fn frames_are_orthonormal() {
        let mut rng = substream(1, "t", 0);
        for _ in 0..50 {
            let q = sample_grassmann(5, 3, &mut rng).unwrap();
            assert!(AffineSubspace::new(q, vec![0.0; 5]).is_ok());
        }
        assert!(sample_grassmann(3, 3, &mut rng).is_err());
        assert!(sample_affine_hitting(3, 1, 0.0, &mut rng).is_err());
    }

    #[test]
    fn affine_samples_stay_in_the_ball() {
        let mut rng = substream(2, "t", 0);
        for _ in 0..200 {
            let (e, w) = sample_affine_hitting_around(&[1.0, 2.0, 3.0], 1, 0.5, &mut rng).unwrap();
            let c = e.point(&[dotf(&[1.0, 2.0, 3.0], &e.basis()[0])]);
            let dist = c.iter().zip([1.0, 2.0, 3.0]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            assert!(dist <= 0.5 + 1e-12);
            assert!((w - PI * 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn restriction_examples() {
        let sq = PolyUnion::single(ConvexPolytope::unit_cube(2)).unwrap();
        let line = AffineSubspace::new(vec![vec![1.0, 0.0]], vec![0.0, 0.5]).unwrap();
        let r = restrict(&sq, &line).unwrap();
        assert_eq!(r.parts()[0].vertices().unwrap(), &[vec![int(0)], vec![int(1)]]);
        let away = AffineSubspace::new(vec![vec![1.0, 0.0]], vec![0.0, 5.0]).unwrap();
        assert!(is_transversal(&sq, &away).unwrap());
        assert_eq!(euler(&restrict(&sq, &away).unwrap()).unwrap(), 0);
        let edge = AffineSubspace::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0]).unwrap();
        assert!(!is_transversal(&sq, &edge).unwrap());
        assert!(restrict(&sq, &edge).is_err());
        let s = 0.5f64.sqrt();
        let diag = AffineSubspace::through(&[0.3, 0.4], vec![vec![s, s]]).unwrap();
        assert!(is_transversal(&sq, &diag).unwrap());
    }

    #[test]
    fn cube_cut_by_plane_is_a_polygon() {
        let cube = PolyUnion::single(ConvexPolytope::unit_cube(3)).unwrap();
        let mut rng = substream(5, "t", 0);
        let mut seen = 0;
        while seen < 20 {
            let (e, _) = sample_affine_hitting_around(&[0.5, 0.5, 0.5], 2, 0.3, &mut rng).unwrap();
            let r = restrict(&cube, &e).unwrap();
            let n = r.parts()[0].vertices().unwrap().len();
            assert!((3..=6).contains(&n), "{n} vertices");
            seen += 1;
        }
    }

    #[test]
    fn fubini_case_is_exact() {
        let sq = PolyUnion::single(ConvexPolytope::cuboid(&vec_i(&[0, 0]), &[int(2), frac(1, 2)]).unwrap()).unwrap();
        let est = crofton_estimate(&sq, 2, 2, &CroftonConfig::new(100, 0)).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.reference, 1.0);
        assert!(crofton_estimate(&sq, 2, 1, &CroftonConfig::new(100, 0)).is_err());
    }

    #[test]
    fn small_crofton_run_is_reproducible() {
        let sq = PolyUnion::single(ConvexPolytope::unit_cube(2)).unwrap();
        let cfg = CroftonConfig::new(400, 9);
        let a = crofton_estimate(&sq, 0, 1, &cfg).unwrap();
        let b = crofton_estimate(&sq, 0, 1, &cfg).unwrap();
        assert_eq!(a, b);
        assert!((a.reference - 4.0 / PI).abs() < 1e-12);
        assert!((a.mean - a.reference).abs() < 4.0 * a.std_error);
    }

    #[test]
    fn decomposition_preconditions() {
        assert!(decomposition_check(2, 1, 1, 100, 0).is_err());
        assert!(decomposition_check(3, 2, 2, 100, 0).is_err());
        let r = decomposition_check(3, 2, 1, 300, 4).unwrap();
        assert!(r.direct_mean > 0.0 && r.two_stage_mean > 0.0);
    }
}
