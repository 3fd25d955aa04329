//! Index function of the normal cycle of a polyhedral union, slice sums over
//! halfspaces, additivity, and touching halfspaces.
//!
//! The index at `(x, n)` is read off the tangent cone `C` of `A` at `x`:
//! `χ(C ∩ {n·u >= -1}) - χ(C ∩ {n·u >= 1})`. Both terms are Euler
//! characteristics of unions of convex sets and are evaluated exactly through
//! the nerve of the cone parts.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedra::{
    box_around, euler_with_halfspace, lp, nerve, nerve_euler, tangent_cone, ConvexPolytope, Halfspace, PolyCone,
    PolyUnion,
};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::rational::{dot, format_rat, is_zero_vec, rationalize, to_f64_vec, Rat};
use crate::rng::substream;

/// A point together with a (not necessarily unit) normal direction.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalQuery {
    pub point: Vec<Rat>,
    pub direction: Vec<Rat>,
}

impl NormalQuery {
    pub fn new(point: Vec<Rat>, direction: Vec<Rat>) -> Result<Self> {
        if point.len() != direction.len() {
            return Err(Error::DimensionMismatch { expected: point.len(), found: direction.len() });
        }
        if is_zero_vec(&direction) {
            return Err(Error::ZeroNormal);
        }
        Ok(NormalQuery { point, direction })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexValue {
    pub value: i64,
    /// Set when `n` lies on the boundary of a normal cone of the local
    /// structure, where the index is not locally constant in `n`.
    pub degenerate: bool,
}

/// Index function `ι_A(x, n)`.
pub fn index(a: &PolyUnion, q: &NormalQuery) -> Result<IndexValue> {
    if q.point.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: q.point.len() });
    }
    let cone = match tangent_cone(a, &q.point) {
        Ok(c) => c,
        Err(Error::NotInSet) => return Ok(IndexValue { value: 0, degenerate: false }),
        Err(e) => return Err(e),
    };
    let n = &q.direction;
    let lower = cone.euler_above(n, &-Rat::one())?;
    let upper = cone.euler_above(n, &Rat::one())?;
    Ok(IndexValue { value: lower - upper, degenerate: cone_is_degenerate(&cone, n)? })
}

/// `n` is degenerate for the cone when, for some intersection `K` of cone
/// parts, `n` lies in the polar of `K` and `n·u = 0` for some nonzero `u ∈ K`.
fn cone_is_degenerate(cone: &PolyCone, n: &[Rat]) -> Result<bool> {
    let d = cone.dim();
    let up = Halfspace::new(n.iter().map(|x| -x).collect(), -Rat::one())?;
    for cell in nerve(cone.parts())? {
        let k = &cell.polytope;
        if k.with(up.clone())?.feasible() {
            continue; // n outside the polar
        }
        let (mut a, mut b) = k.matrix();
        a.push(n.to_vec());
        b.push(Rat::zero());
        a.push(n.iter().map(|x| -x).collect());
        b.push(Rat::zero());
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            a.push(e.clone());
            b.push(Rat::one());
            e[i] = -Rat::one();
            a.push(e);
            b.push(Rat::one());
        }
        for i in 0..d {
            for s in [1, -1] {
                let mut c = vec![Rat::zero(); d];
                c[i] = Rat::from_integer(s.into());
                if let lp::LpOutcome::Optimal { value, .. } = lp::maximize(&a, &b, &c) {
                    if value.is_positive() {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Direct evaluation of the local index without tangent-cone reduction:
/// `χ(A ∩ B_r ∩ {(p-x)·n >= -δ}) - χ(A ∩ B_r ∩ {(p-x)·n >= δ})` with `B_r`
/// the box of radius `r` around `x`.
pub fn index_bruteforce(a: &PolyUnion, q: &NormalQuery, r: &Rat, delta: &Rat) -> Result<i64> {
    if !r.is_positive() || !delta.is_positive() {
        return Err(Error::InvalidArgument("radius and offset must be positive".into()));
    }
    let x = &q.point;
    let n = &q.direction;
    let bx = box_around(x, r);
    let nx = dot(n, x);
    let cut = |level: Rat| -> Result<i64> {
        // (p - x)·n >= level  <=>  -n·p <= -(level + n·x)
        let h = Halfspace::new(n.iter().map(|v| -v).collect(), -(level + &nx))?;
        let parts: Vec<ConvexPolytope> =
            a.parts().iter().map(|p| p.intersect(&bx)?.with(h.clone())).collect::<Result<_>>()?;
        nerve_euler(&parts)
    };
    Ok(cut(-delta.clone())? - cut(delta.clone())?)
}

/// Box radius and slab offset small enough for [`index_bruteforce`] to have
/// reached its limit at `(x, n)`.
///
/// The radius is half the smallest nonzero constraint slack at `x` measured
/// in the box norm; the offset is half the smallest positive height that `n`
/// attains over a part intersection containing `x` within that box.
pub fn bruteforce_scales(a: &PolyUnion, q: &NormalQuery) -> Result<(Rat, Rat)> {
    let x = &q.point;
    let mut r: Option<Rat> = None;
    for p in a.parts() {
        for h in p.constraints() {
            let slack = h.excess(x).abs();
            if slack.is_zero() {
                continue;
            }
            let l1: Rat = h.normal().iter().map(|v| v.abs()).sum();
            let s = slack / l1;
            if r.as_ref().is_none_or(|cur| &s < cur) {
                r = Some(s);
            }
        }
    }
    let r = r.unwrap_or_else(Rat::one) / Rat::from_integer(2.into());
    let bx = box_around(x, &r);
    let nx = dot(&q.direction, x);
    let mut delta = r.clone();
    for cell in a.nerve()? {
        if !cell.polytope.contains(x) {
            continue;
        }
        if let lp::LpOutcome::Optimal { value, .. } = cell.polytope.intersect(&bx)?.maximize(&q.direction) {
            let height = value - &nx;
            if height.is_positive() && height < delta {
                delta = height;
            }
        }
    }
    Ok((r, delta / Rat::from_integer(2.into())))
}

/// Outcome of summing the index over a halfspace.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceReport {
    pub direction: Vec<Rat>,
    pub threshold: Rat,
    /// Points with nonzero `ι(x, -v)` and `x·v <= t`.
    pub contributions: Vec<(Vec<Rat>, i64)>,
    pub sum: i64,
    pub euler: i64,
    pub degenerate: bool,
}

impl SliceReport {
    pub fn holds(&self) -> bool {
        self.sum == self.euler
    }
}

/// Sums `ι_A(x, -v)` over all `x` with `x·v <= t` and compares the result
/// with `χ(A ∩ {x·v <= t})`.
///
/// For generic `v` the index `ι(·, -v)` vanishes off the vertices of the
/// part intersections, so those vertices form the candidate set.
pub fn slice_sum(a: &PolyUnion, v: &[Rat], t: &Rat) -> Result<SliceReport> {
    let h = Halfspace::new(v.to_vec(), t.clone())?;
    let euler = euler_with_halfspace(a, &h)?;
    let minus_v: Vec<Rat> = v.iter().map(|x| -x).collect();
    let mut contributions = Vec::new();
    let mut degenerate = false;
    let mut sum = 0;
    for x in a.nerve_vertices()? {
        let level = dot(v, &x);
        if &level == t {
            degenerate = true;
        }
        if &level > t {
            continue;
        }
        let iv = index(a, &NormalQuery { point: x.clone(), direction: minus_v.clone() })?;
        degenerate |= iv.degenerate;
        if iv.value != 0 {
            sum += iv.value;
            contributions.push((x, iv.value));
        }
    }
    Ok(SliceReport { direction: v.to_vec(), threshold: t.clone(), contributions, sum, euler, degenerate })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdditivityReport {
    pub a: i64,
    pub b: i64,
    pub intersection: i64,
    pub union: i64,
    pub holds: bool,
}

/// Checks `ι_A + ι_B = ι_{A∩B} + ι_{A∪B}` at one query.
pub fn additivity_check(a: &PolyUnion, b: &PolyUnion, q: &NormalQuery) -> Result<AdditivityReport> {
    let cap = a.intersection(b)?;
    let cup = a.union(b)?;
    let mut vals = [0i64; 4];
    for (slot, set) in vals.iter_mut().zip([a, b, &cap, &cup]) {
        let iv = index(set, q)?;
        if iv.degenerate {
            return Err(Error::Degenerate("query direction is degenerate".into()));
        }
        *slot = iv.value;
    }
    let [ia, ib, ic, iu] = vals;
    Ok(AdditivityReport { a: ia, b: ib, intersection: ic, union: iu, holds: ia + ib == ic + iu })
}

/// True iff some `(x, -v)` lies in the normal bundle of the union's part
/// intersections with `x·v = t`, i.e. `t` is the minimum of `v` over one of
/// the nonempty part intersections.
pub fn touching_halfspace(a: &PolyUnion, v: &[Rat], t: &Rat) -> Result<bool> {
    if v.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: v.len() });
    }
    if is_zero_vec(v) {
        return Err(Error::ZeroNormal);
    }
    for cell in a.nerve()? {
        let vs = cell.polytope.vertices()?;
        let min = vs.iter().map(|x| dot(v, x)).min().expect("nonempty");
        if &min == t {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Draws halfspaces `{x : v·x <= t}` with `v` Gaussian on a dyadic grid and
/// `t` uniform over the range of `v` on the union, widened by a tenth each side.
#[derive(Clone, Debug)]
pub struct HalfspaceSampler {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl HalfspaceSampler {
    pub fn new(a: &PolyUnion) -> Result<Self> {
        let vertices = a.nerve_vertices()?.iter().map(|v| to_f64_vec(v)).collect();
        Ok(HalfspaceSampler { dim: a.dim(), vertices })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec<Rat>, Rat) {
        loop {
            let g: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
            let v: Vec<Rat> = g.iter().map(|&x| rationalize(x, 16)).collect();
            if is_zero_vec(&v) {
                continue;
            }
            let vf = to_f64_vec(&v);
            let levels = self.vertices.iter().map(|x| x.iter().zip(&vf).map(|(a, b)| a * b).sum::<f64>());
            let (lo, hi) = levels.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), y| (l.min(y), h.max(y)));
            let pad = 0.1 * (hi - lo).max(1e-3);
            let t = rationalize(rng.random_range(lo - pad..=hi + pad), 20);
            return (v, t);
        }
    }
}

/// How one halfspace fared in the slice identity.
#[derive(Clone, Debug, PartialEq)]
pub enum SliceOutcome {
    /// The bounding hyperplane supports some part intersection; skipped.
    Touching,
    /// The candidate points see a degenerate direction; skipped.
    Degenerate(SliceReport),
    Checked(SliceReport),
}

pub fn classify_slice(a: &PolyUnion, v: &[Rat], t: &Rat) -> Result<SliceOutcome> {
    if touching_halfspace(a, v, t)? {
        return Ok(SliceOutcome::Touching);
    }
    let r = slice_sum(a, v, t)?;
    Ok(if r.degenerate { SliceOutcome::Degenerate(r) } else { SliceOutcome::Checked(r) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceFailure {
    pub direction: Vec<String>,
    pub threshold: String,
    pub sum: i64,
    pub euler: i64,
}

/// Tally of the slice identity over random halfspaces.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SliceTrialSummary {
    pub samples: usize,
    pub checked: usize,
    pub passed: usize,
    pub touching: usize,
    pub degenerate: usize,
    pub failures: Vec<SliceFailure>,
}

impl SliceTrialSummary {
    pub fn record(&mut self, v: &[Rat], t: &Rat, outcome: &SliceOutcome) {
        self.samples += 1;
        match outcome {
            SliceOutcome::Touching => self.touching += 1,
            SliceOutcome::Degenerate(_) => self.degenerate += 1,
            SliceOutcome::Checked(r) => {
                self.checked += 1;
                if r.holds() {
                    self.passed += 1;
                } else {
                    self.failures.push(SliceFailure {
                        direction: v.iter().map(format_rat).collect(),
                        threshold: format_rat(t),
                        sum: r.sum,
                        euler: r.euler,
                    });
                }
            }
        }
    }

    /// Fraction of samples skipped as touching or degenerate.
    pub fn rejection_rate(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            (self.touching + self.degenerate) as f64 / self.samples as f64
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }
}

/// Checks the slice identity on `samples` random halfspaces, reproducibly.
pub fn slice_trials(a: &PolyUnion, samples: usize, seed: u64) -> Result<SliceTrialSummary> {
    let sampler = HalfspaceSampler::new(a)?;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (v, t) = sampler.sample(&mut substream(seed, "slice", i as u64));
            classify_slice(a, &v, &t).map(|o| (v, t, o))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = SliceTrialSummary::default();
    for (v, t, o) in &outcomes {
        summary.record(v, t, o);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vec_i};

    fn rect(x0: i64, y0: i64, x1: i64, y1: i64) -> ConvexPolytope {
        ConvexPolytope::cuboid(&vec_i(&[x0, y0]), &vec_i(&[x1, y1])).unwrap()
    }
    fn square() -> PolyUnion {
        PolyUnion::single(rect(0, 0, 1, 1)).unwrap()
    }
    fn l_shape() -> PolyUnion {
        PolyUnion::new(vec![rect(0, 0, 2, 1), rect(0, 0, 1, 2)]).unwrap()
    }
    fn q(x: &[i64], n: &[i64]) -> NormalQuery {
        NormalQuery::new(vec_i(x), vec_i(n)).unwrap()
    }

    #[test]
    fn index_examples() {
        let iv = index(&square(), &q(&[0, 0], &[-1, -1])).unwrap();
        assert_eq!(iv, IndexValue { value: 1, degenerate: false });
        assert_eq!(index(&square(), &q(&[0, 0], &[1, 1])).unwrap().value, 0);
        assert_eq!(index(&l_shape(), &q(&[1, 1], &[1, 1])).unwrap().value, -1);
        assert_eq!(index(&square(), &q(&[5, 5], &[1, 0])).unwrap().value, 0);
        let interior = NormalQuery::new(vec![frac(1, 2), frac(1, 3)], vec_i(&[2, 1])).unwrap();
        assert_eq!(index(&square(), &interior).unwrap().value, 0);
    }

    #[test]
    fn degenerate_directions_flagged() {
        // n = -e_1 at the corner lies on the boundary of the quadrant normal cone
        assert!(index(&square(), &q(&[0, 0], &[-1, 0])).unwrap().degenerate);
        assert!(!index(&square(), &q(&[0, 0], &[-2, -1])).unwrap().degenerate);
    }

    #[test]
    fn bruteforce_examples() {
        let r = frac(1, 8);
        assert_eq!(index_bruteforce(&square(), &q(&[0, 0], &[-1, -1]), &r, &r).unwrap(), 1);
        assert_eq!(index_bruteforce(&l_shape(), &q(&[1, 1], &[1, 1]), &r, &r).unwrap(), -1);
        assert_eq!(index_bruteforce(&square(), &q(&[3, 3], &[1, 2]), &r, &r).unwrap(), 0);
    }

    #[test]
    fn slice_examples() {
        let rep = slice_sum(&square(), &[frac(3, 5), frac(4, 5)], &frac(1, 2)).unwrap();
        assert_eq!((rep.sum, rep.euler), (1, 1));
        assert_eq!(rep.contributions, vec![(vec_i(&[0, 0]), 1)]);
        let two = PolyUnion::new(vec![rect(0, 0, 1, 1), rect(3, 0, 4, 1)]).unwrap();
        let rep = slice_sum(&two, &[frac(3, 5), frac(4, 5)], &int(10)).unwrap();
        assert_eq!((rep.sum, rep.euler), (2, 2));
        let rep = slice_sum(&l_shape(), &[frac(3, 5), frac(4, 5)], &int(-1)).unwrap();
        assert_eq!((rep.sum, rep.euler), (0, 0));
        assert!(!rep.degenerate);
    }

    #[test]
    fn touching_examples() {
        assert!(touching_halfspace(&square(), &vec_i(&[1, 0]), &int(0)).unwrap());
        let v = [frac(3, 5), frac(4, 5)];
        assert!(touching_halfspace(&square(), &v, &int(0)).unwrap());
        assert!(!touching_halfspace(&square(), &v, &frac(1, 7)).unwrap());
    }

    #[test]
    fn additivity_examples() {
        let a = PolyUnion::single(rect(0, 0, 2, 2)).unwrap();
        let b = PolyUnion::single(rect(1, 1, 3, 3)).unwrap();
        let rep = additivity_check(&a, &b, &q(&[1, 1], &[-2, -1])).unwrap();
        assert!(rep.holds);
        let rep = additivity_check(&a, &a, &q(&[0, 0], &[-1, -3])).unwrap();
        assert!(rep.holds);
        let far = PolyUnion::single(rect(5, 5, 6, 6)).unwrap();
        let rep = additivity_check(&a, &far, &q(&[0, 0], &[-1, -3])).unwrap();
        assert_eq!((rep.b, rep.intersection), (0, 0));
        assert!(rep.holds);
    }

    #[test]
    fn random_slices_hold() {
        let s = slice_trials(&l_shape(), 60, 11).unwrap();
        assert_eq!(s.samples, 60);
        assert!(s.all_passed(), "{s:?}");
        assert!(s.checked >= 55);
        assert_eq!(s, slice_trials(&l_shape(), 60, 11).unwrap());
    }

    #[test]
    fn crafted_touching_slice_is_skipped() {
        let o = classify_slice(&square(), &vec_i(&[1, 1]), &int(0)).unwrap();
        assert_eq!(o, SliceOutcome::Touching);
        let mut tally = SliceTrialSummary::default();
        tally.record(&vec_i(&[1, 1]), &int(0), &o);
        assert_eq!((tally.touching, tally.checked), (1, 0));
        assert_eq!(tally.rejection_rate(), 1.0);
    }
}
