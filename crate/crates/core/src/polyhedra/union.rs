use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::polytope::{ConvexPolytope, Halfspace};
use crate::error::{Error, Result};
use crate::rational::{dot, Rat};

/// Default cap on the number of parts entering inclusion-exclusion.
pub const DEFAULT_IE_CAP: usize = 8;

/// Inclusion-exclusion cap, overridable through `CURVKIT_IE_CAP`.
pub fn ie_cap() -> usize {
    std::env::var("CURVKIT_IE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &usize| c > 0)
        .unwrap_or(DEFAULT_IE_CAP)
}

/// A nonempty intersection `∩_{i∈S} P_i` of parts.
#[derive(Clone, Debug)]
pub struct NerveCell {
    pub subset: Vec<usize>,
    pub polytope: ConvexPolytope,
}

impl NerveCell {
    /// `(-1)^{|S|+1}`.
    pub fn sign(&self) -> i64 {
        if self.subset.len() % 2 == 1 {
            1
        } else {
            -1
        }
    }
}

/// Enumerates the nerve of a family of convex sets: every subset with a
/// nonempty common intersection. Supersets of empty intersections are pruned.
pub fn nerve(parts: &[ConvexPolytope]) -> Result<Vec<NerveCell>> {
    let cap = ie_cap();
    if parts.len() > cap {
        return Err(Error::TooManyParts { parts: parts.len(), cap });
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, ConvexPolytope)> = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if p.feasible() {
            stack.push((vec![i], p.clone()));
        }
    }
    while let Some((s, p)) = stack.pop() {
        let last = *s.last().unwrap();
        for (j, q) in parts.iter().enumerate().skip(last + 1) {
            let r = p.intersect(q)?;
            if r.feasible() {
                let mut t = s.clone();
                t.push(j);
                stack.push((t, r));
            }
        }
        out.push(NerveCell { subset: s, polytope: p });
    }
    out.sort_by(|a, b| a.subset.len().cmp(&b.subset.len()).then_with(|| a.subset.cmp(&b.subset)));
    Ok(out)
}

/// χ of a union of closed convex sets by nerve inclusion-exclusion.
pub fn nerve_euler(parts: &[ConvexPolytope]) -> Result<i64> {
    Ok(nerve(parts)?.iter().map(NerveCell::sign).sum())
}

/// A finite union of compact convex polytopes in `R^d`.
#[derive(Clone, Debug)]
pub struct PolyUnion {
    dim: usize,
    parts: Vec<ConvexPolytope>,
    nerve: OnceLock<std::result::Result<Vec<NerveCell>, Error>>,
}

impl PolyUnion {
    pub fn new(parts: Vec<ConvexPolytope>) -> Result<Self> {
        let first = parts.first().ok_or(Error::Empty)?;
        let dim = first.dim();
        for p in &parts {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
            if !p.is_bounded() {
                return Err(Error::Unbounded);
            }
        }
        Ok(PolyUnion { dim, parts, nerve: OnceLock::new() })
    }

    pub fn single(p: ConvexPolytope) -> Result<Self> {
        PolyUnion::new(vec![p])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[ConvexPolytope] {
        &self.parts
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| !p.feasible())
    }

    /// Nonempty intersections of parts (cached).
    pub fn nerve(&self) -> Result<&[NerveCell]> {
        match self.nerve.get_or_init(|| nerve(&self.parts)) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// Union of the parts of both (concatenation).
    pub fn union(&self, other: &PolyUnion) -> Result<PolyUnion> {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        PolyUnion::new(parts)
    }

    /// Intersection as the union of pairwise part intersections.
    pub fn intersection(&self, other: &PolyUnion) -> Result<PolyUnion> {
        let mut parts = Vec::new();
        for p in &self.parts {
            for q in &other.parts {
                parts.push(p.intersect(q)?);
            }
        }
        PolyUnion::new(parts)
    }

    pub fn clip(&self, h: &Halfspace) -> Result<PolyUnion> {
        PolyUnion::new(self.parts.iter().map(|p| p.with(h.clone())).collect::<Result<_>>()?)
    }

    /// All vertices of all nonempty part intersections, deduplicated and sorted.
    pub fn nerve_vertices(&self) -> Result<Vec<Vec<Rat>>> {
        let mut out: Vec<Vec<Rat>> = Vec::new();
        for c in self.nerve()? {
            out.extend(c.polytope.vertices()?.iter().cloned());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Image under an invertible affine map `x -> m x + t`.
    pub fn affine_image(&self, m: &[Vec<Rat>], t: &[Rat]) -> Result<PolyUnion> {
        if m.len() != self.dim || t.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.len() });
        }
        PolyUnion::new(self.parts.iter().map(|p| p.affine_image(m, t)).collect::<Result<_>>()?)
    }
}

/// Euler characteristic of a union of compact convex polytopes.
pub fn euler(u: &PolyUnion) -> Result<i64> {
    Ok(u.nerve()?.iter().map(NerveCell::sign).sum())
}

/// `χ(U ∩ H)`.
pub fn euler_with_halfspace(u: &PolyUnion, h: &Halfspace) -> Result<i64> {
    if h.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: h.dim() });
    }
    let mut total = 0;
    for c in u.nerve()? {
        if c.polytope.with(h.clone())?.feasible() {
            total += c.sign();
        }
    }
    Ok(total)
}

/// A finite union of closed convex cones sharing an apex. Parts are stored
/// in apex-relative coordinates as homogeneous constraints `a·u <= 0`.
#[derive(Clone, Debug)]
pub struct PolyCone {
    apex: Vec<Rat>,
    parts: Vec<ConvexPolytope>,
}

impl PolyCone {
    pub fn apex(&self) -> &[Rat] {
        &self.apex
    }

    /// Cone parts in apex-relative coordinates.
    pub fn parts(&self) -> &[ConvexPolytope] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.apex.len()
    }

    /// Membership of an apex-relative direction.
    pub fn contains_direction(&self, u: &[Rat]) -> bool {
        self.parts.iter().any(|p| p.contains(u))
    }

    /// `χ(C ∩ {u : n·u >= level})` with `C` in apex-relative coordinates.
    pub fn euler_above(&self, n: &[Rat], level: &Rat) -> Result<i64> {
        let h = Halfspace::new(n.iter().map(|x| -x).collect(), -level.clone())?;
        let cut: Vec<ConvexPolytope> = self.parts.iter().map(|p| p.with(h.clone())).collect::<Result<_>>()?;
        nerve_euler(&cut)
    }
}

/// Tangent cone of `U` at `x`: the union over parts containing `x` of their
/// active constraints, homogenized.
pub fn tangent_cone(u: &PolyUnion, x: &[Rat]) -> Result<PolyCone> {
    if x.len() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: x.len() });
    }
    let mut parts = Vec::new();
    for p in u.parts() {
        if !p.contains(x) {
            continue;
        }
        let active: Vec<Halfspace> = p
            .constraints()
            .iter()
            .filter(|h| h.is_tight(x))
            .map(|h| Halfspace::new(h.normal().to_vec(), Rat::zero()))
            .collect::<Result<_>>()?;
        parts.push(ConvexPolytope::new(u.dim(), active)?);
    }
    if parts.is_empty() {
        return Err(Error::NotInSet);
    }
    Ok(PolyCone { apex: x.to_vec(), parts })
}

/// Axis-aligned box `x + [-r, r]^d`.
pub fn box_around(x: &[Rat], r: &Rat) -> ConvexPolytope {
    let lo: Vec<Rat> = x.iter().map(|v| v - r).collect();
    let hi: Vec<Rat> = x.iter().map(|v| v + r).collect();
    ConvexPolytope::cuboid(&lo, &hi).expect("box")
}

/// Apex-relative cone scaled into the box `apex + [-r, r]^d`.
pub fn cone_in_box(c: &PolyCone, r: &Rat) -> Result<Vec<ConvexPolytope>> {
    c.parts
        .iter()
        .map(|p| {
            let shifted: Vec<Halfspace> = p
                .constraints()
                .iter()
                .map(|h| Halfspace::new(h.normal().to_vec(), dot(h.normal(), &c.apex)))
                .collect::<Result<_>>()?;
            ConvexPolytope::new(c.dim(), shifted)?.intersect(&box_around(&c.apex, r))
        })
        .collect()
}

impl PolyUnion {
    /// Minimum and maximum of `v·x` over the union, `None` when empty.
    pub fn support_range(&self, v: &[Rat]) -> Result<Option<(Rat, Rat)>> {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for p in &self.parts {
            if !p.feasible() {
                continue;
            }
            for x in p.vertices()? {
                let s = dot(v, x);
                if lo.as_ref().is_none_or(|l| &s < l) {
                    lo = Some(s.clone());
                }
                if hi.as_ref().is_none_or(|h| &s > h) {
                    hi = Some(s);
                }
            }
        }
        Ok(lo.zip(hi))
    }

    /// Bounding box of the union.
    pub fn bounding_box(&self) -> Result<Option<(Vec<Rat>, Vec<Rat>)>> {
        let d = self.dim;
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            match self.support_range(&e)? {
                Some((l, h)) => {
                    lo.push(l);
                    hi.push(h);
                }
                None => return Ok(None),
            }
        }
        Ok(Some((lo, hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vec_i};

    fn rect(x0: i64, y0: i64, x1: i64, y1: i64) -> ConvexPolytope {
        ConvexPolytope::cuboid(&vec_i(&[x0, y0]), &vec_i(&[x1, y1])).unwrap()
    }

    fn l_shape() -> PolyUnion {
        PolyUnion::new(vec![rect(0, 0, 2, 1), rect(0, 0, 1, 2)]).unwrap()
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler(&PolyUnion::single(rect(0, 0, 1, 1)).unwrap()).unwrap(), 1);
        let two = PolyUnion::new(vec![rect(0, 0, 1, 1), rect(3, 0, 4, 1)]).unwrap();
        assert_eq!(euler(&two).unwrap(), 2);
        assert_eq!(euler(&l_shape()).unwrap(), 1);
        // an annulus made of four bars
        let ring =
            PolyUnion::new(vec![rect(0, 0, 3, 1), rect(0, 2, 3, 3), rect(0, 0, 1, 3), rect(2, 0, 3, 3)]).unwrap();
        assert_eq!(euler(&ring).unwrap(), 0);
    }

    #[test]
    fn euler_with_halfspace_examples() {
        let sq = PolyUnion::single(rect(0, 0, 1, 1)).unwrap();
        let h = Halfspace::new(vec_i(&[0, 1]), frac(1, 2)).unwrap();
        assert_eq!(euler_with_halfspace(&sq, &h).unwrap(), 1);
        let two = PolyUnion::new(vec![rect(0, 0, 1, 1), rect(3, 0, 4, 1)]).unwrap();
        let h = Halfspace::new(vec_i(&[1, 0]), int(2)).unwrap();
        assert_eq!(euler_with_halfspace(&two, &h).unwrap(), 1);
        let h = Halfspace::new(vec_i(&[1, 1]), int(5)).unwrap();
        assert_eq!(euler_with_halfspace(&l_shape(), &h).unwrap(), 1);
    }

    #[test]
    fn tangent_cone_examples() {
        let sq = PolyUnion::single(rect(0, 0, 1, 1)).unwrap();
        let c = tangent_cone(&sq, &[frac(1, 2), frac(1, 2)]).unwrap();
        assert!(c.parts()[0].constraints().is_empty());
        let c = tangent_cone(&sq, &vec_i(&[0, 0])).unwrap();
        assert!(c.contains_direction(&vec_i(&[1, 1])));
        assert!(!c.contains_direction(&vec_i(&[-1, 1])));
        let c = tangent_cone(&l_shape(), &vec_i(&[1, 1])).unwrap();
        for (u, inside) in [([1, 1], false), ([-1, 1], true), ([1, -1], true), ([-1, -1], true)] {
            assert_eq!(c.contains_direction(&vec_i(&u)), inside, "{u:?}");
        }
        assert_eq!(tangent_cone(&sq, &vec_i(&[2, 2])).unwrap_err(), Error::NotInSet);
    }

    #[test]
    fn cap_is_enforced() {
        let parts: Vec<ConvexPolytope> = (0..9).map(|i| rect(3 * i, 0, 3 * i + 1, 1)).collect();
        let u = PolyUnion::new(parts).unwrap();
        assert!(matches!(euler(&u), Err(Error::TooManyParts { .. })));
    }

    #[test]
    fn unbounded_parts_rejected() {
        let half = ConvexPolytope::new(2, vec![Halfspace::new(vec_i(&[1, 0]), int(0)).unwrap()]).unwrap();
        assert_eq!(PolyUnion::single(half).unwrap_err(), Error::Unbounded);
    }
}
