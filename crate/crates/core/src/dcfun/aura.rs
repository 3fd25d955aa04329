use num_traits::{One, Zero};

use super::regularity::{scan_slab, DEFAULT_ARRANGEMENT_CAP};
use super::{AffinePiece, DCFunction, MaxAffine};
use crate::error::{Error, Result};
use crate::polyhedra::lp;
use crate::polyhedra::{ConvexPolytope, PolyUnion};
use crate::rational::{dot, is_zero_vec, rationalize, sqrt_exact, to_f64, Rat};

/// `x -> max(0, f(x) - c)`, written as `max(g - c, h) - h`.
pub fn aura_from_sublevel(f: &DCFunction, c: &Rat) -> Result<DCFunction> {
    let plus = f.plus.shifted(&-c.clone()).max(&f.minus)?;
    DCFunction::new(plus, f.minus.clone())
}

/// Positive scale used to normalize a constraint row: the Euclidean norm
/// when it is rational, a close rational approximation otherwise.
fn row_scale(a: &[Rat]) -> Rat {
    let n2 = dot(a, a);
    sqrt_exact(&n2).unwrap_or_else(|| rationalize(to_f64(&n2).sqrt(), 40))
}

/// `x -> max(0, max_i (a_i·x - b_i) / |a_i|)`: a convex aura vanishing exactly on `P`.
pub fn polytope_aura(p: &ConvexPolytope) -> Result<DCFunction> {
    if !p.feasible() {
        return Err(Error::Empty);
    }
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    let d = p.dim();
    let mut pieces = vec![AffinePiece::new(vec![Rat::zero(); d], Rat::zero())];
    for h in p.constraints() {
        let s = row_scale(h.normal());
        pieces.push(AffinePiece::new(h.normal().iter().map(|v| v / &s).collect(), -(h.offset() / &s)));
    }
    Ok(DCFunction::convex(MaxAffine::new(pieces)?))
}

/// `x -> max(v·x - t, 0)`.
pub fn halfspace_aura(v: &[Rat], t: &Rat) -> Result<DCFunction> {
    if v.is_empty() || is_zero_vec(v) {
        return Err(Error::ZeroNormal);
    }
    let d = v.len();
    let g = MaxAffine::new(vec![
        AffinePiece::new(v.to_vec(), -t.clone()),
        AffinePiece::new(vec![Rat::zero(); d], Rat::zero()),
    ])?;
    Ok(DCFunction::convex(g))
}

/// `f + g`, an aura for the intersection of the zero sets.
pub fn combine_auras(f: &DCFunction, g: &DCFunction) -> Result<DCFunction> {
    f.add(g)
}

/// Squared lower bound on the subgradient norms of an aura where it is
/// positive; `None` when the aura vanishes identically.
pub fn nondegeneracy_sq(f: &DCFunction) -> Result<Option<Rat>> {
    Ok(scan_slab(f, &Rat::zero(), None, DEFAULT_ARRANGEMENT_CAP)?.min_distance_sq)
}

/// True iff some common point `x` admits `n ≠ 0` in the normal cone of `A`
/// and `-n` in the normal cone of `B` at `x`. Normal cones are taken over
/// the nonempty part intersections of each union.
pub fn touches(a: &PolyUnion, b: &PolyUnion) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    for ca in a.nerve()? {
        for cb in b.nerve()? {
            if convex_touch(&ca.polytope, &cb.polytope)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Two nonempty compact convex polytopes touch when they meet and can be
/// separated by a hyperplane: `h_P(n) + h_Q(-n) <= 0` for some `n ≠ 0`.
///
/// By LP duality this is the feasibility of `λ, μ >= 0` with
/// `A_P^T λ + A_Q^T μ = 0`, `b_P·λ + b_Q·μ <= 0` and `A_P^T λ ≠ 0`; the last
/// condition is split into `±(A_P^T λ)_j >= 1` over coordinates.
pub(crate) fn convex_touch(p: &ConvexPolytope, q: &ConvexPolytope) -> Result<bool> {
    if !p.intersect(q)?.feasible() {
        return Ok(false);
    }
    let d = p.dim();
    let (ap, bp) = p.matrix();
    let (aq, bq) = q.matrix();
    let nv = ap.len() + aq.len();
    let col = |k: usize, j: usize| -> Rat {
        if k < ap.len() {
            ap[k][j].clone()
        } else {
            aq[k - ap.len()][j].clone()
        }
    };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for k in 0..nv {
        let mut r = vec![Rat::zero(); nv];
        r[k] = -Rat::one();
        rows.push(r);
        rhs.push(Rat::zero());
    }
    for j in 0..d {
        let r: Vec<Rat> = (0..nv).map(|k| col(k, j)).collect();
        rows.push(r.iter().map(|v| -v).collect());
        rhs.push(Rat::zero());
        rows.push(r);
        rhs.push(Rat::zero());
    }
    rows.push(bp.iter().chain(&bq).cloned().collect());
    rhs.push(Rat::zero());
    for j in 0..d {
        for s in [1i64, -1] {
            let sign = Rat::from_integer(s.into());
            let mut r = rows.clone();
            let mut b = rhs.clone();
            // -s (A_P^T λ)_j <= -1
            r.push((0..nv).map(|k| if k < ap.len() { -(&sign * col(k, j)) } else { Rat::zero() }).collect());
            b.push(-Rat::one());
            if lp::feasible(&r, &b) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
