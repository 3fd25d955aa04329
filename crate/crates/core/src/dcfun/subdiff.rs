use num_traits::{One, Signed, Zero};

use super::DCFunction;
use crate::error::{Error, Result};
use crate::polyhedra::{ConvexPolytope, Halfspace};
use crate::rational::{dot, solve, sub, to_f64, Rat};

/// Convex hull of finitely many rational vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdifferentialHull {
    generators: Vec<Vec<Rat>>,
}

impl SubdifferentialHull {
    pub fn new(mut generators: Vec<Vec<Rat>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Empty);
        }
        generators.sort();
        generators.dedup();
        Ok(SubdifferentialHull { generators })
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn is_singleton(&self) -> bool {
        self.generators.len() == 1
    }

    /// Exact squared distance from the origin to the hull.
    ///
    /// The nearest point lies in the relative interior of a face spanned by
    /// affinely independent generators, so it is the minimum over such
    /// subsets of the projection of the origin onto their affine hull,
    /// restricted to projections with nonnegative barycentric weights.
    pub fn distance_sq(&self) -> Rat {
        let g = &self.generators;
        let d = g[0].len();
        let mut best: Option<Rat> = None;
        let mut consider = |v: Rat| {
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        };
        let mut subset = Vec::new();
        let max_size = (d + 1).min(g.len());
        fn rec(g: &[Vec<Rat>], start: usize, max_size: usize, subset: &mut Vec<usize>, consider: &mut dyn FnMut(Rat)) {
            if !subset.is_empty() {
                if let Some(v) = projection_sq(g, subset) {
                    consider(v);
                }
            }
            if subset.len() == max_size {
                return;
            }
            for i in start..g.len() {
                subset.push(i);
                rec(g, i + 1, max_size, subset, consider);
                subset.pop();
            }
        }
        rec(g, 0, max_size, &mut subset, &mut consider);
        best.expect("singletons always qualify")
    }

    pub fn distance(&self) -> f64 {
        to_f64(&self.distance_sq()).sqrt()
    }

    pub fn contains_origin(&self) -> bool {
        self.distance_sq().is_zero()
    }
}

/// Squared norm of the projection of 0 onto aff(subset) when it has
/// nonnegative barycentric weights.
fn projection_sq(g: &[Vec<Rat>], subset: &[usize]) -> Option<Rat> {
    let k = subset.len();
    let p0 = &g[subset[0]];
    if k == 1 {
        return Some(dot(p0, p0));
    }
    let dirs: Vec<Vec<Rat>> = subset[1..].iter().map(|&i| sub(&g[i], p0)).collect();
    // weights w on dirs: (p0 + Σ w_j dir_j)·dir_i = 0
    let gram: Vec<Vec<Rat>> = dirs.iter().map(|a| dirs.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<Rat> = dirs.iter().map(|a| -dot(p0, a)).collect();
    let w = solve(&gram, &rhs)?;
    let w0 = Rat::one() - w.iter().sum::<Rat>();
    if w0.is_negative() || w.iter().any(Signed::is_negative) {
        return None;
    }
    let mut p = p0.clone();
    for (wj, dj) in w.iter().zip(&dirs) {
        for (pc, dc) in p.iter_mut().zip(dj) {
            *pc += wj * dc;
        }
    }
    Some(dot(&p, &p))
}

/// Clarke subdifferential of a piecewise-linear d.c. function: the hull of
/// the gradients of the full-dimensional linearity cells whose closure
/// contains `x`.
pub fn clarke_subdifferential(f: &DCFunction, x: &[Rat]) -> Result<SubdifferentialHull> {
    let d = f.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    let ag = f.plus.active(x);
    let ah = f.minus.active(x);
    let gp = f.plus.pieces();
    let hp = f.minus.pieces();
    let mut gens = Vec::new();
    for &i in &ag {
        for &j in &ah {
            // local cone where piece i of g and piece j of h stay maximal
            let mut cs = Vec::new();
            for &k in &ag {
                if k != i {
                    cs.push(Halfspace::new(sub(&gp[k].gradient, &gp[i].gradient), Rat::zero())?);
                }
            }
            for &l in &ah {
                if l != j {
                    cs.push(Halfspace::new(sub(&hp[l].gradient, &hp[j].gradient), Rat::zero())?);
                }
            }
            if ConvexPolytope::new(d, cs)?.has_interior() {
                gens.push(sub(&gp[i].gradient, &hp[j].gradient));
            }
        }
    }
    SubdifferentialHull::new(gens)
}
