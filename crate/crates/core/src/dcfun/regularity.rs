use num_traits::{One, Signed, Zero};

use super::subdiff::{clarke_subdifferential, SubdifferentialHull};
use super::DCFunction;
use crate::error::{Error, Result};
use crate::polyhedra::lp::{self, LpOutcome};
use crate::polyhedra::{ConvexPolytope, Halfspace};
use crate::rational::{sub, Rat};

pub const DEFAULT_ARRANGEMENT_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Regular,
    /// A point with `c < f(x) < c + ε` whose subdifferential comes closer than `ε` to 0.
    Point {
        x: Vec<Rat>,
        min_norm_sq: Rat,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityCertificate {
    pub value: Rat,
    pub epsilon: Rat,
    pub witness: Witness,
    /// Smallest squared hull distance over the cells meeting the slab
    /// (`None` when the slab is empty).
    pub min_distance_sq: Option<Rat>,
}

impl RegularityCertificate {
    pub fn is_regular(&self) -> bool {
        matches!(self.witness, Witness::Regular)
    }
}

/// A full-dimensional linearity cell of `f`.
pub(super) struct Cell {
    pub constraints: Vec<Halfspace>,
    pub gradient: Vec<Rat>,
    pub offset: Rat,
}

pub(super) fn full_cells(f: &DCFunction, cap: usize) -> Result<Vec<Cell>> {
    let d = f.dim();
    let gp = f.plus.pieces();
    let hp = f.minus.pieces();
    let count = gp.len() * hp.len();
    if count > cap {
        return Err(Error::ArrangementTooLarge { cells: count, cap });
    }
    let mut out = Vec::new();
    for (i, gi) in gp.iter().enumerate() {
        for (j, hj) in hp.iter().enumerate() {
            let mut cs = Vec::new();
            for (k, gk) in gp.iter().enumerate() {
                if k != i {
                    cs.push(Halfspace::new(sub(&gk.gradient, &gi.gradient), &gi.offset - &gk.offset)?);
                }
            }
            for (l, hl) in hp.iter().enumerate() {
                if l != j {
                    cs.push(Halfspace::new(sub(&hl.gradient, &hj.gradient), &hj.offset - &hl.offset)?);
                }
            }
            if ConvexPolytope::new(d, cs.clone())?.has_interior() {
                out.push(Cell {
                    constraints: cs,
                    gradient: sub(&gi.gradient, &hj.gradient),
                    offset: &gi.offset - &hj.offset,
                });
            }
        }
    }
    Ok(out)
}

/// Result of scanning the cell arrangement over the slab `lo < f < hi`.
pub(super) struct SlabScan {
    pub min_distance_sq: Option<Rat>,
    pub argmin: Option<Vec<Rat>>,
}

/// Minimum over groups of cells with a common point in the open slab of the
/// squared distance from 0 to the hull of their gradients.
pub(super) fn scan_slab(f: &DCFunction, lo: &Rat, hi: Option<&Rat>, cap: usize) -> Result<SlabScan> {
    let d = f.dim();
    let cells = full_cells(f, cap)?;
    let mut best = SlabScan { min_distance_sq: None, argmin: None };
    let mut chosen: Vec<usize> = Vec::new();
    dfs(&cells, d, lo, hi, 0, &mut chosen, &mut best)?;
    Ok(best)
}

fn dfs(
    cells: &[Cell],
    d: usize,
    lo: &Rat,
    hi: Option<&Rat>,
    start: usize,
    chosen: &mut Vec<usize>,
    best: &mut SlabScan,
) -> Result<()> {
    for i in start..cells.len() {
        chosen.push(i);
        if let Some(x) = slab_point(cells, chosen, d, lo, hi) {
            let hull = SubdifferentialHull::new(chosen.iter().map(|&c| cells[c].gradient.clone()).collect())?;
            let dist = hull.distance_sq();
            if best.min_distance_sq.as_ref().is_none_or(|b| &dist < b) {
                best.min_distance_sq = Some(dist);
                best.argmin = Some(x);
            }
            dfs(cells, d, lo, hi, i + 1, chosen, best)?;
        }
        chosen.pop();
    }
    Ok(())
}

/// A point of `∩ cells ∩ {lo < f < hi}`, found by maximizing the slack `s`.
fn slab_point(cells: &[Cell], chosen: &[usize], d: usize, lo: &Rat, hi: Option<&Rat>) -> Option<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = Vec::new();
    let mut b: Vec<Rat> = Vec::new();
    let pad = |v: &[Rat], s: Rat| -> Vec<Rat> {
        let mut r = v.to_vec();
        r.push(s);
        r
    };
    for &c in chosen {
        for h in &cells[c].constraints {
            a.push(pad(h.normal(), Rat::zero()));
            b.push(h.offset().clone());
        }
    }
    let cell = &cells[chosen[0]];
    // f(y) - s >= lo
    a.push(pad(&cell.gradient.iter().map(|v| -v).collect::<Vec<_>>(), Rat::one()));
    b.push(&cell.offset - lo);
    if let Some(hi) = hi {
        // f(y) + s <= hi
        a.push(pad(&cell.gradient, Rat::one()));
        b.push(hi - &cell.offset);
    }
    let mut cap = vec![Rat::zero(); d];
    cap.push(Rat::one());
    a.push(cap.clone());
    b.push(Rat::one());
    match lp::maximize(&a, &b, &cap) {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.pop();
            Some(point)
        }
        _ => None,
    }
}

/// Decides whether `c` is a weakly regular value of `f` with margin `ε`:
/// every `x` with `c < f(x) < c + ε` has all Clarke subgradients of norm `>= ε`.
pub fn is_weakly_regular(f: &DCFunction, c: &Rat, epsilon: &Rat) -> Result<RegularityCertificate> {
    is_weakly_regular_capped(f, c, epsilon, DEFAULT_ARRANGEMENT_CAP)
}

pub fn is_weakly_regular_capped(f: &DCFunction, c: &Rat, epsilon: &Rat, cap: usize) -> Result<RegularityCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let hi = c + epsilon;
    let scan = scan_slab(f, c, Some(&hi), cap)?;
    let eps_sq = epsilon * epsilon;
    let witness = match (&scan.min_distance_sq, scan.argmin) {
        (Some(dist), Some(x)) if dist < &eps_sq => {
            let min_norm_sq = clarke_subdifferential(f, &x)?.distance_sq();
            debug_assert!(min_norm_sq <= *dist);
            Witness::Point { x, min_norm_sq }
        }
        _ => Witness::Regular,
    };
    Ok(RegularityCertificate {
        value: c.clone(),
        epsilon: epsilon.clone(),
        witness,
        min_distance_sq: scan.min_distance_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcfun::{abs_coordinate, eval, polytope_aura, AffinePiece, MaxAffine};
    use crate::rational::{frac, int, vec_i};

    #[test]
    fn square_aura_is_regular_at_zero() {
        let f = polytope_aura(&ConvexPolytope::unit_cube(2)).unwrap();
        let cert = is_weakly_regular(&f, &int(0), &frac(1, 2)).unwrap();
        assert!(cert.is_regular());
        assert_eq!(cert.min_distance_sq, Some(frac(1, 2)));
    }

    #[test]
    fn constant_function_is_vacuously_regular() {
        let f = DCFunction::zero(2);
        let cert = is_weakly_regular(&f, &int(0), &int(1)).unwrap();
        assert!(cert.is_regular());
        assert_eq!(cert.min_distance_sq, None);
    }

    #[test]
    fn abs_difference_is_regular_at_zero() {
        // subgradients in 0 < |x| - |y| < ε keep distance 1 from the origin
        let f = DCFunction::new(abs_coordinate(2, 0), abs_coordinate(2, 1)).unwrap();
        let cert = is_weakly_regular(&f, &int(0), &frac(1, 4)).unwrap();
        assert!(cert.is_regular());
        assert_eq!(cert.min_distance_sq, Some(int(1)));
    }

    #[test]
    fn critical_level_is_refuted() {
        // f = max(x, 1) is flat at level 1 for x < 1
        let g =
            MaxAffine::new(vec![AffinePiece::new(vec_i(&[1]), int(0)), AffinePiece::new(vec_i(&[0]), int(1))]).unwrap();
        let f = DCFunction::convex(g);
        let cert = is_weakly_regular(&f, &frac(1, 2), &int(1)).unwrap();
        match cert.witness {
            Witness::Point { x, min_norm_sq } => {
                let v = eval(&f, &x).unwrap();
                assert!(v > frac(1, 2) && v < frac(3, 2));
                assert_eq!(min_norm_sq, int(0));
            }
            Witness::Regular => panic!("expected refutation"),
        }
    }

    #[test]
    fn arrangement_cap() {
        let f = DCFunction::new(abs_coordinate(2, 0), abs_coordinate(2, 1)).unwrap();
        assert!(matches!(is_weakly_regular_capped(&f, &int(0), &int(1), 3), Err(Error::ArrangementTooLarge { .. })));
    }
}
