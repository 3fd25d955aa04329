//! Double description method for pointed polyhedral cones.
//!
//! A bounded polytope `{x : A x <= b}` is homogenized to the cone
//! `{(x, l) : A x - b l <= 0, l >= 0}`; its extreme rays with `l > 0` are the
//! vertices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::polytope::invert;
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitSet(Vec<u64>);

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    pub fn and(&self, o: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    pub fn is_superset(&self, o: &BitSet) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: BitSet,
}

/// Scales a rational vector to a primitive integer vector with the same direction.
fn primitive(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    reduce(ints)
}

fn reduce(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of the pointed cone `{y : rows·y <= 0}`.
///
/// Returns `None` when the rows do not span the space (the cone has a
/// nontrivial lineality space).
pub fn extreme_rays(rows: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    Some(extreme_rays_with_incidence(rows)?.into_iter().map(|(v, _)| v).collect())
}

/// Extreme rays as primitive integer vectors, each with the sorted indices
/// of the rows vanishing on it.
pub fn extreme_rays_with_incidence(rows: &[Vec<Rat>]) -> Option<Vec<(Vec<Rat>, Vec<usize>)>> {
    let dim = rows.first()?.len();
    let m = rows.len();

    // greedy choice of `dim` independent rows for the initial simplicial cone
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
    // reduced copies of the chosen rows, keyed by pivot column
    let mut reduced: Vec<(usize, Vec<Rat>)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (c, e) in &reduced {
            if !v[*c].is_zero() {
                let f = v[*c].clone();
                v.iter_mut().zip(e).for_each(|(x, y)| *x -= &f * y);
            }
        }
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let piv = v[c].clone();
        v.iter_mut().for_each(|x| *x /= &piv);
        reduced.push((c, v));
        basis_rows.push(r.clone());
        chosen.push(i);
        if chosen.len() == dim {
            break;
        }
    }
    if chosen.len() < dim {
        return None;
    }

    let irows: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive(r)).collect();
    // ray j is minus the j-th column of the inverse of the chosen rows
    let inv = invert(&basis_rows).expect("independent rows");
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for j in 0..dim {
        let v: Vec<Rat> = inv.iter().map(|r| -r[j].clone()).collect();
        let mut zeros = BitSet::new(m);
        for (k, &ci) in chosen.iter().enumerate() {
            if k != j {
                zeros.insert(ci);
            }
        }
        rays.push(Ray { v: primitive(&v), zeros });
    }

    let mut in_initial = vec![false; m];
    for &c in &chosen {
        in_initial[c] = true;
    }

    for (h, row) in irows.iter().enumerate() {
        if in_initial[h] {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        if pos.is_empty() {
            for (r, s) in rays.iter_mut().zip(&vals) {
                if s.is_zero() {
                    r.zeros.insert(h);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.len() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| r == p || r == n || !rays[r].zeros.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let sp = &vals[p];
                let sn = &vals[n];
                let v: Vec<BigInt> = rays[n].v.iter().zip(&rays[p].v).map(|(nv, pv)| sp * nv - sn * pv).collect();
                let mut zeros = common;
                zeros.insert(h);
                fresh.push(Ray { v: reduce(v), zeros });
            }
        }

        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, s) in rays.into_iter().zip(vals) {
            if s.is_positive() {
                continue;
            }
            if s.is_zero() {
                r.zeros.insert(h);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
        if rays.is_empty() {
            break;
        }
    }
    Some(
        rays.into_iter()
            .map(|r| {
                let zeros = (0..m).filter(|&i| r.zeros.contains(i)).collect();
                (r.v.into_iter().map(Rat::from_integer).collect(), zeros)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::vec_i;

    #[test]
    fn orthant_rays() {
        let rows = vec![vec_i(&[-1, 0, 0]), vec_i(&[0, -1, 0]), vec_i(&[0, 0, -1])];
        let mut rays = extreme_rays(&rows).unwrap();
        rays.sort();
        assert_eq!(rays, vec![vec_i(&[0, 0, 1]), vec_i(&[0, 1, 0]), vec_i(&[1, 0, 0])]);
    }

    #[test]
    fn lineality_is_reported() {
        let rows = vec![vec_i(&[1, 0])];
        assert!(extreme_rays(&rows).is_none());
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square [-1,1]^2 at height 1: |x| <= z, |y| <= z
        let rows = vec![vec_i(&[1, 0, -1]), vec_i(&[-1, 0, -1]), vec_i(&[0, 1, -1]), vec_i(&[0, -1, -1])];
        let rays = extreme_rays(&rows).unwrap();
        assert_eq!(rays.len(), 4);
    }
}
