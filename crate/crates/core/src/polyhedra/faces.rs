//! Face lattice of a bounded polytope from its vertex/constraint incidences,
//! and exact k-volumes via pulling triangulations.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use super::polytope::{affine_rank, ConvexPolytope};
use crate::error::Result;
use crate::rational::{det, row_echelon, sqrt_exact, sub, to_f64, Rat};

#[derive(Clone, Debug)]
pub struct Face {
    /// Indices into the lattice's vertex list, sorted.
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// Constraints tight on the whole face.
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub vertices: Vec<Vec<Rat>>,
    /// All nonempty faces, the polytope itself included, sorted by dimension.
    pub faces: Vec<Face>,
    pub dim: usize,
}

impl FaceLattice {
    pub fn of(p: &ConvexPolytope) -> Result<Self> {
        let vertices = p.vertices()?.to_vec();
        let cs = p.constraints();
        let mut tight_sets: Vec<Vec<usize>> = vec![Vec::new(); cs.len()];
        for (v, tight) in p.vertex_incidence()?.iter().enumerate() {
            for &i in tight {
                tight_sets[i].push(v);
            }
        }

        let all: Vec<usize> = (0..vertices.len()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = vec![all.clone()];
        seen.insert(all);
        let mut sets = Vec::new();
        while let Some(f) = queue.pop() {
            for t in &tight_sets {
                let g: Vec<usize> = f.iter().copied().filter(|v| t.binary_search(v).is_ok()).collect();
                if !g.is_empty() && g.len() < f.len() && seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
            sets.push(f);
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|vs| {
                let pts: Vec<Vec<Rat>> = vs.iter().map(|&i| vertices[i].clone()).collect();
                let dim = affine_rank(&pts);
                let tight =
                    (0..cs.len()).filter(|&i| vs.iter().all(|v| tight_sets[i].binary_search(v).is_ok())).collect();
                Face { vertices: vs, dim, tight }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        let dim = faces.last().map(|f| f.dim).unwrap_or(0);
        Ok(FaceLattice { vertices, faces, dim })
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    pub fn points(&self, f: &Face) -> Vec<Vec<Rat>> {
        f.vertices.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Faces of dimension `dim(f) - 1` contained in `f`.
    pub fn facets_of<'a>(&'a self, f: &'a Face) -> impl Iterator<Item = &'a Face> + 'a {
        self.faces
            .iter()
            .filter(move |g| g.dim + 1 == f.dim && g.vertices.iter().all(|v| f.vertices.binary_search(v).is_ok()))
    }

    /// Faces of dimension `dim(P) - 1` of the top face containing `f`.
    pub fn facets_containing<'a>(&'a self, f: &'a Face) -> impl Iterator<Item = &'a Face> + 'a {
        self.faces
            .iter()
            .filter(move |g| g.dim + 1 == self.dim && f.vertices.iter().all(|v| g.vertices.binary_search(v).is_ok()))
    }

    /// Simplices (as vertex-index lists) of a pulling triangulation of `f`.
    pub fn triangulate(&self, f: &Face) -> Vec<Vec<usize>> {
        if f.dim == 0 {
            return vec![vec![f.vertices[0]]];
        }
        let apex = f.vertices[0];
        let mut out = Vec::new();
        for g in self.facets_of(f) {
            if g.vertices.binary_search(&apex).is_ok() {
                continue;
            }
            for mut s in self.triangulate(g) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }

    /// k-dimensional volume of a face.
    pub fn volume(&self, f: &Face) -> Volume {
        if f.dim == 0 {
            return Volume::exact(Rat::from_integer(1.into()));
        }
        let pts = self.points(f);
        if f.dim == 1 {
            let e = sub(&pts[1], &pts[0]);
            let n2: Rat = e.iter().map(|x| x * x).sum();
            return match sqrt_exact(&n2) {
                Some(r) => Volume::exact(r),
                None => Volume { value: to_f64(&n2).sqrt(), exact: None },
            };
        }
        let simplices = self.triangulate(f);
        simplex_sum_volume(&pts_from(&self.vertices, &simplices), &pts, f.dim)
    }
}

fn pts_from(vertices: &[Vec<Rat>], simplices: &[Vec<usize>]) -> Vec<Vec<Vec<Rat>>> {
    simplices.iter().map(|s| s.iter().map(|&i| vertices[i].clone()).collect()).collect()
}

/// A volume that is exact when the affine hull carries a rational metric factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Volume {
    pub value: f64,
    pub exact: Option<Rat>,
}

impl Volume {
    pub fn exact(v: Rat) -> Self {
        Volume { value: to_f64(&v), exact: Some(v) }
    }

    pub fn zero() -> Self {
        Volume::exact(Rat::zero())
    }
}

/// Total k-volume of simplices lying in the affine hull of `hull_pts` (dimension k).
fn simplex_sum_volume(simplices: &[Vec<Vec<Rat>>], hull_pts: &[Vec<Rat>], k: usize) -> Volume {
    let d = hull_pts[0].len();
    let diffs: Vec<Vec<Rat>> = hull_pts[1..].iter().map(|p| sub(p, &hull_pts[0])).collect();
    let basis = row_echelon(&diffs);
    debug_assert_eq!(basis.len(), k);
    // reduced echelon rows carry an identity block on the pivot columns
    let pivots: Vec<usize> = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
    let mut proj = Rat::zero();
    let mut fact = Rat::from_integer(1.into());
    for i in 2..=k {
        fact *= Rat::from_integer(i.into());
    }
    for s in simplices {
        let m: Vec<Vec<Rat>> = s[1..].iter().map(|p| pivots.iter().map(|&c| &p[c] - &s[0][c]).collect()).collect();
        proj += det(&m).abs();
    }
    proj /= fact;
    if k == d {
        return Volume::exact(proj);
    }
    // metric factor: Gram determinant of the basis with unit pivot coordinates
    let gram: Vec<Vec<Rat>> =
        (0..k).map(|i| (0..k).map(|j| (0..d).map(|c| &basis[i][c] * &basis[j][c]).sum()).collect()).collect();
    let g = det(&gram);
    match sqrt_exact(&g) {
        Some(r) => Volume::exact(proj * r),
        None => Volume { value: to_f64(&proj) * to_f64(&g).sqrt(), exact: None },
    }
}
