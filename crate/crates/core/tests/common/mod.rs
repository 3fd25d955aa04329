//! Random scene corpora shared by the integration tests.
#![allow(dead_code)]

use curvkit::ncycle::{index, NormalQuery};
use curvkit::polyhedra::{ConvexPolytope, PolyUnion};
use curvkit::rational::{frac, int, rationalize, to_f64_vec, Rat};
use curvkit::rng::substream;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn boxes(rng: &mut ChaCha8Rng, d: usize, parts: usize, shift: &Rat) -> PolyUnion {
    let ps = (0..parts)
        .map(|_| {
            let lo: Vec<Rat> = (0..d).map(|_| int(rng.random_range(0..4)) + shift).collect();
            let hi: Vec<Rat> = lo.iter().map(|l| l + int(rng.random_range(1..=3))).collect();
            ConvexPolytope::cuboid(&lo, &hi).unwrap()
        })
        .collect();
    PolyUnion::new(ps).unwrap()
}

pub fn simplex(rng: &mut ChaCha8Rng, d: usize, shift: &Rat) -> ConvexPolytope {
    loop {
        let base: Vec<i64> = (0..d).map(|_| rng.random_range(0..4)).collect();
        let mut pts = vec![base.clone()];
        for _ in 0..d {
            pts.push(base.iter().map(|b| b + rng.random_range(-2..=2)).collect());
        }
        let pts: Vec<Vec<Rat>> = pts.iter().map(|p| p.iter().map(|&x| int(x) + shift).collect()).collect();
        if let Ok(p) = ConvexPolytope::from_points(&pts) {
            return p;
        }
    }
}

pub fn simplices(rng: &mut ChaCha8Rng, d: usize, parts: usize, shift: &Rat) -> PolyUnion {
    PolyUnion::new((0..parts).map(|_| simplex(rng, d, shift)).collect()).unwrap()
}

/// Box unions and simplicial unions in dimensions 2 and 3 with up to four parts.
pub fn corpus(seed: u64, size: usize) -> Vec<(String, PolyUnion)> {
    (0..size)
        .map(|i| {
            let mut rng = substream(seed, "corpus", i as u64);
            let d = 2 + i % 2;
            let parts = 1 + (i / 2) % 4;
            if (i / 8) % 2 == 0 {
                (format!("boxes#{i} d={d} parts={parts}"), boxes(&mut rng, d, parts, &int(0)))
            } else {
                (format!("simplices#{i} d={d} parts={parts}"), simplices(&mut rng, d, parts, &int(0)))
            }
        })
        .collect()
}

/// A Gaussian direction on a coarse dyadic grid.
pub fn direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..d).map(|_| rationalize(rng.sample(StandardNormal), 6)).collect();
        if v.iter().any(|x| *x != int(0)) {
            return v;
        }
    }
}

/// Vertices of the part intersections plus midpoints of random vertex pairs of a part.
pub fn query_points(u: &PolyUnion, rng: &mut ChaCha8Rng, extra: usize) -> Vec<Vec<Rat>> {
    let mut pts = u.nerve_vertices().unwrap();
    for _ in 0..extra {
        let p = u.parts().choose(rng).unwrap();
        let vs = p.vertices().unwrap();
        let a = vs.choose(rng).unwrap();
        let b = vs.choose(rng).unwrap();
        pts.push(a.iter().zip(b).map(|(x, y)| (x + y) * frac(1, 2)).collect());
    }
    pts
}

/// Non-degenerate queries on the given point set, one random direction each
/// (redrawn a few times when degenerate).
pub fn queries(u: &PolyUnion, pts: &[Vec<Rat>], rng: &mut ChaCha8Rng) -> Vec<NormalQuery> {
    let mut out = Vec::new();
    for x in pts {
        for _ in 0..4 {
            let q = NormalQuery::new(x.clone(), direction(rng, u.dim())).unwrap();
            if !index(u, &q).unwrap().degenerate {
                out.push(q);
                break;
            }
        }
    }
    out
}

pub fn describe(v: &[Rat]) -> String {
    format!("{:?}", to_f64_vec(v))
}
