//! Property tests for the structural identities the library relies on.

mod common;

use curvkit::approx::{det_identity_check, SquareMatrix};
use curvkit::curvature::{affine_pushforward, curvature_union};
use curvkit::ncycle::{
    additivity_check, bruteforce_scales, classify_slice, index, index_bruteforce, HalfspaceSampler, NormalQuery,
    SliceOutcome,
};
use curvkit::polyhedra::{ConvexPolytope, PolyUnion};
use curvkit::rational::{add, dot, frac, int, scale, Rat};
use curvkit::rng::substream;
use curvkit::Error;
use proptest::prelude::*;

fn int_matrix(n: usize) -> impl Strategy<Value = SquareMatrix<Rat>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, n), n).prop_map(|rows| {
        SquareMatrix::new(rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect()).unwrap()
    })
}

fn matrix_pair() -> impl Strategy<Value = (SquareMatrix<Rat>, SquareMatrix<Rat>)> {
    (1usize..=5).prop_flat_map(|n| (int_matrix(n), int_matrix(n)))
}

fn box_union(d: usize) -> impl Strategy<Value = PolyUnion> {
    box_union_of(d, 3)
}

fn box_union_of(d: usize, max_parts: usize) -> impl Strategy<Value = PolyUnion> {
    prop::collection::vec((prop::collection::vec(0i64..4, d), prop::collection::vec(1i64..4, d)), 1..=max_parts)
        .prop_map(|bs| {
            let parts = bs
                .into_iter()
                .map(|(lo, len)| {
                    let hi: Vec<Rat> = lo.iter().zip(&len).map(|(l, s)| int(l + s)).collect();
                    let lo: Vec<Rat> = lo.into_iter().map(int).collect();
                    ConvexPolytope::cuboid(&lo, &hi).unwrap()
                })
                .collect();
            PolyUnion::new(parts).unwrap()
        })
}

fn simplex_union() -> impl Strategy<Value = PolyUnion> {
    (any::<u64>(), 2usize..=3, 1usize..=3).prop_map(|(seed, d, parts)| {
        let mut rng = substream(seed, "prop-simplices", 0);
        common::simplices(&mut rng, d, parts, &int(0))
    })
}

/// Box or simplicial unions in dimension 2 or 3.
fn any_union() -> impl Strategy<Value = PolyUnion> {
    prop_oneof![box_union(2), box_union(3), simplex_union()]
}

fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..6, 1i64..4).prop_map(|(p, q)| frac(p, q))
}

fn diagonal(d: usize, s: &Rat) -> Vec<Vec<Rat>> {
    (0..d).map(|i| (0..d).map(|j| if i == j { s.clone() } else { int(0) }).collect()).collect()
}

/// Non-degenerate queries at the nerve vertices and a few midpoints.
fn queries_for(u: &PolyUnion, seed: u64) -> Vec<NormalQuery> {
    let mut rng = substream(seed, "prop-queries", 0);
    let pts = common::query_points(u, &mut rng, 3);
    common::queries(u, &pts, &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn determinant_difference_identity((a, b) in matrix_pair()) {
        let (lhs, rhs) = det_identity_check(&a, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn curvature_scales_homogeneously(u in any_union(), s in positive_rat(), shift in -3i64..3) {
        let d = u.dim();
        let c = curvature_union(&u).unwrap();
        let moved = affine_pushforward(&u, &diagonal(d, &s), &vec![int(shift); d]).unwrap();
        let cs = curvature_union(&moved).unwrap();
        match (c.exact_values(), cs.exact_values()) {
            (Some(e), Some(es)) => {
                for (k, (x, y)) in e.iter().zip(&es).enumerate() {
                    let mut want = x.clone();
                    for _ in 0..k {
                        want *= &s;
                    }
                    prop_assert_eq!(y, &want, "C_{}", k);
                }
            }
            _ => {
                let sf = curvkit::rational::to_f64(&s);
                for (k, (x, y)) in c.values().iter().zip(cs.values()).enumerate() {
                    let want = x * sf.powi(k as i32);
                    prop_assert!((y - want).abs() <= 1e-9 * (1.0 + want.abs()), "C_{}: {} vs {}", k, y, want);
                }
            }
        }
    }

    #[test]
    fn index_is_similarity_invariant(u in any_union(), seed in any::<u64>(), s in positive_rat(), r in positive_rat()) {
        let d = u.dim();
        let t: Vec<Rat> = (0..d).map(|i| frac(i as i64 - 1, 2)).collect();
        let moved = affine_pushforward(&u, &diagonal(d, &s), &t).unwrap();
        for q in queries_for(&u, seed) {
            let v = index(&u, &q).unwrap().value;
            let longer = NormalQuery::new(q.point.clone(), scale(&q.direction, &r)).unwrap();
            prop_assert_eq!(index(&u, &longer).unwrap().value, v);
            let image = NormalQuery::new(add(&scale(&q.point, &s), &t), q.direction.clone()).unwrap();
            prop_assert_eq!(index(&moved, &image).unwrap().value, v);
        }
    }

    #[test]
    fn convex_index_is_normal_cone_membership(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = substream(seed, "prop-convex", 0);
        let p = common::simplex(&mut rng, d, &int(0));
        let u = PolyUnion::single(p.clone()).unwrap();
        let vs = p.vertices().unwrap().to_vec();
        let mut pts = vs.clone();
        pts.push(vs.iter().skip(1).fold(vs[0].clone(), |a, b| add(&a, b)).iter().map(|x| x / int(vs.len() as i64)).collect());
        pts.push(vec![int(9); d]);
        for x in &pts {
            for _ in 0..6 {
                let n = common::direction(&mut rng, d);
                let top = vs.iter().map(|y| dot(&n, y)).max().unwrap();
                let member = p.contains(x) && dot(&n, x) == top;
                let q = NormalQuery::new(x.clone(), n).unwrap();
                prop_assert_eq!(index(&u, &q).unwrap().value, i64::from(member));
            }
        }
    }

    #[test]
    // Two parts each keep A ∩ B and A ∪ B within the inclusion-exclusion cap.
    fn index_is_additive(a in box_union_of(2, 2), b in box_union_of(2, 2), seed in any::<u64>()) {
        let both = a.union(&b).unwrap();
        for q in queries_for(&both, seed) {
            match additivity_check(&a, &b, &q) {
                Ok(r) => prop_assert!(r.holds, "{:?} at {}", r, common::describe(&q.point)),
                Err(Error::Degenerate(_)) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn slice_sums_equal_section_euler(u in any_union(), seed in any::<u64>()) {
        let sampler = HalfspaceSampler::new(&u).unwrap();
        let mut rng = substream(seed, "prop-slices", 0);
        for _ in 0..4 {
            let (v, t) = sampler.sample(&mut rng);
            if let SliceOutcome::Checked(r) = classify_slice(&u, &v, &t).unwrap() {
                prop_assert!(r.holds(), "sum {} vs euler {}", r.sum, r.euler);
            }
        }
    }

    #[test]
    fn index_agrees_with_direct_formula(u in simplex_union(), seed in any::<u64>()) {
        for q in queries_for(&u, seed) {
            let (r, delta) = bruteforce_scales(&u, &q).unwrap();
            prop_assert_eq!(index(&u, &q).unwrap().value, index_bruteforce(&u, &q, &r, &delta).unwrap());
        }
    }
}
