//! Acceptance suite: every criterion runs at its stated tolerance and budget
//! and prints one PASS/FAIL line. Exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use curvkit::approx::{
    approximability_ladder, det_identity_trials, minor_integrals, mollify, BoxRegion, DEFAULT_EPS_LADDER, DEFAULT_GRID,
};
use curvkit::crofton::{beta, crofton_estimate, decomposition_check, CroftonConfig};
use curvkit::curvature::{affine_pushforward, curvature_union, CurvatureVector};
use curvkit::dcfun::{abs_coordinate, touches, DCFunction};
use curvkit::ncycle::{
    additivity_check, bruteforce_scales, index, index_bruteforce, slice_trials, touching_halfspace, HalfspaceSampler,
};
use curvkit::polyhedra::{euler, ConvexPolytope, PolyUnion};
use curvkit::rational::{frac, int, Rat};
use curvkit::rng::substream;
use curvkit::Error;
use rand::Rng;

const SEED: u64 = 20_240_611;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

/// Runs one criterion; a stated runtime budget is part of the verdict.
fn criterion(id: &str, title: &str, budget: Option<Duration>, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    let in_time = budget.is_none_or(|b| took <= b);
    let pass = v.pass && in_time;
    let timing = match budget {
        Some(b) if !in_time => format!("{:.1} s, over the {} s budget", took.as_secs_f64(), b.as_secs()),
        Some(b) => format!("{:.1} s of {} s", took.as_secs_f64(), b.as_secs()),
        None => format!("{:.1} s", took.as_secs_f64()),
    };
    println!("[{}] {id}. {title}: {} ({timing})", if pass { "PASS" } else { "FAIL" }, v.detail);
    pass
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn determinant_identity() -> Verdict {
    let mut exact = 0;
    let mut total = 0;
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let s = det_identity_trials(n, 1000, SEED, true).unwrap();
        exact += s.exact_matches.unwrap();
        total += s.trials;
        worst = worst.max(s.float_max_error);
    }
    verdict(
        exact == total && worst <= 1e-8,
        format!("{exact}/{total} exact over n = 1..6; float max |lhs-rhs|/(1+|lhs|) = {worst:.2e} (tol 1e-8)"),
    )
}

fn gauss_bonnet_totals(corpus: &[(String, PolyUnion)]) -> Verdict {
    let mut bad = Vec::new();
    for (name, u) in corpus {
        let c = curvature_union(u).unwrap();
        let chi = euler(u).unwrap();
        if c.euler(1e-9) != Some(chi) {
            bad.push(format!("{name}: C0 = {} vs chi = {chi}", c.entries[0].value));
        }
    }
    let exact = corpus.iter().filter(|(_, u)| curvature_union(u).unwrap().entries[0].exact.is_some()).count();
    verdict(
        bad.is_empty(),
        format!(
            "{}/{} scenes with C0 == chi ({exact} exact, rest rounded within 1e-9){}",
            corpus.len() - bad.len(),
            corpus.len(),
            bad.first().map(|b| format!("; first failure {b}")).unwrap_or_default()
        ),
    )
}

fn gauss_bonnet_slices(corpus: &[(String, PolyUnion)]) -> Verdict {
    let (mut samples, mut checked, mut passed, mut rejected) = (0, 0, 0, 0);
    for (i, (_, u)) in corpus.iter().enumerate() {
        let s = slice_trials(u, 100, SEED + i as u64).unwrap();
        samples += s.samples;
        checked += s.checked;
        passed += s.passed;
        rejected += s.touching + s.degenerate;
    }
    let rate = rejected as f64 / samples as f64;
    verdict(
        passed == checked && rate < 0.01,
        format!(
            "{passed}/{checked} slice sums equal the sectional Euler characteristic; rejection rate {rate:.4} (< 0.01)"
        ),
    )
}

fn index_oracle(corpus: &[(String, PolyUnion)]) -> Verdict {
    let (mut n, mut agree) = (0, 0);
    let mut first = None;
    for (i, (name, u)) in corpus.iter().enumerate() {
        let mut rng = substream(SEED, "index-queries", i as u64);
        let pts = common::query_points(u, &mut rng, 12);
        for q in common::queries(u, &pts, &mut rng) {
            let fast = index(u, &q).unwrap().value;
            let (r, delta) = bruteforce_scales(u, &q).unwrap();
            let slow = index_bruteforce(u, &q, &r, &delta).unwrap();
            n += 1;
            if fast == slow {
                agree += 1;
            } else if first.is_none() {
                first = Some(format!("{name} at {}: {fast} vs {slow}", common::describe(&q.point)));
            }
        }
    }
    verdict(
        agree == n && n >= 1000,
        format!(
            "{agree}/{n} non-degenerate queries agree{}",
            first.map(|f| format!("; first mismatch {f}")).unwrap_or_default()
        ),
    )
}

fn transversal_pairs(count: usize) -> Vec<(PolyUnion, PolyUnion)> {
    let mut out = Vec::new();
    let mut i = 0u64;
    while out.len() < count {
        let mut rng = substream(SEED, "pairs", i);
        i += 1;
        let d = 2 + (i as usize) % 2;
        let (pa, pb) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let (a, b) = if i.is_multiple_of(3) {
            (common::simplices(&mut rng, d, pa, &int(0)), common::simplices(&mut rng, d, pb, &frac(1, 3)))
        } else {
            (common::boxes(&mut rng, d, pa, &int(0)), common::boxes(&mut rng, d, pb, &frac(1, 3)))
        };
        if a.intersection(&b).unwrap().is_empty() || touches(&a, &b).unwrap() {
            continue;
        }
        out.push((a, b));
    }
    out
}

fn additivity() -> Verdict {
    let pairs = transversal_pairs(24);
    let (mut n, mut holds) = (0, 0);
    let mut worst: f64 = 0.0;
    let mut exact_ok = true;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let cup = a.union(b).unwrap();
        let cap = a.intersection(b).unwrap();
        let mut rng = substream(SEED, "additivity", i as u64);
        for x in common::query_points(&cup, &mut rng, 12) {
            for _ in 0..4 {
                let q = curvkit::ncycle::NormalQuery::new(x.clone(), common::direction(&mut rng, a.dim())).unwrap();
                match additivity_check(a, b, &q) {
                    Ok(r) => {
                        n += 1;
                        holds += usize::from(r.holds);
                        break;
                    }
                    Err(Error::Degenerate(_)) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        let mut lhs: CurvatureVector = curvature_union(a).unwrap();
        lhs.add_scaled(&curvature_union(b).unwrap(), 1);
        let mut rhs = curvature_union(&cap).unwrap();
        rhs.add_scaled(&curvature_union(&cup).unwrap(), 1);
        worst = worst.max(lhs.max_abs_diff(&rhs));
        if let (Some(l), Some(r)) = (lhs.exact_values(), rhs.exact_values()) {
            exact_ok &= l == r;
        }
    }
    verdict(
        holds == n && n >= 500 && worst <= 1e-9 && exact_ok,
        format!(
            "index additivity {holds}/{n} queries over {} transversal pairs; curvature additivity max diff {worst:.1e} (tol 1e-9), exact cases equal: {exact_ok}",
            pairs.len()
        ),
    )
}

fn intrinsic_volumes() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for d in 2..=4 {
        let c = curvature_union(&PolyUnion::single(ConvexPolytope::unit_cube(d)).unwrap()).unwrap();
        let want: Vec<Rat> = (0..=d).map(|k| int(binom(d, k))).collect();
        let good = c.exact_values().as_ref() == Some(&want);
        ok &= good;
        notes.push(format!("cube d={d} {}", if good { "exact binomials" } else { "MISMATCH" }));
    }
    let square = PolyUnion::single(ConvexPolytope::unit_cube(2)).unwrap();
    let two = vec![vec![int(2), int(0)], vec![int(0), int(2)]];
    let scaled = curvature_union(&affine_pushforward(&square, &two, &[int(0), int(0)]).unwrap()).unwrap();
    let good = scaled.exact_values() == Some(vec![int(1), int(4), int(4)]);
    ok &= good;
    notes.push(format!("2·square = (1,4,4) {}", if good { "exact" } else { "MISMATCH" }));
    // homogeneity on non-square shapes, including irrational edge lengths
    let tri = ConvexPolytope::from_points(&[vec![int(0), int(0)], vec![int(2), int(0)], vec![int(0), int(1)]]).unwrap();
    let lshape = PolyUnion::new(vec![
        ConvexPolytope::cuboid(&[int(0), int(0)], &[int(2), int(1)]).unwrap(),
        ConvexPolytope::cuboid(&[int(0), int(0)], &[int(1), int(2)]).unwrap(),
    ])
    .unwrap();
    let mut worst: f64 = 0.0;
    for u in [PolyUnion::single(tri).unwrap(), lshape, PolyUnion::single(ConvexPolytope::unit_cube(3)).unwrap()] {
        let base = curvature_union(&u).unwrap();
        for lambda in [2i64, 3] {
            let d = u.dim();
            let m: Vec<Vec<Rat>> =
                (0..d).map(|i| (0..d).map(|j| if i == j { int(lambda) } else { int(0) }).collect()).collect();
            let c = curvature_union(&affine_pushforward(&u, &m, &vec![int(0); d]).unwrap()).unwrap();
            for (k, (a, b)) in c.values().iter().zip(base.values()).enumerate() {
                let want = b * (lambda as f64).powi(k as i32);
                worst = worst.max((a - want).abs() / want.abs().max(1.0));
            }
        }
    }
    ok &= worst <= 1e-12;
    notes.push(format!("homogeneity max rel. error {worst:.1e} (tol 1e-12)"));
    verdict(ok, notes.join("; "))
}

fn crofton_case(name: &str, u: &PolyUnion, k: usize, m: usize, reference: f64) -> (bool, String) {
    let est = crofton_estimate(u, k, m, &CroftonConfig::new(100_000, SEED)).unwrap();
    let ok = (est.reference - reference).abs() <= 1e-12 && est.passes(0.02);
    (
        ok,
        format!(
            "{name}: {:.5} ± {:.5} vs {:.5} ({:.1}σ, σ/ref {:.3}){}",
            est.mean,
            est.std_error,
            est.reference,
            (est.mean - est.reference).abs() / est.std_error,
            est.std_error / est.reference,
            if ok { "" } else { " FAIL" }
        ),
    )
}

fn crofton() -> Verdict {
    let square = PolyUnion::single(ConvexPolytope::unit_cube(2)).unwrap();
    let cube = PolyUnion::single(ConvexPolytope::unit_cube(3)).unwrap();
    let (a_ok, a) = crofton_case("(a) square k=0 m=1", &square, 0, 1, 4.0 / PI);
    let (b_ok, b) = crofton_case("(b) cube k=1 m=2", &cube, 1, 2, 3.0 * PI / 4.0);
    let fubini = crofton_estimate(&cube, 3, 3, &CroftonConfig::new(100_000, SEED)).unwrap();
    let c_ok = fubini.std_error == 0.0 && fubini.mean == 1.0 && fubini.reference == 1.0;
    verdict(a_ok && b_ok && c_ok, format!("{a}; {b}; (c) k=m=d gives {} exactly", fubini.mean))
}

fn beta_constants() -> Verdict {
    let mut worst: f64 = 0.0;
    for d in 1..=10 {
        for m in 0..=d {
            worst = worst.max((beta(d, d, m).unwrap() - 1.0).abs());
        }
    }
    let b211 = beta(2, 1, 1).unwrap();
    let b322 = beta(3, 2, 2).unwrap();
    let ok = worst <= 1e-12 && (b211 - 2.0 / PI).abs() <= 1e-12 && (b322 - PI / 4.0).abs() <= 1e-12;
    verdict(ok, format!("max |β^d_(d,m) - 1| = {worst:.1e} for d ≤ 10; β^2_(1,1) = {b211:.15}; β^3_(2,2) = {b322:.15}"))
}

fn approximability() -> Verdict {
    let square = BoxRegion::centered(2, int(1)).unwrap();
    let f = DCFunction::new(abs_coordinate(2, 0), abs_coordinate(2, 1)).unwrap();
    let lad = approximability_ladder(&f, &square, 2, &DEFAULT_EPS_LADDER, DEFAULT_GRID).unwrap();
    let values: Vec<String> = lad.rungs.iter().map(|r| format!("{:.6}", r.lhs)).collect();
    let two_d = lad.bounded();
    let interval = BoxRegion::centered(1, int(1)).unwrap();
    let abs = DCFunction::convex(abs_coordinate(1, 0));
    let mut one_d = true;
    let mut worst: f64 = 0.0;
    let mut slack: f64 = 0.0;
    for e in DEFAULT_EPS_LADDER {
        let field = mollify(&abs, &interval, e, e / DEFAULT_GRID as f64).unwrap();
        let r = &minor_integrals(&field, 1).unwrap()[0];
        let err = (r.value - 2.0).abs();
        worst = worst.max(err);
        slack = slack.max(r.error_bound);
        one_d &= err <= r.error_bound && r.error_bound <= 1e-3;
    }
    verdict(
        two_d && one_d,
        format!(
            "|x|-|y|, m=2: rungs [{}], spread {:.1e} (< 0.1), lhs ≤ rhs + slack on all rungs: {}; |x|: max |∫|f''| - 2| = {worst:.1e} within slack ≤ {slack:.1e} (≤ 1e-3)",
            values.join(", "),
            lad.spread,
            lad.rungs.iter().all(|r| r.holds())
        ),
    )
}

fn touching(corpus: &[(String, PolyUnion)]) -> Verdict {
    let per_scene = 100_000usize.div_ceil(corpus.len());
    let mut random_touch = 0;
    let mut random_total = 0;
    let mut crafted = 0;
    let mut crafted_hit = 0;
    for (i, (_, u)) in corpus.iter().enumerate() {
        let sampler = HalfspaceSampler::new(u).unwrap();
        let mut rng = substream(SEED, "touching", i as u64);
        for _ in 0..per_scene {
            let (v, t) = sampler.sample(&mut rng);
            random_total += 1;
            random_touch += usize::from(touching_halfspace(u, &v, &t).unwrap());
        }
        // halfspaces whose boundary carries a facet of a part
        for p in u.parts() {
            for h in p.constraints() {
                let v: Vec<Rat> = h.normal().iter().map(|x| -x).collect();
                crafted += 1;
                crafted_hit += usize::from(touching_halfspace(u, &v, &-h.offset().clone()).unwrap());
            }
        }
        // supporting hyperplanes through a minimizing vertex, random direction
        for cell in u.nerve().unwrap() {
            let v = common::direction(&mut rng, u.dim());
            let t = cell.polytope.vertices().unwrap().iter().map(|x| curvkit::rational::dot(&v, x)).min().unwrap();
            crafted += 1;
            crafted_hit += usize::from(touching_halfspace(u, &v, &t).unwrap());
        }
    }
    verdict(
        random_touch == 0 && crafted_hit == crafted,
        format!("random: {random_touch}/{random_total} touching; crafted aligned: {crafted_hit}/{crafted} detected"),
    )
}

fn decomposition() -> Verdict {
    let r = decomposition_check(3, 2, 1, 10_000, SEED).unwrap();
    verdict(
        r.passes(),
        format!(
            "direct {:.4} ± {:.4}, two-stage {:.4} ± {:.4}, z = {:.2}, p = {:.3} (> 0.01)",
            r.direct_mean, r.direct_se, r.two_stage_mean, r.two_stage_se, r.z, r.p_value
        ),
    )
}

fn main() {
    let corpus = common::corpus(SEED, 52);
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        criterion("1", "determinant identity", secs(10), determinant_identity),
        criterion("2", "Gauss-Bonnet totals", secs(60), || gauss_bonnet_totals(&corpus)),
        criterion("3", "Gauss-Bonnet slices", secs(300), || gauss_bonnet_slices(&corpus)),
        criterion("4", "index oracle equivalence", secs(300), || index_oracle(&corpus)),
        criterion("5", "additivity", secs(300), additivity),
        criterion("6", "intrinsic-volume values", None, intrinsic_volumes),
        criterion("7", "Crofton formula", secs(600), crofton),
        criterion("8", "beta constants", None, beta_constants),
        criterion("9", "strong approximability ladder", secs(120), approximability),
        criterion("10", "touching halfspaces form a null set", None, || touching(&corpus)),
        criterion("11", "measure decomposition", None, decomposition),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
