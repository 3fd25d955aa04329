//! Slice identity: for random halfspaces H, the index sum over the boundary
//! points of A ∩ H equals χ(A ∩ H).
//!
//!     cargo run --release --example slices -- [samples] [seed]

use curvkit::ncycle::{classify_slice, slice_trials, SliceOutcome};
use curvkit::polyhedra::{ConvexPolytope, PolyUnion};
use curvkit::rational::{format_rat, frac, int, vec_i};

fn main() -> curvkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let annulus = PolyUnion::new(vec![
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[3, 1]))?,
        ConvexPolytope::cuboid(&vec_i(&[0, 2]), &vec_i(&[3, 3]))?,
        ConvexPolytope::cuboid(&vec_i(&[0, 0]), &vec_i(&[1, 3]))?,
        ConvexPolytope::cuboid(&vec_i(&[2, 0]), &vec_i(&[3, 3]))?,
    ])?;
    let cubes = PolyUnion::new(vec![
        ConvexPolytope::unit_cube(3),
        ConvexPolytope::cuboid(&vec_i(&[1, 1, 0]), &vec_i(&[2, 2, 1]))?,
    ])?;

    for (name, u) in [("square annulus", &annulus), ("two cubes sharing an edge", &cubes)] {
        let s = slice_trials(u, samples, seed)?;
        println!(
            "{name}: {}/{} slices agree, {} touching, {} degenerate",
            s.passed, s.checked, s.touching, s.degenerate
        );
    }

    // A few hand-picked oblique cuts through the annulus.
    for (v, t) in [
        (vec_i(&[3, 1]), frac(9, 2)),
        (vec_i(&[1, -2]), frac(-7, 2)),
        (vec_i(&[2, 1]), int(3)),
        (vec_i(&[1, 0]), int(1)),
    ] {
        let v_str = v.iter().map(format_rat).collect::<Vec<_>>().join(", ");
        let t_str = format_rat(&t);
        match classify_slice(&annulus, &v, &t)? {
            SliceOutcome::Checked(r) => println!("  ({v_str})·x <= {t_str}: sum {} = chi {}", r.sum, r.euler),
            SliceOutcome::Degenerate(r) => {
                println!("  ({v_str})·x <= {t_str}: degenerate direction, skipped (sum {}, chi {})", r.sum, r.euler)
            }
            SliceOutcome::Touching => println!("  ({v_str})·x <= {t_str}: touching, skipped"),
        }
    }
    Ok(())
}
