//! Mollified Hessian minors of piecewise-linear d.c. functions: the minor
//! integrals of f = g - h stay bounded as the mollifier width shrinks.
//!
//!     cargo run --release --example approx

use curvkit::approx::{
    approximability_ladder, minor_integrals, mollify, monge_ampere_mass, BoxRegion, DEFAULT_EPS_LADDER,
};
use curvkit::dcfun::{abs_coordinate, DCFunction};
use curvkit::rational::int;

fn main() -> curvkit::Result<()> {
    // |x| on [-1, 1]: |f''| integrates to 2 whatever the width.
    let interval = BoxRegion::centered(1, int(1))?;
    let abs = DCFunction::convex(abs_coordinate(1, 0));
    for eps in DEFAULT_EPS_LADDER {
        let field = mollify(&abs, &interval, eps, eps / 8.0)?;
        let r = &minor_integrals(&field, 1)?[0];
        println!("|x|, eps={eps:<6} int |f''| = {:.9} ± {:.1e}, L1 gap {:.2e}", r.value, r.error_bound, field.l1_gap());
    }

    // |x| - |y| on [-1, 1]^2: the 2x2 minor carries mass 4 at the origin.
    let square = BoxRegion::centered(2, int(1))?;
    let f = DCFunction::new(abs_coordinate(2, 0), abs_coordinate(2, 1))?;
    for m in 1..=2 {
        let ladder = approximability_ladder(&f, &square, m, &DEFAULT_EPS_LADDER, 4)?;
        println!("|x|-|y|, m={m}: spread {:.1e}, bounded: {}", ladder.spread, ladder.bounded());
        for r in &ladder.rungs {
            println!("    eps={:.4}  lhs {:.6} <= rhs {:.6} + {:.1e}", r.eps, r.lhs, r.rhs, r.slack);
        }
    }

    // The exact Monge-Ampere mass of the convex parts, for comparison.
    let g = abs_coordinate(2, 0).sum(&abs_coordinate(2, 1))?;
    let ma = monge_ampere_mass(&g, &square)?;
    println!("MA(|x|+|y|)([-1,1]^2) = {} from {} vertex", ma.mass, ma.vertices);
    Ok(())
}
