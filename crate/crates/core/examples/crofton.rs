//! Crofton formula by Monte Carlo: lines through the unit square and planes
//! through the unit cube.
//!
//!     cargo run --release --example crofton -- [samples] [seed]

use curvkit::crofton::{beta, crofton_estimate, CroftonConfig};
use curvkit::polyhedra::{ConvexPolytope, PolyUnion};

fn main() -> curvkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let cfg = CroftonConfig::new(samples, seed);

    println!("beta^2_(1,1) = {:.6}, beta^3_(2,2) = {:.6}", beta(2, 1, 1)?, beta(3, 2, 2)?);
    for (d, k, m) in [(2, 0, 1), (3, 1, 2), (3, 0, 2), (3, 0, 1)] {
        let a = PolyUnion::single(ConvexPolytope::unit_cube(d))?;
        let t = std::time::Instant::now();
        let e = crofton_estimate(&a, k, m, &cfg)?;
        println!(
            "d={d} k={k} m={m}: mean {:.5} ± {:.5}, reference {:.5}, {} rejected, {:.1?}{}",
            e.mean,
            e.std_error,
            e.reference,
            e.rejected,
            t.elapsed(),
            if e.passes(0.03) { "" } else { "  (outside 3σ)" }
        );
    }
    Ok(())
}
