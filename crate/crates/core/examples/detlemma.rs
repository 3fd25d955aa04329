//! det(A - B) as an alternating binomial sum of det((n-k)A + kB), exactly on
//! dyadic rational matrices and in floating point on Gaussian ones.
//!
//!     cargo run --release --example detlemma -- [trials] [seed]

use curvkit::approx::det_identity_trials;

fn main() -> curvkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    for n in 1..=6 {
        let s = det_identity_trials(n, trials, seed, true)?;
        println!(
            "n={n}: exact {}/{}, float max rel. error {:.2e} ({})",
            s.exact_matches.unwrap_or(0),
            s.trials,
            s.float_max_error,
            if s.passes() { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
