//! Empirical joint exceedance probabilities against the explicit
//! tightness bound for every scheme.

use mslm::alpha::AlphaFunction;
use mslm::schemes::Scheme;
use mslm::verify::{tightness_check, MonteCarlo};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.2, 0.6)?;
    let mc = MonteCarlo::new(10, 5_000, RandomStream::new(5, 0));
    for scheme in Scheme::ALL {
        let rep = tightness_check(scheme, &af, (0.2, 0.5, 0.8), &[0.5, 1.0, 3.0], &mc)?;
        for e in &rep.entries {
            println!(
                "{:>2} lambda={:<4} empirical={:.4}  bound={:.4}  {}",
                scheme.name(),
                e.lambda,
                e.empirical,
                e.bound,
                if e.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
