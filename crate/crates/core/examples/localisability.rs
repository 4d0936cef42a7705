//! Rescaled increments near x = 1/2 approach a stable law of index α(x)
//! for a smooth α and fail to do so for a step.

use mslm::alpha::AlphaFunction;
use mslm::suite::step_alpha;
use mslm::verify::{localisability_test, MonteCarlo};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let r: Vec<f64> = (4..=10).map(|k| 2f64.powi(-k)).collect();
    let mc = MonteCarlo::new(16, 5_000, RandomStream::new(15, 0));
    for (name, af) in [("linear", AlphaFunction::linear(1.2, 0.6)?), ("step", step_alpha())] {
        let rep = localisability_test(&af, 0.5, 1.0, &r, &mc, Some(0.05))?;
        let devs: Vec<String> = rep.deviations.iter().map(|d| format!("{d:.3}")).collect();
        println!("{name:<7} deviations [{}]  spearman={:+.2}  {}", devs.join(", "), rep.spearman, if rep.pass { "localisable" } else { "not localisable" });
    }
    Ok(())
}
