//! Compare increment characteristic functions of the L_I scheme with the
//! closed form `exp(-∫|θ|^{α(s)} ds)` on three intervals.

use mslm::alpha::AlphaFunction;
use mslm::schemes::Scheme;
use mslm::verify::{increment_cf_test, MonteCarlo};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.2, 0.6)?;
    let intervals = [(0.0, 1.0), (0.25, 0.75), (0.5, 0.5625)];
    for n in [6, 12] {
        let mc = MonteCarlo::new(n, 10_000, RandomStream::new(3, 0));
        let reps = increment_cf_test(Scheme::Li, &af, &intervals, &mc, Some(0.05))?;
        for (iv, r) in intervals.iter().zip(&reps) {
            println!("n={n:>2} interval={iv:?}  sup deviation {:.4}", r.sup_deviation);
        }
    }
    Ok(())
}
