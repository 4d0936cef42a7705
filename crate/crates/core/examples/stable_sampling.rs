//! Draw symmetric stable variables and compare their empirical
//! characteristic function with `exp(-|σθ|^α)`.

use mslm::stable::{c_alpha, sample_stable, StableParams};
use mslm::verify::{default_theta_grid, EcfReport};
use mslm::RandomStream;
use num_complex::Complex64;

fn main() -> mslm::Result<()> {
    let grid = default_theta_grid();
    for alpha in [0.8, 1.0, 1.5, 2.0] {
        let p = StableParams::symmetric(alpha, 1.0)?;
        let x = sample_stable(&p, 100_000, RandomStream::new(1, 0))?;
        let rep = EcfReport::compare(&x, &grid, |t| Complex64::new((-t.abs().powf(alpha)).exp(), 0.0), true, None)?;
        let c = if alpha < 2.0 { format!("{:.6}", c_alpha(alpha)?) } else { "-".into() };
        println!(
            "alpha={alpha:.1}  C_alpha={c:<8}  sup|ECF-CF|={:.4}  tolerance={:.4}  {}",
            rep.sup_deviation,
            rep.tolerance,
            if rep.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
