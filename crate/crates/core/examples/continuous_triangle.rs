//! The triangle-basis stable process: one path, its scale parameter and
//! the bounds on it.

use mslm::continuous::{dyadic_grid, sample_continuous_stable, scale_bounds, scale_parameter, ContinuousStableConfig};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let cfg = ContinuousStableConfig::new(1.5, 1.0, 12)?;
    let path = sample_continuous_stable(&cfg, &dyadic_grid(10), RandomStream::new(9, 0))?;
    println!("path: {} points, X(1/2) = {:+.4}", path.len(), path.value_at(0.5));
    for t in [0.01, 0.1, 0.25, 0.5, 0.9] {
        let (lo, hi) = scale_bounds(&cfg, t);
        println!("t={t:<5} sigma={:.5}  bounds=[{lo:.5}, {hi:.5}]", scale_parameter(&cfg, t)?);
    }
    Ok(())
}
