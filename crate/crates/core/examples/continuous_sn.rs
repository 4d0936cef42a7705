//! A continuous approximation S_n of the multistable motion, drawn on a
//! fine grid, with the per-cell coefficients that bound its jumps.

use mslm::alpha::AlphaFunction;
use mslm::continuous::{dyadic_grid, simulate_sn, sn_coefficients, SegmentBasis};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.2, 0.6)?;
    let basis = SegmentBasis::default();
    let coefs = sn_coefficients(6, &af, basis)?;
    println!("c_0 = {:.4}, c_63 = {:.4}", coefs[0], coefs[63]);
    let path = simulate_sn(6, &af, basis, RandomStream::new(11, 0), &dyadic_grid(12))?;
    println!("S_6 on {} points: S(1/2) = {:+.4}, S(1) = {:+.4}, max step {:.4}", path.len(), path.value_at(0.5), path.last(), path.max_jump());
    Ok(())
}
