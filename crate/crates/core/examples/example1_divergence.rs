//! The characteristic exponent of the field-based approximation at
//! u = 0.95 keeps growing with n, so the approximation degenerates.

use mslm::alpha::{lf_n_exponent, AlphaFunction};

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::example1(1.8)?;
    for n in (4..=28).step_by(4) {
        println!("n={n:>2}  exponent={:.5}", lf_n_exponent(&af, 0.95, 1.0, n)?);
    }
    Ok(())
}
