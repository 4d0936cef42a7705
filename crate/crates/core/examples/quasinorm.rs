//! Variable-exponent quasinorms of tabulated functions and the
//! regularity diagnostic on α.

use mslm::alpha::{check_condition7, quasinorm, AlphaFunction, IntegrandFunction};

fn main() -> mslm::Result<()> {
    let f = IntegrandFunction::table(vec![1.0, -2.0, 3.0, 0.5])?;
    for af in [AlphaFunction::constant(1.0)?, AlphaFunction::linear(0.6, 1.2)?, AlphaFunction::piecewise(vec![0.5], vec![0.7, 1.9])?] {
        println!("{:<60} ||f|| = {:.6}", serde_json::to_string(af.spec())?, quasinorm(&f, &af)?);
    }
    let xs: Vec<f64> = (0..=128).map(|i| i as f64 / 128.0).collect();
    let ts: Vec<f64> = (1..=16).map(|k| 2f64.powi(-k)).collect();
    for af in [AlphaFunction::linear(1.2, 0.6)?, AlphaFunction::piecewise(vec![0.5], vec![1.2, 1.8])?] {
        println!("condition trend for {}: {:?}", serde_json::to_string(af.spec())?, check_condition7(&af, &xs, &ts).verdict);
    }
    Ok(())
}
