//! Fitted exponents of the strong-localisability inequality for a
//! weighted kernel.

use mslm::alpha::AlphaFunction;
use mslm::integrals::{strong_localisability_check, KernelFunction, WeightFunction};

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.2, 0.6)?;
    let w = WeightFunction::closure("1 + x/2", vec![], |x| 1.0 + 0.5 * x);
    let kernel = KernelFunction::weighted_indicator(&w);
    let r: Vec<f64> = (4..=10).map(|k| 2f64.powi(-k)).collect();
    let pairs = [(1.0, 0.0), (0.5, 0.0), (0.25, 0.0), (0.75, 0.25)];
    let rep = strong_localisability_check(&kernel, &af, 0.5, &r, &pairs, true)?;
    for (r, eta) in r.iter().zip(&rep.eta) {
        println!("r={r:<10} eta={eta:.4}");
    }
    println!("verdict: {:?}", rep.verdict);
    Ok(())
}
