//! Multistable integrals: independence of disjointly supported
//! integrands and the Hölder-type bound for a weighted kernel.

use mslm::alpha::{AlphaFunction, IntegrandFunction};
use mslm::integrals::{hoelder_bound_check, independence_test, KernelFunction, WeightFunction};
use mslm::verify::{theta_grid, MonteCarlo};
use mslm::RandomStream;

fn main() -> mslm::Result<()> {
    let af = AlphaFunction::linear(1.2, 0.6)?;
    let mc = MonteCarlo::new(10, 5_000, RandomStream::new(13, 0)).with_thetas(theta_grid(13, 3.0));
    let left = IntegrandFunction::indicator(0.0, 0.5);
    let right = IntegrandFunction::indicator_left_open(0.5, 1.0);
    for (name, g) in [("disjoint", &right), ("same", &left)] {
        let r = independence_test(&left, g, &af, Some(&mc))?;
        println!("{name:<9} analytic={:?} empirical={:?} distance={:.4}", r.analytic, r.empirical, r.factorization_distance.unwrap_or(f64::NAN));
    }

    let w = WeightFunction::constant(1.0);
    let kernel = KernelFunction::weighted_indicator(&w);
    let pairs = [(0.5625, 0.5), (0.515625, 0.5)];
    let rep = hoelder_bound_check(&kernel, &af, 1.0, w.c_w(&af), 0.4, &pairs, Some(&mc))?;
    for e in &rep.entries {
        println!("|t-v|={:.5}  P(|dL| >= h^beta)={:.4}  bound={:.4}", e.t - e.v, e.empirical.unwrap_or(f64::NAN), e.bound);
    }
    Ok(())
}
