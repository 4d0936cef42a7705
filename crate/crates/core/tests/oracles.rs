//! Library values checked against independent computations.

use std::f64::consts::PI;

use mslm::alpha::{exponent_integral, lf_n_exponent, quasinorm, AlphaFunction, IntegrandFunction};
use mslm::continuous::{scale_parameter, triangle, ContinuousStableConfig};
use mslm::stable::{c_alpha, stable_cf, StableParams};
use mslm::suite::c_alpha_oracle;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn c_alpha_closed_form_values() {
    assert!((c_alpha(1.0).unwrap() - 2.0 / PI).abs() < 1e-12);
    // ∫ x^{-1/2} sin x dx = sqrt(π/2)
    assert!((c_alpha(0.5).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-12);
    for i in 0..50 {
        let u = 0.05 + 1.9 * (i + 1) as f64 / 51.0;
        let d = (c_alpha(u).unwrap() - c_alpha_oracle(u)).abs();
        assert!(d < 1e-8, "u = {u}: {d}");
    }
}

#[test]
fn exponent_integral_linear_matches_simpson() {
    let af = AlphaFunction::linear(1.2, 0.6).unwrap();
    for &theta in &[0.3, 1.0, 2.5, -1.7] {
        for &(u1, u2) in &[(0.0, 1.0), (0.25, 0.75), (0.5, 0.5625)] {
            let got = exponent_integral(&af, theta, u1, u2).unwrap();
            let want = simpson(|s: f64| f64::abs(theta).powf(1.2 + 0.6 * s), u1, u2, 2000);
            assert!((got - want).abs() < 1e-12, "{theta} {u1} {u2}: {got} vs {want}");
        }
    }
}

#[test]
fn exponent_integral_step_sums_panels() {
    let af = AlphaFunction::piecewise(vec![0.3, 0.7], vec![0.8, 1.5, 1.9]).unwrap();
    let theta: f64 = 2.0;
    let want = 0.3 * theta.powf(0.8) + 0.4 * theta.powf(1.5) + 0.3 * theta.powf(1.9);
    assert!((exponent_integral(&af, theta, 0.0, 1.0).unwrap() - want).abs() < 1e-13);
}

/// Luxemburg norm by bisection on the modular of a step function.
fn luxemburg(values: &[f64], alpha: impl Fn(f64) -> f64) -> f64 {
    let m = values.len() as f64;
    let modular = |lam: f64| -> f64 {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let lo = i as f64 / m;
                simpson(|x| (v.abs() / lam).powf(alpha(x)), lo, lo + 1.0 / m, 400)
            })
            .sum()
    };
    let (mut lo, mut hi) = (1e-6f64, 1e6f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

#[test]
fn quasinorm_matches_bisection_oracle() {
    let values = [0.5, -2.0, 1.25, 3.0];
    let af = AlphaFunction::linear(0.7, 1.1).unwrap();
    let got = quasinorm(&IntegrandFunction::table(values.to_vec()).unwrap(), &af).unwrap();
    let want = luxemburg(&values, |x| 0.7 + 1.1 * x);
    assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
}

#[test]
fn symmetric_stable_cf() {
    let p = StableParams::symmetric(1.3, 0.7).unwrap();
    let z = stable_cf(&p, 1.5);
    assert!((z.re - (-(0.7f64 * 1.5).powf(1.3)).exp()).abs() < 1e-15);
    assert_eq!(z.im, 0.0);
}

#[test]
fn scale_parameter_series() {
    let cfg = ContinuousStableConfig::new(1.5, 1.0, 16).unwrap();
    assert!((scale_parameter(&cfg, 0.5).unwrap() - 1.0).abs() < 1e-14);
    assert!(scale_parameter(&cfg, 0.0).unwrap().abs() < 1e-14);
    // t = 1/4: φ = 1/2 at levels 0 and 1, 1 at level 2 is zero; direct sum
    let t = 0.25;
    let mut s = 0.0;
    for j in 0..60 {
        let x = 2f64.powi(j) * t;
        let k = x.floor();
        if k < 2f64.powi(j) {
            s += (2f64.powi(-j) * triangle(x - k)).powf(1.5);
        }
    }
    assert!((scale_parameter(&cfg, t).unwrap() - s.powf(1.0 / 1.5)).abs() < 1e-13);
}

#[test]
fn example1_exponent_direct_sum() {
    let b = 1.8;
    let af = AlphaFunction::example1(b).unwrap();
    let alpha = |u: f64| if u <= b / 2.0 { b / 2.0 } else { u };
    for n in [4u32, 8, 12] {
        let m = 2f64.powi(n as i32);
        let u = 0.95;
        let mut want = 0.0;
        for k in 1..=(m * u).floor() as u64 {
            let a = alpha(k as f64 / m);
            want += 1.5f64.powf(a) * (1.0 / m).powf(a / alpha(u));
        }
        let got = lf_n_exponent(&af, u, 1.5, n).unwrap();
        assert!((got - want).abs() < 1e-10 * want, "n = {n}");
        // the lower bound used in the divergence argument
        let lower = (m * b / 2.0).floor() * 1.5f64.powf(b / 2.0) * (1.0 / m).powf(b / (2.0 * u));
        assert!(got >= lower);
    }
}

#[test]
fn example1_growth_is_slow() {
    let af = AlphaFunction::example1(1.8).unwrap();
    let e20 = lf_n_exponent(&af, 0.95, 1.0, 20).unwrap();
    // ⌊0.9·2^20⌋ · 2^{-20·0.9/0.95} ≈ 1.86
    let lower = (0.9 * 2f64.powi(20)).floor() * 2f64.powf(-20.0 * 0.9 / 0.95);
    assert!(e20 >= lower && e20 < 3.0, "{e20} vs {lower}");
}
