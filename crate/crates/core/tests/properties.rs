//! Structural invariants checked on random inputs.

use mslm::alpha::{exponent_integral, quasinorm, AlphaFunction, IntegrandFunction};
use mslm::path::PathGrid;
use mslm::schemes::{Scheme, SchemeConfig};
use mslm::verify::{empirical_cf, spearman, theta_grid};
use mslm::RandomStream;
use proptest::prelude::*;

fn scheme() -> impl Strategy<Value = Scheme> {
    prop_oneof![Just(Scheme::Li), Just(Scheme::Lr), Just(Scheme::Lc)]
}

fn linear_alpha() -> impl Strategy<Value = AlphaFunction> {
    (0.3f64..2.0, 0.3f64..2.0).prop_map(|(a, b)| AlphaFunction::linear(a, b - a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn paths_start_at_zero_on_the_dyadic_grid(s in scheme(), af in linear_alpha(), n in 1u32..8, seed: u64) {
        let cfg = SchemeConfig::new(n, af, RandomStream::new(seed, 0)).unwrap();
        let p = s.simulate(&cfg);
        prop_assert_eq!(p.len(), (1usize << n) + 1);
        prop_assert_eq!(p.values()[0], 0.0);
        prop_assert!(p.values().iter().all(|v| v.is_finite()));
        prop_assert_eq!(s.simulate(&cfg), p);
    }

    #[test]
    fn values_at_agree_with_full_path(s in scheme(), af in linear_alpha(), seed: u64, k in 0usize..=64) {
        let cfg = SchemeConfig::new(6, af, RandomStream::new(seed, 3)).unwrap();
        let p = s.simulate(&cfg);
        let t = k as f64 / 64.0;
        let v = s.values_at(&cfg, &[t]).unwrap()[0];
        prop_assert!((v - p.values()[k]).abs() <= 1e-12 * (1.0 + v.abs()));
    }

    #[test]
    fn li_increment_matches_path_difference(af in linear_alpha(), seed: u64, a in 0usize..=128, b in 0usize..=128) {
        let (a, b) = (a.min(b), a.max(b));
        let cfg = SchemeConfig::new(7, af, RandomStream::new(seed, 1)).unwrap();
        let p = Scheme::Li.simulate(&cfg);
        let inc = Scheme::Li.increments(&cfg, &[(a as f64 / 128.0, b as f64 / 128.0)]).unwrap()[0];
        let diff = p.values()[b] - p.values()[a];
        prop_assert!((inc - diff).abs() <= 1e-9 * (1.0 + diff.abs()));
    }

    #[test]
    fn csv_round_trip(vals in prop::collection::vec(-1e6f64..1e6, 1..40)) {
        let mut values = vec![0.0];
        values.extend(vals);
        let n = values.len();
        let times: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1).max(1) as f64).collect();
        let p = PathGrid::new(times, values).unwrap();
        let back = PathGrid::read_csv(p.to_csv().as_bytes()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn quasinorm_is_homogeneous(af in linear_alpha(), vals in prop::collection::vec(-5f64..5.0, 1..20), c in -4f64..4.0) {
        prop_assume!(vals.iter().any(|v| v.abs() > 1e-3) && c.abs() > 1e-3);
        let f = IntegrandFunction::table(vals).unwrap();
        let q = quasinorm(&f, &af).unwrap();
        let qc = quasinorm(&f.scaled(c), &af).unwrap();
        prop_assert!((qc - c.abs() * q).abs() <= 1e-9 * qc.max(1e-12));
    }

    #[test]
    fn exponent_integral_is_additive(af in linear_alpha(), theta in -4f64..4.0, u1 in 0f64..1.0, u2 in 0f64..1.0, u3 in 0f64..1.0) {
        let mut u = [u1, u2, u3];
        u.sort_by(f64::total_cmp);
        let whole = exponent_integral(&af, theta, u[0], u[2]).unwrap();
        let parts = exponent_integral(&af, theta, u[0], u[1]).unwrap() + exponent_integral(&af, theta, u[1], u[2]).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole));
        prop_assert!(whole >= 0.0);
    }

    #[test]
    fn ecf_is_bounded_and_one_at_zero(x in prop::collection::vec(-1e3f64..1e3, 1..200)) {
        let grid = theta_grid(61, 3.0);
        let z = empirical_cf(&x, &grid).unwrap();
        prop_assert_eq!(z[30].re, 1.0);
        prop_assert_eq!(z[30].im, 0.0);
        prop_assert!(z.iter().all(|c| c.norm() <= 1.0));
    }

    #[test]
    fn spearman_is_a_correlation(x in prop::collection::vec(-1e3f64..1e3, 3..30)) {
        let y: Vec<f64> = x.iter().map(|v| v * v * v).collect();
        let r = spearman(&x, &y);
        prop_assert!((r - 1.0).abs() < 1e-12 || x.windows(2).all(|w| w[0] == w[1]));
        let rev: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&spearman(&x, &rev)));
    }
}

#[test]
fn theta_grid_is_symmetric() {
    let g = theta_grid(61, 3.0);
    assert_eq!(g[30], 0.0);
    for i in 0..61 {
        assert_eq!(g[i], -g[60 - i]);
    }
}
