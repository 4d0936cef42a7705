use serde::{Deserialize, Serialize};

use super::AlphaFunction;

/// Default verdict threshold on the value at the smallest `t`.
pub const DEFAULT_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Satisfied,
    Violated,
    Inconclusive,
}

/// Finite-grid diagnostic of `sup_x |(α(x) − α(x+t)) ln t| → 0`.
///
/// The condition is asymptotic; the verdict only describes the trend seen
/// on the supplied grid. The raw sequence is always included.
///
/// Besides `x_grid`, every `t` also probes `x = p − t/2` for each
/// breakpoint `p` of `α`, so jumps are seen at every scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition7Report {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub threshold: f64,
    pub verdict: Trend,
}

pub fn check_condition7(af: &AlphaFunction, x_grid: &[f64], t_grid: &[f64]) -> Condition7Report {
    check_condition7_with(af, x_grid, t_grid, DEFAULT_THRESHOLD)
}

pub fn check_condition7_with(
    af: &AlphaFunction,
    x_grid: &[f64],
    t_grid: &[f64],
    threshold: f64,
) -> Condition7Report {
    let breaks = af.breakpoints();
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let log_t = t.ln();
            x_grid
                .iter()
                .copied()
                .chain(breaks.iter().map(|p| p - 0.5 * t))
                .filter(|&x| af.contains(x) && af.contains(x + t))
                .map(|x| ((af.value(x) - af.value(x + t)) * log_t).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let verdict = match (values.first(), values.last()) {
        (Some(&first), Some(&last)) => {
            if last < threshold && last <= first {
                Trend::Satisfied
            } else if last > first {
                Trend::Violated
            } else {
                Trend::Inconclusive
            }
        }
        _ => Trend::Inconclusive,
    };
    Condition7Report {
        t: t_grid.to_vec(),
        values,
        threshold,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_grid() -> Vec<f64> {
        (1..=6).map(|k| 10f64.powi(-k)).collect()
    }

    #[test]
    fn constant_alpha_is_zero() {
        let c = AlphaFunction::constant(1.3).unwrap();
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 50.0).collect();
        let r = check_condition7(&c, &xs, &t_grid());
        assert!(r.values.iter().all(|&v| v == 0.0));
        assert_eq!(r.verdict, Trend::Satisfied);
    }

    #[test]
    fn linear_alpha_matches_formula() {
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 100.0).collect();
        let r = check_condition7(&lin, &xs, &t_grid());
        for (t, v) in r.t.iter().zip(&r.values) {
            assert!((v - (0.6 * t * t.ln()).abs()).abs() < 1e-12);
        }
        assert_eq!(r.verdict, Trend::Satisfied);
    }

    #[test]
    fn step_alpha_is_violated() {
        let step = AlphaFunction::piecewise(vec![0.5], vec![1.2, 1.8]).unwrap();
        let xs = vec![0.5 - 1e-9, 0.25];
        let r = check_condition7(&step, &xs, &t_grid());
        for (t, v) in r.t.iter().zip(&r.values) {
            assert!((v - 0.6 * t.ln().abs()).abs() < 1e-12);
        }
        assert_eq!(r.verdict, Trend::Violated);
    }

    #[test]
    fn step_is_seen_without_grid_points_near_the_jump() {
        let step = AlphaFunction::piecewise(vec![0.5], vec![1.2, 1.8]).unwrap();
        let r = check_condition7(&step, &[0.0, 0.25], &t_grid());
        assert_eq!(r.verdict, Trend::Violated);
    }
}
