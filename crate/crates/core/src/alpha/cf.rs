//! Closed-form characteristic functions built from `α(u)`.

use crate::error::{domain, precondition, Error, Result};
use crate::quad::Simpson;

use super::integrand::panels_of;
use super::{AlphaFunction, IntegrandFunction};

/// `∫_{u1}^{u2} |θ|^{α(s)} ds`, exact on every affine piece of `α`.
pub fn exponent_integral(af: &AlphaFunction, theta: f64, u1: f64, u2: f64) -> Result<f64> {
    let (lo, hi) = af.domain();
    if !(lo <= u1 && u1 <= u2 && u2 <= hi) {
        return precondition(format!(
            "exponent integral needs {lo} <= u1 <= u2 <= {hi}, got [{u1}, {u2}]"
        ));
    }
    Ok(af.power_integral(theta.abs(), u1, u2))
}

/// Joint characteristic function of the independent-increments motion,
/// `exp{-∫ |Σ θ_j 1_{[0,t_j]}(s)|^{α(s)} ds}`.
pub fn li_cf(af: &AlphaFunction, times: &[f64], thetas: &[f64]) -> Result<f64> {
    if times.len() != thetas.len() {
        return precondition("li_cf needs one theta per time");
    }
    let (lo, hi) = af.domain();
    if let Some(t) = times.iter().find(|&&t| !(t >= lo && t <= hi)) {
        return domain(format!("time {t} outside [{lo}, {hi}]"));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&i, &j| times[i].total_cmp(&times[j]));
    // on (t_(i-1), t_(i)] the inner sum is the tail sum of thetas
    let mut tail: f64 = thetas.iter().sum();
    let mut prev = lo;
    let mut exponent = 0.0;
    for &i in &order {
        let t = times[i];
        if t > prev {
            exponent += exponent_integral(af, tail, prev, t)?;
            prev = t;
        }
        tail -= thetas[i];
    }
    Ok((-exponent).exp())
}

/// The modular `∫_0^1 |Σ c_j f_j(x)|^{α(x)} dx`.
pub fn modular(af: &AlphaFunction, terms: &[(f64, &IntegrandFunction)]) -> Result<f64> {
    let combo = |x: f64| terms.iter().map(|(c, f)| c * f.eval(x)).sum::<f64>();
    let mut breaks: Vec<f64> = terms.iter().flat_map(|(_, f)| f.breakpoints()).collect();
    breaks.extend(af.breakpoints());
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();
    if terms.iter().all(|(_, f)| f.is_piecewise_constant()) {
        let v = panels_of(&breaks, combo)
            .into_iter()
            .map(|(lo, hi, v)| af.power_integral(v.abs(), lo, hi))
            .sum();
        return Ok(v);
    }
    let integrand = |x: f64| {
        let g = combo(x).abs();
        if g == 0.0 {
            0.0
        } else {
            g.powf(af.value(x))
        }
    };
    let v = Simpson::default().integrate(integrand, 0.0, 1.0, &breaks)?;
    if !v.is_finite() {
        return Err(Error::Quadrature("modular is not finite".into()));
    }
    Ok(v)
}

/// Joint characteristic function of multistable integrals,
/// `exp{-∫ |Σ θ_j f_j(x)|^{α(x)} dx}`.
pub fn integral_cf(fs: &[IntegrandFunction], thetas: &[f64], af: &AlphaFunction) -> Result<f64> {
    if fs.len() != thetas.len() {
        return precondition("integral_cf needs one theta per integrand");
    }
    let terms: Vec<(f64, &IntegrandFunction)> = thetas.iter().copied().zip(fs.iter()).collect();
    match modular(af, &terms) {
        Ok(m) => Ok((-m).exp()),
        Err(e) => domain(format!("integrand combination is not integrable: {e}")),
    }
}

/// Exponent of the finite-level field-based characteristic function,
/// `Σ_{k=1}^{⌊2^n u⌋} |θ|^{α(k/2^n)} (2^{-n})^{α(k/2^n)/α(u)}`.
pub fn lf_n_exponent(af: &AlphaFunction, u: f64, theta: f64, n: u32) -> Result<f64> {
    let alpha_u = af.eval(u)?;
    let cells = 2f64.powi(n as i32);
    let count = (cells * u).floor() as u64;
    let abs = theta.abs();
    if abs == 0.0 {
        return Ok(0.0);
    }
    let ln_theta = abs.ln();
    let ln_h = -(n as f64) * std::f64::consts::LN_2;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 1..=count {
        let a = af.value(k as f64 / cells);
        let v = (a * ln_theta + a / alpha_u * ln_h).exp();
        let t = sum + v;
        comp += if sum >= v { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    Ok(sum + comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_integral_basics() {
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        assert!((exponent_integral(&lin, 1.0, 0.2, 0.9).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(exponent_integral(&lin, 0.0, 0.2, 0.9).unwrap(), 0.0);
        let c = AlphaFunction::constant(1.7).unwrap();
        assert!((exponent_integral(&c, 2.0, 0.0, 1.0).unwrap() - 2f64.powf(1.7)).abs() < 1e-14);
        assert!(exponent_integral(&c, 2.0, 0.6, 0.5).is_err());
    }

    #[test]
    fn li_cf_reduces_to_single_panel() {
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        let single = li_cf(&lin, &[0.7], &[1.3]).unwrap();
        let direct = (-exponent_integral(&lin, 1.3, 0.0, 0.7).unwrap()).exp();
        assert!((single - direct).abs() < 1e-15);
        assert_eq!(li_cf(&lin, &[0.2, 0.9], &[0.0, 0.0]).unwrap(), 1.0);
        let gauss = AlphaFunction::constant(2.0).unwrap();
        assert!((li_cf(&gauss, &[1.0], &[1.0]).unwrap() - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn li_cf_two_times() {
        // theta1 L(t1) + theta2 L(t2) with t1 < t2: panels carry theta1+theta2 then theta2
        let c = AlphaFunction::constant(1.5).unwrap();
        let v = li_cf(&c, &[0.8, 0.3], &[0.5, -1.0]).unwrap();
        let expect = (-(0.3 * 0.5f64.powf(1.5) + 0.5 * 0.5f64.powf(1.5))).exp();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn integral_cf_matches_li_cf_for_indicators() {
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        let f = IntegrandFunction::indicator(0.0, 0.4);
        let a = integral_cf(&[f], &[2.0], &lin).unwrap();
        let b = li_cf(&lin, &[0.4], &[2.0]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn integral_cf_constant_integrand() {
        let c = AlphaFunction::constant(1.3).unwrap();
        let v = integral_cf(&[IntegrandFunction::Constant(0.7)], &[1.5], &c).unwrap();
        assert!((v - (-(1.05f64).powf(1.3)).exp()).abs() < 1e-14);
        let f = IntegrandFunction::closure("const", vec![], |_| 0.7);
        let w = integral_cf(&[f], &[1.5], &c).unwrap();
        assert!((v - w).abs() < 1e-10);
    }

    #[test]
    fn non_integrable_combination() {
        let c = AlphaFunction::constant(1.5).unwrap();
        let f = IntegrandFunction::closure("1/x", vec![], |x| 1.0 / x);
        assert!(integral_cf(&[f], &[1.0], &c).is_err());
    }

    #[test]
    fn lf_n_exponent_constant_alpha() {
        let c = AlphaFunction::constant(1.4).unwrap();
        for n in [3, 8, 12] {
            let v = lf_n_exponent(&c, 0.7, 1.0, n).unwrap();
            let cells = 2f64.powi(n as i32);
            assert!((v - (cells * 0.7).floor() / cells).abs() < 1e-12);
        }
        assert_eq!(lf_n_exponent(&c, 0.0, 2.0, 10).unwrap(), 0.0);
    }
}
