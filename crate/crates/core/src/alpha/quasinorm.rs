use crate::error::{Error, Result};

use super::cf::modular;
use super::{AlphaFunction, IntegrandFunction};

const REL_TOL: f64 = 1e-12;

/// Luxemburg-type quasinorm `‖f‖_α = inf{λ > 0 : ∫ |f/λ|^{α(x)} dx = 1}`.
///
/// The root of `λ ↦ ∫|f/λ|^α − 1` (continuous, strictly decreasing for
/// `f ≢ 0`) is bracketed from `[‖f‖_∞·1e-6, ‖f‖_∞]` and bisected to a
/// relative width of 1e-12.
pub fn quasinorm(f: &IntegrandFunction, af: &AlphaFunction) -> Result<f64> {
    let sup = f.sup_abs();
    if !sup.is_finite() {
        return Err(Error::InfiniteNorm("unbounded integrand".into()));
    }
    if sup == 0.0 {
        return Ok(0.0);
    }
    let g = |lambda: f64| -> Result<f64> {
        modular(af, &[(1.0 / lambda, f)])
            .map(|m| m - 1.0)
            .map_err(|e| Error::InfiniteNorm(e.to_string()))
    };
    let mut hi = sup;
    let mut g_hi = g(hi)?;
    while g_hi > 0.0 {
        hi *= 2.0;
        g_hi = g(hi)?;
    }
    let mut lo = sup * 1e-6;
    let mut g_lo = g(lo)?;
    let mut expansions = 0;
    while g_lo < 0.0 {
        // f vanishes except on a set too small to register
        if g_lo <= -1.0 || expansions > 60 {
            return Ok(0.0);
        }
        lo *= 1e-3;
        g_lo = g(lo)?;
        expansions += 1;
    }
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    while hi - lo > REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm > 0.0 {
            lo = mid;
        } else if gm < 0.0 {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_constant() {
        let lin = AlphaFunction::linear(0.8, 1.0).unwrap();
        assert_eq!(quasinorm(&IntegrandFunction::zero(), &lin).unwrap(), 0.0);
        let v = quasinorm(&IntegrandFunction::Constant(3.7), &lin).unwrap();
        assert!((v - 3.7).abs() < 1e-11);
        let neg = quasinorm(&IntegrandFunction::Constant(-0.2), &lin).unwrap();
        assert!((neg - 0.2).abs() < 1e-12);
    }

    #[test]
    fn identity_with_alpha_two() {
        let two = AlphaFunction::constant(2.0).unwrap();
        let f = IntegrandFunction::closure("x", vec![], |x| x);
        let v = quasinorm(&f, &two).unwrap();
        assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn indicator_norm() {
        let c = AlphaFunction::constant(1.5).unwrap();
        let f = IntegrandFunction::indicator(0.0, 0.125);
        let v = quasinorm(&f, &c).unwrap();
        assert!((v - 0.125f64.powf(1.0 / 1.5)).abs() < 1e-12);
        assert_eq!(quasinorm(&IntegrandFunction::point(0.3), &c).unwrap(), 0.0);
    }

    #[test]
    fn divergent_integrand() {
        let c = AlphaFunction::constant(1.5).unwrap();
        let f = IntegrandFunction::closure("1/x", vec![], |x| 1.0 / x);
        assert!(matches!(quasinorm(&f, &c), Err(Error::InfiniteNorm(_))));
    }
}
