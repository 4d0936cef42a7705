//! Stable-law primitives: sampling, characteristic functions, the tail
//! constant `C_α` and Poisson arrival times.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{domain, Result};
use crate::rng::RandomStream;

/// Below this distance from 1 the dedicated α = 1 sampler branch is used.
const ALPHA_ONE_TOL: f64 = 1e-8;

/// Parameters `(α, σ, β, μ)` of a stable law `S_α(σ, β, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub sigma: f64,
    pub beta: f64,
    pub mu: f64,
}

impl StableParams {
    pub fn new(alpha: f64, sigma: f64, beta: f64, mu: f64) -> Result<Self> {
        let p = Self {
            alpha,
            sigma,
            beta,
            mu,
        };
        p.validate()?;
        Ok(p)
    }

    /// Symmetric law `S_α(σ, 0, 0)`.
    pub fn symmetric(alpha: f64, sigma: f64) -> Result<Self> {
        Self::new(alpha, sigma, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return domain(format!("alpha = {} not in (0, 2]", self.alpha));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return domain(format!("sigma = {} must be finite and >= 0", self.sigma));
        }
        if !(-1.0..=1.0).contains(&self.beta) {
            return domain(format!("beta = {} not in [-1, 1]", self.beta));
        }
        if self.alpha == 2.0 && self.beta != 0.0 {
            return domain("alpha = 2 requires beta = 0");
        }
        if !self.mu.is_finite() {
            return domain("mu must be finite");
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.beta == 0.0 && self.mu == 0.0
    }
}

/// Chambers–Mallows–Stuck transform of a uniform angle and an exponential
/// variate into a standard `S_α(1, β, 0)` draw.
///
/// `v` is uniform on (-π/2, π/2) and `w` is Exp(1).
pub fn cms_standard(alpha: f64, beta: f64, v: f64, w: f64) -> f64 {
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        let t = FRAC_PI_2 + beta * v;
        return (t * v.tan() - beta * ((FRAC_PI_2 * w * v.cos()) / t).ln()) / FRAC_PI_2;
    }
    if beta == 0.0 {
        let av = alpha * v;
        return av.sin() / v.cos().powf(1.0 / alpha)
            * ((v - av).cos() / w).powf((1.0 - alpha) / alpha);
    }
    let zeta = -beta * (PI * alpha / 2.0).tan();
    let xi = (-zeta).atan() / alpha;
    let a = alpha * (v + xi);
    (1.0 + zeta * zeta).powf(0.5 / alpha) * a.sin() / v.cos().powf(1.0 / alpha)
        * ((v - a).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Symmetric unit-scale α-stable draw from a pair of open uniforms.
#[inline]
pub fn symmetric_from_uniforms(alpha: f64, pair: (f64, f64)) -> f64 {
    let v = PI * (pair.0 - 0.5);
    let w = -pair.1.ln();
    cms_standard(alpha, 0.0, v, w)
}

/// Draw from `params` using one uniform pair.
pub fn stable_from_uniforms(params: &StableParams, pair: (f64, f64)) -> f64 {
    let v = PI * (pair.0 - 0.5);
    let w = -pair.1.ln();
    let x = cms_standard(params.alpha, params.beta, v, w);
    let StableParams {
        alpha,
        sigma,
        beta,
        mu,
    } = *params;
    if (alpha - 1.0).abs() < ALPHA_ONE_TOL && sigma > 0.0 {
        sigma * x + 2.0 / PI * beta * sigma * sigma.ln() + mu
    } else {
        sigma * x + mu
    }
}

/// `n` independent draws from `S_α(σ, β, μ)`, deterministic in `stream`.
pub fn sample_stable(params: &StableParams, n: usize, stream: RandomStream) -> Result<Vec<f64>> {
    params.validate()?;
    let mut cursor = stream.cursor();
    Ok((0..n)
        .map(|_| stable_from_uniforms(params, cursor.next_pair()))
        .collect())
}

/// Characteristic function of `S_α(σ, β, μ)` at `theta`.
pub fn stable_cf(params: &StableParams, theta: f64) -> Complex64 {
    if theta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let StableParams {
        alpha,
        sigma,
        beta,
        mu,
    } = *params;
    let abs = theta.abs();
    let sign = theta.signum();
    let scale = (sigma * abs).powf(alpha);
    let skew = if beta == 0.0 {
        0.0
    } else if (alpha - 1.0).abs() < ALPHA_ONE_TOL {
        -beta * 2.0 / PI * sign * abs.ln()
    } else {
        beta * sign * (PI * alpha / 2.0).tan()
    };
    let exponent = Complex64::new(-scale, scale * skew + mu * theta);
    exponent.exp()
}

/// The tail constant `C_u = (∫_0^∞ x^{-u} sin x dx)^{-1}` for `u` in (0, 2).
///
/// Uses `(1-u) / (Γ(2-u) sin(π(1-u)/2))`, which equals the usual
/// `cos(πu/2)` form and stays well conditioned near `u = 1`.
pub fn c_alpha(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 2.0) {
        return domain(format!("C_u needs u in (0, 2), got {u}"));
    }
    if u == 1.0 {
        return Ok(2.0 / PI);
    }
    let eps = 1.0 - u;
    Ok(eps / (gamma(2.0 - u) * (FRAC_PI_2 * eps).sin()))
}

/// Asymptotic values of `λ^α P(X > λ)` and `λ^α P(X < -λ)` scaled back by
/// `λ^{-α}`, for `X ~ S_α(σ, β, μ)` with α < 2.
pub fn tail_asymptote(params: &StableParams, lambda: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if params.alpha >= 2.0 {
        return domain("Gaussian tails have no power-law asymptote (alpha = 2)");
    }
    if !(lambda > 0.0) {
        return domain(format!("lambda = {lambda} must be positive"));
    }
    let base = c_alpha(params.alpha)? * params.sigma.powf(params.alpha) * lambda.powf(-params.alpha);
    Ok((
        base * (1.0 + params.beta) / 2.0,
        base * (1.0 - params.beta) / 2.0,
    ))
}

/// Arrival times `Γ_1 < Γ_2 < ...` of a homogeneous Poisson process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonArrivals {
    pub rate: f64,
    pub times: Vec<f64>,
}

impl PoissonArrivals {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `Γ_i` with the convention `Γ_0 = 0`.
    pub fn gamma(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.times[i - 1]
        }
    }
}

pub fn poisson_arrivals(rate: f64, count: usize, stream: RandomStream) -> Result<PoissonArrivals> {
    if !(rate > 0.0) || !rate.is_finite() {
        return domain(format!("rate = {rate} must be positive"));
    }
    let mut cursor = stream.cursor();
    let mut acc = 0.0;
    let times = (0..count)
        .map(|_| {
            acc += cursor.next_exponential() / rate;
            acc
        })
        .collect();
    Ok(PoissonArrivals { rate, times })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn params_validation() {
        assert!(StableParams::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(StableParams::new(2.1, 1.0, 0.0, 0.0).is_err());
        assert!(StableParams::new(1.5, -1.0, 0.0, 0.0).is_err());
        assert!(StableParams::new(1.5, 1.0, 1.5, 0.0).is_err());
        assert!(StableParams::new(2.0, 1.0, 0.5, 0.0).is_err());
        assert!(StableParams::new(2.0, 1.0, 0.0, 0.0).is_ok());
        assert!(StableParams::new(0.7, 0.0, -1.0, 3.0).is_ok());
    }

    #[test]
    fn empty_sample() {
        let p = StableParams::symmetric(1.3, 1.0).unwrap();
        assert!(sample_stable(&p, 0, RandomStream::new(1, 0)).unwrap().is_empty());
    }

    #[test]
    fn cf_values() {
        let p1 = StableParams::symmetric(1.0, 1.0).unwrap();
        assert!(close(stable_cf(&p1, 1.0).re, (-1.0f64).exp(), 1e-15));
        let p2 = StableParams::symmetric(2.0, 1.0).unwrap();
        assert!(close(stable_cf(&p2, 2.0).re, (-4.0f64).exp(), 1e-15));
        let skew = StableParams::new(1.3, 0.7, 0.6, 0.2).unwrap();
        assert_eq!(stable_cf(&skew, 0.0), Complex64::new(1.0, 0.0));
        for t in [-3.0, -0.1, 0.5, 2.0] {
            assert!(stable_cf(&skew, t).norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn c_alpha_known_values() {
        assert!(close(c_alpha(1.0).unwrap(), 2.0 / PI, 1e-15));
        assert!(close(c_alpha(0.5).unwrap(), 0.797_884_560_802_865_4, 1e-12));
        assert!(close(c_alpha(1.5).unwrap(), 0.398_942_280_401_432_7, 1e-12));
        // continuity through the removable singularity
        assert!(close(c_alpha(1.0 + 1e-9).unwrap(), 2.0 / PI, 1e-8));
        assert!(c_alpha(0.0).is_err());
        assert!(c_alpha(2.0).is_err());
    }

    #[test]
    fn tail_asymptote_values() {
        let p = StableParams::symmetric(1.0, 1.0).unwrap();
        let (up, lo) = tail_asymptote(&p, 10.0).unwrap();
        assert!(close(up, 0.1 / PI, 1e-15));
        assert_eq!(up, lo);
        let one_sided = StableParams::new(1.4, 2.0, 1.0, 0.0).unwrap();
        assert_eq!(tail_asymptote(&one_sided, 3.0).unwrap().1, 0.0);
        let gauss = StableParams::symmetric(2.0, 1.0).unwrap();
        assert!(tail_asymptote(&gauss, 3.0).is_err());
    }

    #[test]
    fn arrivals_increase() {
        let a = poisson_arrivals(2.5, 1000, RandomStream::new(3, 9)).unwrap();
        assert_eq!(a.len(), 1000);
        assert!(a.times[0] > 0.0);
        assert!(a.times.windows(2).all(|w| w[1] > w[0]));
        assert!(poisson_arrivals(1.0, 0, RandomStream::new(3, 9)).unwrap().is_empty());
        assert!(poisson_arrivals(0.0, 3, RandomStream::new(3, 9)).is_err());
    }

    #[test]
    fn alpha_one_branch_is_continuous() {
        let (v, w) = (0.3, 0.8);
        let near = cms_standard(1.0 + 1e-6, 0.0, v, w);
        let exact = cms_standard(1.0, 0.0, v, w);
        assert!(close(near, exact, 1e-5));
    }
}
