//! Composite adaptive Simpson quadrature with panel splits at known
//! discontinuities.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Simpson {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Uniform pieces each panel is cut into before adapting.
    pub initial_pieces: usize,
}

impl Default for Simpson {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_depth: 48,
            initial_pieces: 8,
        }
    }
}

impl Simpson {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// `∫_a^b f`, splitting at every point of `breaks` that lies in (a, b).
    pub fn integrate<F>(&self, f: F, a: f64, b: f64, breaks: &[f64]) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        if !(a <= b) {
            return Err(Error::Quadrature(format!("empty or reversed interval [{a}, {b}]")));
        }
        if a == b {
            return Ok(0.0);
        }
        let nodes = panel_nodes(a, b, breaks, self.initial_pieces);

        // coarse pass to fix an absolute target
        let mut pieces = Vec::with_capacity(nodes.len() - 1);
        let mut scale = 0.0;
        for w in nodes.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let xm = 0.5 * (x0 + x1);
            let (f0, fm, f1) = (f(x0), f(xm), f(x1));
            let s = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            if !s.is_finite() {
                return Err(Error::Quadrature(format!(
                    "non-finite integrand near [{x0}, {x1}]"
                )));
            }
            scale += s.abs();
            pieces.push((x0, xm, x1, f0, fm, f1, s));
        }
        let target = (self.rel_tol * scale).max(self.abs_tol);
        let total_len = b - a;
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (x0, xm, x1, f0, fm, f1, s) in pieces {
            let eps = target * (x1 - x0) / total_len;
            let v = self.recurse(&f, x0, xm, x1, f0, fm, f1, s, eps, 0)?;
            // Neumaier summation keeps panel sums order independent
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
        }
        Ok(sum + comp)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F>(
        &self,
        f: &F,
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let both = left + right;
        if !both.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand near [{a}, {b}]")));
        }
        let delta = both - whole;
        if delta.abs() <= 15.0 * eps || depth >= self.max_depth || m <= a || b <= m {
            return Ok(both + delta / 15.0);
        }
        Ok(self.recurse(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth + 1)?
            + self.recurse(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth + 1)?)
    }
}

/// Sorted nodes: the endpoints, all interior breakpoints, and `pieces`
/// uniform cuts inside each resulting panel.
fn panel_nodes(a: f64, b: f64, breaks: &[f64], pieces: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > a && x < b && x.is_finite())
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();
    let pieces = pieces.max(1);
    let mut nodes = Vec::with_capacity(cuts.len() * pieces);
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / pieces as f64;
        for i in 0..pieces {
            nodes.push(w[0] + h * i as f64);
        }
    }
    nodes.push(b);
    nodes
}

/// Adaptive Simpson with the default settings (relative tolerance 1e-10).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64]) -> Result<f64> {
    Simpson::default().integrate(f, a, b, breaks)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss–Legendre approximation of `∫_a^b f`.
pub fn gauss_legendre_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    rule.0.iter().zip(&rule.1).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, &[]).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
        let v = integrate(|x| x * x, 0.0, 1.0, &[]).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_function() {
        let v = integrate(f64::exp, 0.0, 1.0, &[]).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn step_with_break_is_exact() {
        let f = |x: f64| if x < 0.3 { 1.0 } else { 5.0 };
        let v = integrate(f, 0.0, 1.0, &[0.3]).unwrap();
        assert!((v - (0.3 + 3.5)).abs() < 1e-14);
    }

    #[test]
    fn kink_converges() {
        let v = integrate(|x: f64| (x - 0.37).abs(), 0.0, 1.0, &[]).unwrap();
        let exact = 0.37f64.powi(2) / 2.0 + 0.63f64.powi(2) / 2.0;
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn singular_endpoint_is_an_error() {
        assert!(integrate(|x: f64| 1.0 / x, 0.0, 1.0, &[]).is_err());
    }

    #[test]
    fn degenerate_interval() {
        assert_eq!(integrate(|_| 1.0, 0.5, 0.5, &[]).unwrap(), 0.0);
        assert!(integrate(|_| 1.0, 1.0, 0.5, &[]).is_err());
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = gauss_legendre(10);
        assert!((rule.1.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let v = gauss_legendre_integrate(|x| x.powi(19) + x.powi(18), 0.0, 1.0, &rule);
        assert!((v - (1.0 / 20.0 + 1.0 / 19.0)).abs() < 1e-14);
        let v = gauss_legendre_integrate(f64::sin, 0.0, std::f64::consts::PI, &gauss_legendre(30));
        assert!((v - 2.0).abs() < 1e-14);
    }
}
