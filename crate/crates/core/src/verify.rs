//! Empirical characteristic functions and the Monte-Carlo checks built on
//! them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::alpha::{exponent_integral, AlphaFunction};
use crate::error::{precondition, Error, Result};
use crate::rng::RandomStream;
use crate::schemes::{Scheme, SchemeConfig};

pub const DEFAULT_THETA_POINTS: usize = 61;
pub const DEFAULT_THETA_MAX: f64 = 3.0;
/// Default pass threshold in units of the Monte-Carlo standard error.
pub const DEFAULT_STDERR_MULTIPLE: f64 = 5.0;
/// Threshold multiple for factorization distances.
pub const FACTORIZATION_STDERR_MULTIPLE: f64 = 4.0;
pub const MIN_ENSEMBLE: usize = 1000;

/// `points` equispaced values on `[-max, max]`.
pub fn theta_grid(points: usize, max: f64) -> Vec<f64> {
    if points < 2 {
        return vec![0.0; points];
    }
    let step = 2.0 * max / (points - 1) as f64;
    (0..points)
        .map(|i| {
            // keep the centre exactly at zero
            let c = i as f64 - (points - 1) as f64 / 2.0;
            c * step
        })
        .collect()
}

pub fn default_theta_grid() -> Vec<f64> {
    theta_grid(DEFAULT_THETA_POINTS, DEFAULT_THETA_MAX)
}

pub fn mc_stderr(n: usize) -> f64 {
    1.0 / (n as f64).sqrt()
}

#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(1/N) Σ exp(iθ x_j)` at each `θ`.
pub fn empirical_cf(samples: &[f64], theta_grid: &[f64]) -> Result<Vec<Complex64>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.len() as f64;
    Ok(theta_grid
        .iter()
        .map(|&theta| {
            if theta == 0.0 {
                return Complex64::new(1.0, 0.0);
            }
            let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
            for &x in samples {
                let (s, c) = (theta * x).sin_cos();
                re.add(c);
                im.add(s);
            }
            let z = Complex64::new(re.value() / n, im.value() / n);
            let r = z.norm();
            if r > 1.0 {
                z / r
            } else {
                z
            }
        })
        .collect())
}

/// Joint ECF `(1/N) Σ exp(i Σ_m θ_m x_{jm})` on one point of a product grid.
fn joint_ecf(samples: &[Vec<f64>], thetas: &[f64]) -> Complex64 {
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for row in samples {
        let arg: f64 = row.iter().zip(thetas).map(|(x, t)| x * t).sum();
        let (s, c) = arg.sin_cos();
        re.add(c);
        im.add(s);
    }
    let n = samples.len() as f64;
    Complex64::new(re.value() / n, im.value() / n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcfReport {
    pub theta_grid: Vec<f64>,
    pub empirical: Vec<Complex64>,
    pub theoretical: Vec<Complex64>,
    pub sup_deviation: f64,
    pub mc_stderr: f64,
    pub n_samples: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl EcfReport {
    /// Compare samples against a closed-form CF. With `symmetric` set only
    /// the real part of the ECF is kept.
    pub fn compare(
        samples: &[f64],
        theta_grid: &[f64],
        theory: impl Fn(f64) -> Complex64,
        symmetric: bool,
        tolerance: Option<f64>,
    ) -> Result<Self> {
        let mut empirical = empirical_cf(samples, theta_grid)?;
        if symmetric {
            for z in &mut empirical {
                *z = Complex64::new(z.re, 0.0);
            }
        }
        let theoretical: Vec<Complex64> = theta_grid.iter().map(|&t| theory(t)).collect();
        let sup_deviation = empirical
            .iter()
            .zip(&theoretical)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let stderr = mc_stderr(samples.len());
        let tolerance = tolerance.unwrap_or(DEFAULT_STDERR_MULTIPLE * stderr);
        Ok(Self {
            theta_grid: theta_grid.to_vec(),
            empirical,
            theoretical,
            sup_deviation,
            mc_stderr: stderr,
            n_samples: samples.len(),
            tolerance,
            pass: sup_deviation < tolerance,
        })
    }

    /// Rows `theta,empirical_re,empirical_im,theoretical`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "theta,empirical_re,empirical_im,theoretical")?;
        for ((t, e), th) in self.theta_grid.iter().zip(&self.empirical).zip(&self.theoretical) {
            writeln!(w, "{t},{},{},{}", e.re, e.im, th.re)?;
        }
        Ok(())
    }
}

/// Sup-distance between two ECFs on the grid.
pub fn ecf_distance(a: &[f64], b: &[f64], theta_grid: &[f64]) -> Result<f64> {
    let ea = empirical_cf(a, theta_grid)?;
    let eb = empirical_cf(b, theta_grid)?;
    Ok(ea.iter().zip(&eb).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// Runs `f` on replicate streams `root.replicate(0..count)` in parallel;
/// the output keeps replicate order.
pub fn ensemble<T, F>(count: usize, root: RandomStream, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(RandomStream) -> T + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| f(root.replicate(i)))
        .collect()
}

pub fn try_ensemble<T, F>(count: usize, root: RandomStream, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RandomStream) -> Result<T> + Sync,
{
    ensemble(count, root, f).into_iter().collect()
}

/// Level, ensemble size, θ grid and root stream of a Monte-Carlo check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub n: u32,
    pub ensemble: usize,
    pub theta_grid: Vec<f64>,
    pub stream: RandomStream,
}

impl MonteCarlo {
    pub fn new(n: u32, ensemble: usize, stream: RandomStream) -> Self {
        Self {
            n,
            ensemble,
            theta_grid: default_theta_grid(),
            stream,
        }
    }

    pub fn with_thetas(mut self, theta_grid: Vec<f64>) -> Self {
        self.theta_grid = theta_grid;
        self
    }

    pub fn stderr(&self) -> f64 {
        mc_stderr(self.ensemble)
    }

    fn check(&self) -> Result<()> {
        if self.ensemble < MIN_ENSEMBLE {
            return precondition(format!(
                "ensemble {} is below the minimum {MIN_ENSEMBLE}",
                self.ensemble
            ));
        }
        if self.n < 1 {
            return precondition("level n must be at least 1");
        }
        Ok(())
    }

    /// Scheme increments over `intervals`, one row per replicate.
    pub fn increments(
        &self,
        scheme: Scheme,
        af: &AlphaFunction,
        intervals: &[(f64, f64)],
    ) -> Result<Vec<Vec<f64>>> {
        let base = SchemeConfig::new(self.n, af.clone(), self.stream)?;
        try_ensemble(self.ensemble, self.stream, |s| {
            scheme.increments(&base.with_stream(s), intervals)
        })
    }
}

fn column(rows: &[Vec<f64>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i]).collect()
}

/// Increment ECFs against `exp(−∫_{u1}^{u2} |θ|^{α(s)} ds)`.
pub fn increment_cf_test(
    scheme: Scheme,
    af: &AlphaFunction,
    intervals: &[(f64, f64)],
    mc: &MonteCarlo,
    tolerance: Option<f64>,
) -> Result<Vec<EcfReport>> {
    mc.check()?;
    let rows = mc.increments(scheme, af, intervals)?;
    intervals
        .iter()
        .enumerate()
        .map(|(i, &(u1, u2))| {
            let samples = column(&rows, i);
            let theory = |t: f64| {
                let e = exponent_integral(af, t, u1, u2).expect("interval checked by the scheme");
                Complex64::new((-e).exp(), 0.0)
            };
            EcfReport::compare(&samples, &mc.theta_grid, theory, true, tolerance)
        })
        .collect()
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalisabilityReport {
    pub x: f64,
    pub u: f64,
    pub alpha_x: f64,
    pub r: Vec<f64>,
    pub deviations: Vec<f64>,
    pub spearman: f64,
    pub final_deviation: f64,
    pub tolerance: f64,
    pub n: u32,
    pub ensemble: usize,
    pub pass: bool,
}

/// Rescaled increments `(L(x + r u) − L(x)) / r^{1/α(x)}` of `L_I` against
/// the CF `exp(−u |θ|^{α(x)})` of `L_{α(x)}(u)`.
pub fn localisability_test(
    af: &AlphaFunction,
    x: f64,
    u: f64,
    r_list: &[f64],
    mc: &MonteCarlo,
    tolerance: Option<f64>,
) -> Result<LocalisabilityReport> {
    mc.check()?;
    if r_list.is_empty() {
        return precondition("need at least one r");
    }
    if r_list.windows(2).any(|w| !(w[0] > w[1])) {
        return precondition("r values must be strictly decreasing");
    }
    if !(u > 0.0) {
        return precondition("u must be positive");
    }
    let min_r = 2f64.powi(-(mc.n as i32) + 2);
    for &r in r_list {
        if !(r > 0.0) || x + r * u > 1.0 {
            return precondition(format!("x + r u = {} exceeds 1", x + r * u));
        }
        if r < min_r {
            let need = (2.0 - r.log2()).ceil() as u32;
            return precondition(format!(
                "r = {r} is below 2^(-n+2) for n = {}; use n >= {need}",
                mc.n
            ));
        }
    }
    let alpha_x = af.eval(x)?;
    let intervals: Vec<(f64, f64)> = r_list.iter().map(|&r| (x, x + r * u)).collect();
    let rows = mc.increments(Scheme::Li, af, &intervals)?;
    let tol = tolerance.unwrap_or(DEFAULT_STDERR_MULTIPLE * mc.stderr());
    let mut deviations = Vec::with_capacity(r_list.len());
    for (i, &r) in r_list.iter().enumerate() {
        let scale = r.powf(-1.0 / alpha_x);
        let samples: Vec<f64> = rows.iter().map(|row| row[i] * scale).collect();
        let theory = |t: f64| Complex64::new((-u * t.abs().powf(alpha_x)).exp(), 0.0);
        let rep = EcfReport::compare(&samples, &mc.theta_grid, theory, true, Some(tol))?;
        deviations.push(rep.sup_deviation);
    }
    let rho = spearman(r_list, &deviations);
    let final_deviation = *deviations.last().expect("non-empty");
    Ok(LocalisabilityReport {
        x,
        u,
        alpha_x,
        r: r_list.to_vec(),
        deviations,
        spearman: rho,
        final_deviation,
        tolerance: tol,
        n: mc.n,
        ensemble: mc.ensemble,
        pass: rho > 0.0 && final_deviation < tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessEntry {
    pub lambda: f64,
    pub empirical: f64,
    pub gamma: f64,
    pub constant: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub scheme: Scheme,
    pub triple: (f64, f64, f64),
    pub n: u32,
    pub ensemble: usize,
    pub entries: Vec<TightnessEntry>,
    pub pass: bool,
}

/// `max_{α∈[a,b]} 2^{α+1}/(α+1)`, the Billingsley constant of a
/// unit-length increment at `λ = 1`.
pub fn billingsley_tail_constant(a: f64, b: f64) -> f64 {
    let g = |x: f64| 2f64.powf(x + 1.0) / (x + 1.0);
    g(a).max(g(b))
}

/// The constant `C` and exponent `γ` of `P(|ΔL_1| ≥ λ, |ΔL_2| ≥ λ) ≤
/// C λ^{-2γ} (u2 − u1)^2` for `scheme`.
///
/// Each increment satisfies `P(|ΔL| ≥ λ) ≤ (len) K λ^{-γ}` with `K` from
/// [`billingsley_tail_constant`], `γ = a` for `λ ≥ 1` and `γ = b` below.
/// `L_C` picks up `E[(2^n/Γ_{2^n})^2]` and `L_R` a factor 4 for the random
/// cell counts.
pub fn tightness_constant(scheme: Scheme, af: &AlphaFunction, n: u32, lambda: f64) -> (f64, f64) {
    let (a, b) = (af.lower(), af.upper());
    let gamma = if lambda >= 1.0 { a } else { b };
    let k = billingsley_tail_constant(a, b);
    let m = 2f64.powi(n as i32);
    let factor = match scheme {
        Scheme::Li => 1.0,
        Scheme::Lr => 4.0,
        Scheme::Lc => m * m / ((m - 1.0) * (m - 2.0)),
    };
    (k * k * factor, gamma)
}

/// Empirical joint exceedance of the two increments around `u` against the
/// bound of [`tightness_constant`].
pub fn tightness_check(
    scheme: Scheme,
    af: &AlphaFunction,
    triple: (f64, f64, f64),
    lambdas: &[f64],
    mc: &MonteCarlo,
) -> Result<TightnessReport> {
    let (u1, u, u2) = triple;
    if !(0.0 <= u1 && u1 <= u && u <= u2 && u2 <= 1.0) {
        return precondition("tightness needs 0 <= u1 <= u <= u2 <= 1");
    }
    if lambdas.iter().any(|&l| !(l > 0.0)) {
        return precondition("lambda must be positive");
    }
    let rows = mc.increments(scheme, af, &[(u1, u), (u, u2)])?;
    let entries = lambdas
        .iter()
        .map(|&lambda| {
            let hits = rows
                .iter()
                .filter(|r| r[0].abs() >= lambda && r[1].abs() >= lambda)
                .count();
            let empirical = hits as f64 / rows.len() as f64;
            let (constant, gamma) = tightness_constant(scheme, af, mc.n, lambda);
            let bound = constant * lambda.powf(-2.0 * gamma) * (u2 - u1).powi(2);
            TightnessEntry {
                lambda,
                empirical,
                gamma,
                constant,
                bound,
                pass: empirical <= bound,
            }
        })
        .collect::<Vec<_>>();
    let pass = entries.iter().all(|e| e.pass);
    Ok(TightnessReport {
        scheme,
        triple,
        n: mc.n,
        ensemble: mc.ensemble,
        entries,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub scheme: Scheme,
    pub intervals: Vec<(f64, f64)>,
    pub sup_deviation: f64,
    pub mc_stderr: f64,
    pub threshold: f64,
    pub pass: bool,
    /// `L_C` increments are coupled through `Γ_{2^n}` at finite `n`; its
    /// verdict does not count as a failure.
    pub informational: bool,
}

/// Sup over the product grid of `|joint ECF − Π marginal ECFs|`.
pub fn factorization_distance(rows: &[Vec<f64>], theta_grid: &[f64]) -> Result<f64> {
    let dims = rows.first().map_or(0, |r| r.len());
    if rows.is_empty() {
        return Err(Error::EmptySamples);
    }
    if dims < 2 {
        return Ok(0.0);
    }
    let marginals: Vec<Vec<Complex64>> = (0..dims)
        .map(|i| empirical_cf(&column(rows, i), theta_grid))
        .collect::<Result<_>>()?;
    let g = theta_grid.len();
    let total = g.pow(dims as u32);
    let sup = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut thetas = vec![0.0; dims];
            let mut prod = Complex64::new(1.0, 0.0);
            for (d, th) in thetas.iter_mut().enumerate() {
                let i = idx % g;
                idx /= g;
                *th = theta_grid[i];
                prod *= marginals[d][i];
            }
            (joint_ecf(rows, &thetas) - prod).norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(sup)
}

pub fn factorization_test(
    scheme: Scheme,
    af: &AlphaFunction,
    intervals: &[(f64, f64)],
    mc: &MonteCarlo,
) -> Result<FactorizationReport> {
    mc.check()?;
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sorted.iter().any(|&(a, b)| !(a <= b)) || sorted.windows(2).any(|w| w[1].0 < w[0].1) {
        return precondition("intervals must be ordered and pairwise disjoint");
    }
    let rows = mc.increments(scheme, af, intervals)?;
    let sup = factorization_distance(&rows, &mc.theta_grid)?;
    let threshold = FACTORIZATION_STDERR_MULTIPLE * mc.stderr();
    Ok(FactorizationReport {
        scheme,
        intervals: intervals.to_vec(),
        sup_deviation: sup,
        mc_stderr: mc.stderr(),
        threshold,
        pass: sup < threshold,
        informational: scheme == Scheme::Lc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecf_basics() {
        let z = empirical_cf(&[0.0, 0.0], &[0.0, 1.0, -2.0]).unwrap();
        assert!(z.iter().all(|c| *c == Complex64::new(1.0, 0.0)));
        let z = empirical_cf(&[-1.0, 1.0], &[std::f64::consts::PI]).unwrap();
        assert!((z[0].re + 1.0).abs() < 1e-15);
        assert!(empirical_cf(&[], &[1.0]).is_err());
        let z = empirical_cf(&[0.3, 1.7, -2.2], &[0.0]).unwrap();
        assert_eq!(z[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn default_grid_shape() {
        let g = default_theta_grid();
        assert_eq!(g.len(), 61);
        assert_eq!(g[30], 0.0);
        assert!((g[0] + 3.0).abs() < 1e-15 && (g[60] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn spearman_monotone() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
        assert_eq!(spearman(&[1.0, 2.0], &[5.0, 5.0]), 0.0);
    }

    #[test]
    fn alpha_two_theory() {
        let af = AlphaFunction::constant(2.0).unwrap();
        let e = exponent_integral(&af, 1.0, 0.0, 1.0).unwrap();
        assert!(((-e).exp() - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn zero_theta_column_is_exact() {
        let af = AlphaFunction::linear(1.2, 0.6).unwrap();
        let mc = MonteCarlo::new(6, 1000, RandomStream::new(1, 0)).with_thetas(vec![0.0]);
        let r = increment_cf_test(Scheme::Li, &af, &[(0.0, 1.0)], &mc, None).unwrap();
        assert_eq!(r[0].sup_deviation, 0.0);
    }

    #[test]
    fn small_triples_never_exceed() {
        let af = AlphaFunction::constant(1.5).unwrap();
        let mc = MonteCarlo::new(6, 1000, RandomStream::new(2, 0));
        for s in Scheme::ALL {
            let rep = tightness_check(s, &af, (0.5, 0.505, 0.51), &[0.01, 1.0], &mc).unwrap();
            assert!(rep.entries.iter().all(|e| e.empirical == 0.0));
        }
        let rep = tightness_check(Scheme::Li, &af, (0.2, 0.5, 0.8), &[1e9], &mc).unwrap();
        assert_eq!(rep.entries[0].empirical, 0.0);
    }

    #[test]
    fn localisability_rejects_fine_r() {
        let af = AlphaFunction::constant(1.5).unwrap();
        let mc = MonteCarlo::new(8, 1000, RandomStream::new(2, 0));
        let err = localisability_test(&af, 0.5, 1.0, &[2f64.powi(-10)], &mc, None).unwrap_err();
        assert!(err.to_string().contains("n >= 12"));
    }

    #[test]
    fn factorization_single_interval() {
        let rows = vec![vec![0.3], vec![-0.1]];
        assert_eq!(factorization_distance(&rows, &[1.0, 2.0]).unwrap(), 0.0);
        let af = AlphaFunction::constant(1.5).unwrap();
        let mc = MonteCarlo::new(6, 1000, RandomStream::new(2, 0));
        assert!(factorization_test(Scheme::Li, &af, &[(0.0, 0.6), (0.5, 1.0)], &mc).is_err());
    }
}
