//! Multistable integrals `∫ f dM_α`: weighted-sum sampling, integrand
//! convergence, independence, stochastic Hölder bounds, the weighted
//! motion and strong-localisability diagnostics.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alpha::{modular, quasinorm, AlphaFunction, IntegrandFunction, Trend};
use crate::error::{precondition, Result};
use crate::path::PathGrid;
use crate::quad::Simpson;
use crate::rng::RandomStream;
use crate::schemes::{weighted_li, weighted_sum, SchemeConfig};
use crate::verify::{factorization_distance, spearman, try_ensemble, MonteCarlo, FACTORIZATION_STDERR_MULTIPLE};

/// Computed measures below this count as Lebesgue-null.
pub const NULL_MEASURE: f64 = 1e-12;
/// Allowed spread of the fitted exponents across `r`.
pub const ETA_SPREAD: f64 = 0.1;

/// One draw of `Σ_{k=1}^{2^n} (2^{-n})^{1/α(k/2^n)} f(k/2^n) X(k, n)`.
pub fn sample_integral(
    f: &IntegrandFunction,
    af: &AlphaFunction,
    n: u32,
    stream: RandomStream,
) -> Result<f64> {
    let cfg = SchemeConfig::new(n, af.clone(), stream)?;
    Ok(weighted_sum(&cfg, |x| f.eval(x)))
}

/// Joint draw of several integrals from the same `X(k, n)`.
pub fn sample_integrals(
    fs: &[IntegrandFunction],
    af: &AlphaFunction,
    n: u32,
    stream: RandomStream,
) -> Result<Vec<f64>> {
    let cfg = SchemeConfig::new(n, af.clone(), stream)?;
    Ok(fs.iter().map(|f| weighted_sum(&cfg, |x| f.eval(x))).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub norms: Vec<f64>,
    pub threshold: f64,
    pub verdict: Trend,
}

/// `‖f_j − f‖_α` for each `j`.
///
/// Convergence is reported when the norms trend downwards (negative rank
/// correlation with `j`) and the last one is below `threshold` times the
/// first, or when every norm vanishes.
pub fn integrand_convergence(
    f_seq: &[IntegrandFunction],
    f: &IntegrandFunction,
    af: &AlphaFunction,
    threshold: f64,
) -> Result<ConvergenceReport> {
    let norms = f_seq
        .iter()
        .map(|fj| quasinorm(&fj.minus(f), af))
        .collect::<Result<Vec<_>>>()?;
    let index: Vec<f64> = (0..norms.len()).map(|i| i as f64).collect();
    let verdict = match (norms.first(), norms.last()) {
        (Some(_), Some(&last)) if norms.iter().all(|&v| v == 0.0) && last == 0.0 => Trend::Satisfied,
        (Some(&first), Some(&last)) => {
            let rho = spearman(&index, &norms);
            if rho < 0.0 && last < threshold * first {
                Trend::Satisfied
            } else if rho > 0.0 {
                Trend::Violated
            } else {
                Trend::Inconclusive
            }
        }
        _ => Trend::Inconclusive,
    };
    Ok(ConvergenceReport {
        norms,
        threshold,
        verdict,
    })
}

/// Lebesgue measure of `{x ∈ [0, 1] : f1(x) f2(x) ≠ 0}`.
pub fn overlap_measure(f1: &IntegrandFunction, f2: &IntegrandFunction) -> f64 {
    let mut breaks = f1.breakpoints();
    breaks.extend(f2.breakpoints());
    breaks.sort_by(|a, b| a.total_cmp(b));
    breaks.dedup();
    let exact = f1.is_piecewise_constant() && f2.is_piecewise_constant();
    let mut cuts = vec![0.0];
    cuts.extend(breaks);
    cuts.push(1.0);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            if exact {
                let m = 0.5 * (lo + hi);
                if f1.eval(m) * f2.eval(m) != 0.0 {
                    hi - lo
                } else {
                    0.0
                }
            } else {
                const STEPS: usize = 4096;
                let h = (hi - lo) / STEPS as f64;
                (0..STEPS)
                    .filter(|&i| {
                        let m = lo + (i as f64 + 0.5) * h;
                        f1.eval(m) * f2.eval(m) != 0.0
                    })
                    .count() as f64
                    * h
            }
        })
        .sum()
}

/// Whether `f1 f2 ≥ 0` almost everywhere.
fn same_sign(f1: &IntegrandFunction, f2: &IntegrandFunction) -> bool {
    let mut pts: Vec<f64> = (0..4096).map(|i| (i as f64 + 0.5) / 4096.0).collect();
    let mut breaks = f1.breakpoints();
    breaks.extend(f2.breakpoints());
    let mut cuts = vec![0.0];
    cuts.extend(breaks);
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.total_cmp(b));
    pts.extend(cuts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    pts.iter().all(|&x| f1.eval(x) * f2.eval(x) >= 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndependenceVerdict {
    Independent,
    Dependent,
    /// Neither `b < 2` nor `f1 f2 ≥ 0` a.e. holds.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub upper_alpha_below_two: bool,
    pub same_sign: bool,
    pub overlap_measure: f64,
    pub analytic: IndependenceVerdict,
    pub factorization_distance: Option<f64>,
    pub threshold: f64,
    pub empirical: Option<IndependenceVerdict>,
}

fn analytic_verdict(
    f1: &IntegrandFunction,
    f2: &IntegrandFunction,
    af: &AlphaFunction,
) -> (bool, bool, f64, IndependenceVerdict) {
    let below_two = af.upper() < 2.0;
    let sign = same_sign(f1, f2);
    let overlap = overlap_measure(f1, f2);
    let verdict = if !below_two && !sign {
        IndependenceVerdict::Inapplicable
    } else if overlap < NULL_MEASURE {
        IndependenceVerdict::Independent
    } else {
        IndependenceVerdict::Dependent
    };
    (below_two, sign, overlap, verdict)
}

/// Analytic disjoint-support criterion and, when `mc` is given, the
/// empirical factorization distance of the joint ECF.
pub fn independence_test(
    f1: &IntegrandFunction,
    f2: &IntegrandFunction,
    af: &AlphaFunction,
    mc: Option<&MonteCarlo>,
) -> Result<IndependenceReport> {
    let (below_two, sign, overlap, analytic) = analytic_verdict(f1, f2, af);
    let (distance, threshold, empirical) = match mc {
        Some(mc) if analytic != IndependenceVerdict::Inapplicable => {
            let fs = [f1.clone(), f2.clone()];
            let rows = try_ensemble(mc.ensemble, mc.stream, |s| sample_integrals(&fs, af, mc.n, s))?;
            let d = factorization_distance(&rows, &mc.theta_grid)?;
            let thr = FACTORIZATION_STDERR_MULTIPLE * mc.stderr();
            let v = if d < thr {
                IndependenceVerdict::Independent
            } else {
                IndependenceVerdict::Dependent
            };
            (Some(d), thr, Some(v))
        }
        Some(mc) => (None, FACTORIZATION_STDERR_MULTIPLE * mc.stderr(), None),
        None => (None, 0.0, None),
    };
    Ok(IndependenceReport {
        upper_alpha_below_two: below_two,
        same_sign: sign,
        overlap_measure: overlap,
        analytic,
        factorization_distance: distance,
        threshold,
        empirical,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseReport {
    /// `(i, k, overlap measure, verdict)` for each pair `i < k`.
    pub pairs: Vec<(usize, usize, f64, IndependenceVerdict)>,
    pub offending: Vec<(usize, usize)>,
    pub inapplicable: Vec<(usize, usize)>,
    pub verdict: IndependenceVerdict,
}

/// Joint independence holds iff every pair has a null overlap.
pub fn pairwise_independence(fs: &[IntegrandFunction], af: &AlphaFunction) -> PairwiseReport {
    let mut pairs = Vec::new();
    let mut offending = Vec::new();
    let mut inapplicable = Vec::new();
    for i in 0..fs.len() {
        for k in i + 1..fs.len() {
            let (_, _, overlap, v) = analytic_verdict(&fs[i], &fs[k], af);
            match v {
                IndependenceVerdict::Dependent => offending.push((i, k)),
                IndependenceVerdict::Inapplicable => inapplicable.push((i, k)),
                IndependenceVerdict::Independent => {}
            }
            pairs.push((i, k, overlap, v));
        }
    }
    let verdict = if !inapplicable.is_empty() {
        IndependenceVerdict::Inapplicable
    } else if offending.is_empty() {
        IndependenceVerdict::Independent
    } else {
        IndependenceVerdict::Dependent
    };
    PairwiseReport {
        pairs,
        offending,
        inapplicable,
        verdict,
    }
}

type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type BreaksFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Càdlàg weight `w` on `[0, 1]` of the weighted motion.
#[derive(Clone, Debug)]
pub struct WeightFunction(IntegrandFunction);

impl WeightFunction {
    pub fn new(f: IntegrandFunction) -> Self {
        Self(f)
    }

    pub fn constant(c: f64) -> Self {
        Self(IntegrandFunction::Constant(c))
    }

    pub fn closure<F>(label: impl Into<String>, breaks: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self(IntegrandFunction::closure(label, breaks, f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    pub fn as_integrand(&self) -> &IntegrandFunction {
        &self.0
    }

    /// `C_w = sup_z |w(z)|^{α(z)}` over a dense grid plus breakpoints.
    pub fn c_w(&self, af: &AlphaFunction) -> f64 {
        let mut pts: Vec<f64> = (0..=8192).map(|i| i as f64 / 8192.0).collect();
        pts.extend(self.0.breakpoints());
        pts.extend(af.breakpoints());
        pts.iter()
            .map(|&z| self.eval(z).abs().powf(af.value(z)))
            .fold(0.0, f64::max)
    }
}

/// Kernel `f(t, x)` of a multistable integral process `X(t) = ∫ f(t, x) dM_α`.
#[derive(Clone)]
pub struct KernelFunction {
    f: KernelFn,
    breaks: BreaksFn,
    label: String,
}

impl fmt::Debug for KernelFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "KernelFunction({})", self.label)
    }
}

impl KernelFunction {
    /// `breaks(t)` lists the jumps and kinks of the slice `f(t, ·)`.
    pub fn new<F, B>(label: impl Into<String>, f: F, breaks: B) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        B: Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            breaks: Arc::new(breaks),
            label: label.into(),
        }
    }

    /// `f(t, x) = w(x) 1_{[0, t]}(x)`.
    pub fn weighted_indicator(w: &WeightFunction) -> Self {
        let wf: WeightFn = {
            let w = w.clone();
            Arc::new(move |x| w.eval(x))
        };
        let wb = w.as_integrand().breakpoints();
        Self::new(
            "weighted indicator",
            move |t, x| if (0.0..=t).contains(&x) { wf(x) } else { 0.0 },
            move |t| {
                let mut b = wb.clone();
                b.push(t);
                b
            },
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        (self.f)(t, x)
    }

    pub fn slice(&self, t: f64) -> IntegrandFunction {
        let f = Arc::clone(&self.f);
        IntegrandFunction::closure(format!("{}(t={t})", self.label), (self.breaks)(t), move |x| f(t, x))
    }

    /// `∫ |c (f(t, s) − f(v, s))|^{α(s)} ds`.
    pub fn difference_modular(&self, af: &AlphaFunction, t: f64, v: f64, c: f64) -> Result<f64> {
        if t == v {
            return Ok(0.0);
        }
        let (st, sv) = (self.slice(t), self.slice(v));
        modular(af, &[(c, &st), (-c, &sv)])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoelderEntry {
    pub t: f64,
    pub v: f64,
    pub modular: f64,
    pub modular_bound: f64,
    pub modular_ok: bool,
    /// Explicit constant `C_{a,b}` of the bound `C_{a,b} |t − v|^{η − bβ}`.
    pub c_ab: f64,
    pub bound: f64,
    pub empirical: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoelderReport {
    pub eta: f64,
    pub c: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub entries: Vec<HoelderEntry>,
    pub pass: bool,
}

/// The Billingsley chain: with `x = |t − v|^β`,
/// `P(|X(t) − X(v)| ≥ x) ≤ C (x/(a+1) + 2^{b+1}/((b+1) x^b)) |t − v|^η`.
///
/// Returns `(C_{a,b}, bound)` where `bound = C_{a,b} |t − v|^{η − bβ}`.
pub fn hoelder_bound(a: f64, b: f64, c: f64, eta: f64, beta: f64, h: f64) -> (f64, f64) {
    let x = h.powf(beta);
    let bound = c * (x / (a + 1.0) + 2f64.powf(b + 1.0) / ((b + 1.0) * x.powf(b))) * h.powf(eta);
    let c_ab = c * (x.powf(1.0 + b) / (a + 1.0) + 2f64.powf(b + 1.0) / (b + 1.0));
    (c_ab, bound)
}

/// Checks the modular condition `∫|f(t,s) − f(v,s)|^{α(s)} ds ≤ C|t − v|^η`
/// on each pair and, with `mc`, the empirical exceedance frequency of
/// `|X(t) − X(v)| ≥ |t − v|^β` against the explicit bound.
pub fn hoelder_bound_check(
    f: &KernelFunction,
    af: &AlphaFunction,
    eta: f64,
    c: f64,
    beta: f64,
    pairs: &[(f64, f64)],
    mc: Option<&MonteCarlo>,
) -> Result<HoelderReport> {
    let (a, b) = (af.lower(), af.upper());
    if !(beta > 0.0 && beta < 1.0f64.min(eta / b)) {
        return precondition(format!("beta = {beta} must lie in (0, min(1, eta/b))"));
    }
    let differences: Vec<IntegrandFunction> = pairs
        .iter()
        .map(|&(t, v)| f.slice(t).minus(&f.slice(v)))
        .collect();
    let draws = match mc {
        Some(mc) => Some(try_ensemble(mc.ensemble, mc.stream, |s| {
            sample_integrals(&differences, af, mc.n, s)
        })?),
        None => None,
    };
    let entries = pairs
        .iter()
        .enumerate()
        .map(|(i, &(t, v))| {
            let h = (t - v).abs();
            let m = f.difference_modular(af, t, v, 1.0)?;
            let modular_bound = c * h.powf(eta);
            let modular_ok = m <= modular_bound * (1.0 + 1e-9) + 1e-300;
            let (c_ab, bound) = if h > 0.0 {
                hoelder_bound(a, b, c, eta, beta, h)
            } else {
                (f64::NAN, 0.0)
            };
            let empirical = draws.as_ref().map(|rows| {
                if h == 0.0 {
                    return 0.0;
                }
                let x = h.powf(beta);
                let hits = rows
                    .iter()
                    .filter(|r| r[i].abs() >= x)
                    .count();
                hits as f64 / rows.len() as f64
            });
            let pass = modular_ok && empirical.is_none_or(|p| h == 0.0 || p <= bound);
            Ok(HoelderEntry {
                t,
                v,
                modular: m,
                modular_bound,
                modular_ok,
                c_ab,
                bound,
                empirical,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(HoelderReport {
        eta,
        c,
        beta,
        a,
        b,
        entries,
        pass,
    })
}

/// `Y(k/2^n) = Σ_{j≤k} (2^{-n})^{1/α(j/2^n)} w(j/2^n) X(j, n)`.
pub fn weighted_mslm(
    w: &WeightFunction,
    af: &AlphaFunction,
    n: u32,
    stream: RandomStream,
) -> Result<PathGrid> {
    let cfg = SchemeConfig::new(n, af.clone(), stream)?;
    Ok(weighted_li(&cfg, |x| w.eval(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalisabilityVerdict {
    StronglyLocalisable,
    NotEstablished,
    /// Fitted exponents vary too much across `r`.
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongLocalisabilityReport {
    pub x: f64,
    pub alpha_x: f64,
    pub r: Vec<f64>,
    pub pairs: Vec<(f64, f64)>,
    /// `lhs[i][p]`: left side of the modular condition at `r[i]`, pair `p`.
    pub lhs: Vec<Vec<f64>>,
    pub eta: Vec<f64>,
    pub c: Vec<f64>,
    pub eta_spread: f64,
    pub eta_threshold: f64,
    pub verdict: LocalisabilityVerdict,
    /// Quasinorm variant `‖(f(x+rt) − f(x+rv))/r^{1/α(x)}‖_α ≤ C|t − v|^η`
    /// with required `η > 1/a`.
    pub quasinorm_eta: Vec<f64>,
    pub quasinorm_threshold: f64,
    pub quasinorm_verdict: LocalisabilityVerdict,
    pub failures: Vec<String>,
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, (my - slope * mx).exp()))
}

fn verdict_from(etas: &[f64], threshold: f64) -> (f64, LocalisabilityVerdict) {
    if etas.is_empty() || etas.iter().any(|e| !e.is_finite()) {
        return (f64::NAN, LocalisabilityVerdict::NotEstablished);
    }
    let lo = etas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = etas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let v = if spread >= ETA_SPREAD {
        LocalisabilityVerdict::Unstable
    } else if lo > threshold {
        LocalisabilityVerdict::StronglyLocalisable
    } else {
        LocalisabilityVerdict::NotEstablished
    };
    (spread, v)
}

/// Evaluates the strong-localisability modular condition at `x` for each
/// `r` and `(t, v)` pair and fits `C |t − v|^η` per `r`.
pub fn strong_localisability_check(
    f: &KernelFunction,
    af: &AlphaFunction,
    x: f64,
    r_list: &[f64],
    pairs: &[(f64, f64)],
    independent_increments: bool,
) -> Result<StrongLocalisabilityReport> {
    for &r in r_list {
        for &(t, v) in pairs {
            if !(r > 0.0) || x + r * t.max(v) > 1.0 || x + r * t.min(v) < 0.0 {
                return precondition(format!("x + r t leaves [0, 1] at r = {r}, t = {t}, v = {v}"));
            }
        }
    }
    let alpha_x = af.eval(x)?;
    let diffs: Vec<f64> = pairs.iter().map(|&(t, v)| (t - v).abs()).collect();
    let mut failures = Vec::new();
    let mut lhs = Vec::with_capacity(r_list.len());
    let mut qn = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let c = r.powf(-1.0 / alpha_x);
        let mut row = Vec::with_capacity(pairs.len());
        let mut qrow = Vec::with_capacity(pairs.len());
        for &(t, v) in pairs {
            let (a, b) = (x + r * t, x + r * v);
            match f.difference_modular(af, a, b, c) {
                Ok(m) => row.push(m),
                Err(e) => {
                    failures.push(format!("r = {r}, t = {t}, v = {v}: {e}"));
                    row.push(f64::NAN);
                }
            }
            let g = f.slice(a).minus(&f.slice(b)).scaled(c);
            match quasinorm(&g, af) {
                Ok(q) => qrow.push(q),
                Err(e) => {
                    failures.push(format!("quasinorm r = {r}, t = {t}, v = {v}: {e}"));
                    qrow.push(f64::NAN);
                }
            }
        }
        lhs.push(row);
        qn.push(qrow);
    }
    let fits: Vec<Option<(f64, f64)>> = lhs.iter().map(|row| log_log_fit(&diffs, row)).collect();
    let eta: Vec<f64> = fits.iter().map(|f| f.map_or(f64::NAN, |p| p.0)).collect();
    let c: Vec<f64> = fits.iter().map(|f| f.map_or(f64::NAN, |p| p.1)).collect();
    let eta_threshold = if independent_increments { 0.5 } else { 1.0 };
    let (eta_spread, verdict) = verdict_from(&eta, eta_threshold);
    let quasinorm_eta: Vec<f64> = qn
        .iter()
        .map(|row| log_log_fit(&diffs, row).map_or(f64::NAN, |p| p.0))
        .collect();
    let quasinorm_threshold = 1.0 / af.lower();
    let (_, quasinorm_verdict) = verdict_from(&quasinorm_eta, quasinorm_threshold);
    Ok(StrongLocalisabilityReport {
        x,
        alpha_x,
        r: r_list.to_vec(),
        pairs: pairs.to_vec(),
        lhs,
        eta,
        c,
        eta_spread,
        eta_threshold,
        verdict,
        quasinorm_eta,
        quasinorm_threshold,
        quasinorm_verdict,
        failures,
    })
}

/// `(λ/2) ∫_{-2/λ}^{2/λ} (1 − φ(θ)) dθ` for a real characteristic function `φ`.
pub fn billingsley_bound(cf: impl Fn(f64) -> f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return precondition("lambda must be positive");
    }
    let w = 2.0 / lambda;
    let v = Simpson::default().integrate(|t| 1.0 - cf(t), -w, w, &[0.0])?;
    Ok(0.5 * lambda * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::simulate_li;

    fn lin() -> AlphaFunction {
        AlphaFunction::linear(1.2, 0.6).unwrap()
    }

    #[test]
    fn integral_of_zero_and_indicator() {
        let s = RandomStream::new(3, 4);
        assert_eq!(sample_integral(&IntegrandFunction::zero(), &lin(), 8, s).unwrap(), 0.0);
        let li = simulate_li(&SchemeConfig::new(8, lin(), s).unwrap());
        let u = 0.3;
        let v = sample_integral(&IntegrandFunction::indicator(0.0, u), &lin(), 8, s).unwrap();
        assert!((v - li.value_at(u)).abs() < 1e-12);
    }

    #[test]
    fn convergence_examples() {
        let af = AlphaFunction::constant(1.5).unwrap();
        let f = IntegrandFunction::indicator(0.0, 0.4);
        let same = vec![f.clone(); 4];
        let r = integrand_convergence(&same, &f, &af, 0.5).unwrap();
        assert!(r.norms.iter().all(|&v| v == 0.0));
        assert_eq!(r.verdict, Trend::Satisfied);
        let seq: Vec<_> = (1..=6)
            .map(|j| f.plus(&IntegrandFunction::Constant(1.0 / j as f64)))
            .collect();
        let r = integrand_convergence(&seq, &f, &af, 0.5).unwrap();
        for (j, v) in r.norms.iter().enumerate() {
            assert!((v - 1.0 / (j + 1) as f64).abs() < 1e-10);
        }
        let seq: Vec<_> = (1..=6).map(|j| IntegrandFunction::indicator(0.0, 1.0 / j as f64)).collect();
        let r = integrand_convergence(&seq, &IntegrandFunction::zero(), &af, 0.5).unwrap();
        for (j, v) in r.norms.iter().enumerate() {
            assert!((v - (1.0 / (j + 1) as f64).powf(1.0 / 1.5)).abs() < 1e-10);
        }
        assert_eq!(r.verdict, Trend::Satisfied);
    }

    #[test]
    fn overlap_examples() {
        let af = lin();
        let a = IntegrandFunction::indicator(0.0, 0.5);
        let b = IntegrandFunction::indicator_left_open(0.5, 1.0);
        let r = independence_test(&a, &b, &af, None).unwrap();
        assert_eq!(r.analytic, IndependenceVerdict::Independent);
        let one = IntegrandFunction::indicator(0.0, 1.0);
        let r = independence_test(&one, &one, &af, None).unwrap();
        assert_eq!(r.overlap_measure, 1.0);
        assert_eq!(r.analytic, IndependenceVerdict::Dependent);
        let r = independence_test(&a, &IntegrandFunction::point(0.5), &af, None).unwrap();
        assert_eq!(r.analytic, IndependenceVerdict::Independent);
        let two = AlphaFunction::constant(2.0).unwrap();
        let neg = IntegrandFunction::Constant(-1.0);
        let r = independence_test(&one, &neg, &two, None).unwrap();
        assert_eq!(r.analytic, IndependenceVerdict::Inapplicable);
    }

    #[test]
    fn pairwise_examples() {
        let af = lin();
        let thirds = vec![
            IntegrandFunction::indicator(0.0, 1.0 / 3.0),
            IntegrandFunction::indicator_left_open(1.0 / 3.0, 2.0 / 3.0),
            IntegrandFunction::indicator_left_open(2.0 / 3.0, 1.0),
        ];
        assert_eq!(pairwise_independence(&thirds, &af).verdict, IndependenceVerdict::Independent);
        let mixed = vec![
            IntegrandFunction::indicator(0.0, 0.3),
            IntegrandFunction::indicator_left_open(0.6, 1.0),
            IntegrandFunction::indicator(0.2, 0.7),
        ];
        let r = pairwise_independence(&mixed, &af);
        assert_eq!(r.verdict, IndependenceVerdict::Dependent);
        assert_eq!(r.offending, vec![(0, 2), (1, 2)]);
        assert_eq!(pairwise_independence(&thirds[..1], &af).verdict, IndependenceVerdict::Independent);
    }

    #[test]
    fn weighted_cases() {
        let s = RandomStream::new(9, 9);
        let z = weighted_mslm(&WeightFunction::constant(0.0), &lin(), 6, s).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
        let one = weighted_mslm(&WeightFunction::constant(1.0), &lin(), 6, s).unwrap();
        assert_eq!(one, simulate_li(&SchemeConfig::new(6, lin(), s).unwrap()));
        assert!((WeightFunction::constant(2.0).c_w(&lin()) - 2f64.powf(1.8)).abs() < 1e-12);
    }

    #[test]
    fn hoelder_modular_for_weighted_kernel() {
        let w = WeightFunction::closure("1+x", vec![], |x| 1.0 + x);
        let af = lin();
        let k = KernelFunction::weighted_indicator(&w);
        let cw = w.c_w(&af);
        let rep = hoelder_bound_check(&k, &af, 1.0, cw, 0.4, &[(0.5, 0.25), (0.3, 0.3)], None).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.entries[1].modular, 0.0);
        assert!(hoelder_bound_check(&k, &af, 1.0, cw, 0.7, &[(0.5, 0.25)], None).is_err());
    }

    #[test]
    fn strong_localisability_exact_for_constant_alpha() {
        let af = AlphaFunction::constant(1.5).unwrap();
        let k = KernelFunction::weighted_indicator(&WeightFunction::constant(1.0));
        let pairs = [(0.5, 0.25), (1.0, 0.0), (0.75, 0.5), (0.2, 0.1)];
        let rep = strong_localisability_check(&k, &af, 0.3, &[0.25, 0.125], &pairs, true).unwrap();
        for row in &rep.lhs {
            for (m, &(t, v)) in row.iter().zip(&pairs) {
                assert!((m - (t - v)).abs() < 1e-9, "{m} vs {}", t - v);
            }
        }
        for e in &rep.eta {
            assert!((e - 1.0).abs() < 1e-9);
        }
        assert_eq!(rep.verdict, LocalisabilityVerdict::StronglyLocalisable);
        let flat = KernelFunction::new("flat", |_, x| x, |_| vec![]);
        let rep = strong_localisability_check(&flat, &af, 0.3, &[0.25], &pairs, true).unwrap();
        assert!(rep.lhs[0].iter().all(|&m| m == 0.0));
    }

    #[test]
    fn billingsley_examples() {
        assert_eq!(billingsley_bound(|_| 1.0, 1.0).unwrap(), 0.0);
        let b = billingsley_bound(|t: f64| (-t.abs()).exp(), 2.0).unwrap();
        assert!((b - 2.0 * (-1.0f64).exp()).abs() < 1e-9);
        // Cauchy tail P(|X| >= 2) = 1 - 2 atan(2)/π
        assert!(b >= 1.0 - 2.0 * 2f64.atan() / std::f64::consts::PI);
    }
}
