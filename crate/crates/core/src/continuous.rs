//! Continuous symmetric stable processes from the triangle (Faber–Schauder)
//! basis, and the continuous multistable approximation `S_n`.
//!
//! `Z_{jk}` is stored at draw address `2^j − 1 + k`, so truncated series at
//! different levels `J` refine one another draw by draw.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::AlphaFunction;
use crate::error::{domain, precondition, Result};
use crate::path::PathGrid;
use crate::rng::{DrawCursor, RandomStream, MAX_LANES};
use crate::stable::symmetric_from_uniforms;

pub const DEFAULT_LEVELS: u32 = 16;
pub const MAX_LEVELS: u32 = 30;
/// Stopping tolerance for the scale-parameter series.
const SCALE_TAIL_TOL: f64 = 1e-14;

/// `2t` on `[0, 1/2)`, `2 − 2t` on `[1/2, 1]`, zero elsewhere.
#[inline]
pub fn triangle(t: f64) -> f64 {
    if (0.0..0.5).contains(&t) {
        2.0 * t
    } else if (0.5..=1.0).contains(&t) {
        2.0 - 2.0 * t
    } else {
        0.0
    }
}

/// `φ(2^j t − k)`.
pub fn triangle_jk(j: u32, k: u64, t: f64) -> Result<f64> {
    if j > 62 || k >= 1u64 << j {
        return domain(format!("shift k = {k} outside 0..2^{j}"));
    }
    Ok(triangle(2f64.powi(j as i32) * t - k as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousStableConfig {
    pub alpha: f64,
    pub d: f64,
    pub levels: u32,
    /// Allow the borderline `d = 1/α`, where the series converges only in
    /// `L^p` for `p < α`.
    #[serde(default)]
    pub lp_mode: bool,
}

impl ContinuousStableConfig {
    pub fn new(alpha: f64, d: f64, levels: u32) -> Result<Self> {
        let cfg = Self {
            alpha,
            d,
            levels,
            lp_mode: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn lp(alpha: f64, levels: u32) -> Result<Self> {
        let cfg = Self {
            alpha,
            d: 1.0 / alpha,
            levels,
            lp_mode: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return domain(format!("alpha = {} must lie in (0, 2]", self.alpha));
        }
        if self.levels > MAX_LEVELS {
            return domain(format!("J = {} exceeds {MAX_LEVELS}", self.levels));
        }
        let critical = 1.0 / self.alpha;
        let borderline = (self.d - critical).abs() <= 1e-12 * critical;
        if borderline {
            if !self.lp_mode {
                return domain("d = 1/alpha is only allowed in L^p mode");
            }
        } else if !(self.d > critical) {
            return domain(format!("d = {} must exceed 1/alpha = {critical}", self.d));
        }
        Ok(())
    }

    /// Smallest `J` for which the a.s. tail bound `Σ_{j>J} 2^{-j(d−c)}`,
    /// with `c` just above `1/α`, falls below `tol`.
    pub fn levels_for_tolerance(alpha: f64, d: f64, tol: f64) -> u32 {
        let c = 1.0 / alpha + 0.25 * (d - 1.0 / alpha);
        let rate = d - c;
        if !(rate > 0.0) || !(tol > 0.0) {
            return DEFAULT_LEVELS;
        }
        let q = 2f64.powf(-rate);
        (1..=MAX_LEVELS)
            .find(|&j| q.powi(j as i32 + 1) / (1.0 - q) < tol)
            .unwrap_or(MAX_LEVELS)
    }

    fn coefficient(&self, j: u32) -> f64 {
        (-(j as f64) * self.d * LN_2).exp()
    }
}

/// Reads `Z_{jk}` by address from one lane.
pub struct BasisDraws {
    alpha: f64,
    cursor: DrawCursor,
}

impl BasisDraws {
    pub fn new(alpha: f64, stream: RandomStream, lane: u64) -> Self {
        Self {
            alpha,
            cursor: stream.lane(lane),
        }
    }

    pub fn z(&mut self, j: u32, k: u64) -> f64 {
        let address = (1u64 << j) - 1 + k;
        symmetric_from_uniforms(self.alpha, self.cursor.pair_at(address))
    }
}

/// `X_{J}(t) = Σ_{j≤J} Σ_k 2^{-jd} Z_{jk} φ_{jk}(t)` at each `t` in `times`,
/// drawing only the `Z_{jk}` whose tent is non-zero at some requested time.
pub fn evaluate_series(
    cfg: &ContinuousStableConfig,
    top_level: u32,
    times: &[f64],
    draws: &mut BasisDraws,
) -> Vec<f64> {
    let mut out = vec![0.0; times.len()];
    for j in 0..=top_level {
        let scale = 2f64.powi(j as i32);
        let cells = 1u64 << j;
        let coef = cfg.coefficient(j);
        let mut cached: Option<(u64, f64)> = None;
        for (i, &t) in times.iter().enumerate() {
            let x = scale * t;
            let k = x.floor();
            if k < 0.0 || k >= cells as f64 {
                continue;
            }
            let phi = triangle(x - k);
            if phi == 0.0 {
                continue;
            }
            let k = k as u64;
            let z = match cached {
                Some((ck, z)) if ck == k => z,
                _ => {
                    let z = draws.z(j, k);
                    cached = Some((k, z));
                    z
                }
            };
            out[i] += coef * z * phi;
        }
    }
    out
}

/// One path of the truncated triangle-series process on `t_grid`.
pub fn sample_continuous_stable(
    cfg: &ContinuousStableConfig,
    t_grid: &[f64],
    stream: RandomStream,
) -> Result<PathGrid> {
    cfg.validate()?;
    if let Some(t) = t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return domain(format!("time {t} outside [0, 1]"));
    }
    let mut draws = BasisDraws::new(cfg.alpha, stream, 0);
    let values = evaluate_series(cfg, cfg.levels, t_grid, &mut draws);
    PathGrid::new(t_grid.to_vec(), values)
}

/// Dyadic grid `{m 2^{-level}}` on `[0, 1]`.
pub fn dyadic_grid(level: u32) -> Vec<f64> {
    let n = 1u64 << level;
    (0..=n).map(|m| m as f64 / n as f64).collect()
}

/// Level increment of one draw: the sup of `|X_j − X_{j−1}|` over the
/// dyadic grid of mesh `2^{-(j+1)}`, next to `2^{-jd} max_k |Z_{jk}|`.
pub fn level_increment_sup(
    cfg: &ContinuousStableConfig,
    j: u32,
    stream: RandomStream,
) -> Result<(f64, f64)> {
    cfg.validate()?;
    if j > cfg.levels {
        return domain(format!("level {j} beyond truncation J = {}", cfg.levels));
    }
    let grid = dyadic_grid(j + 1);
    let mut draws = BasisDraws::new(cfg.alpha, stream, 0);
    let upper = evaluate_series(cfg, j, &grid, &mut draws);
    let lower = if j == 0 {
        vec![0.0; grid.len()]
    } else {
        evaluate_series(cfg, j - 1, &grid, &mut draws)
    };
    let sup = upper
        .iter()
        .zip(&lower)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let max_z = (0..1u64 << j)
        .map(|k| draws.z(j, k).abs())
        .fold(0.0, f64::max);
    Ok((sup, cfg.coefficient(j) * max_z))
}

fn scale_terms(cfg: &ContinuousStableConfig, t: f64, top: Option<u32>) -> f64 {
    let a = cfg.alpha;
    let ratio = 2f64.powf(-a * cfg.d);
    let mut sum = 0.0;
    let mut j = 0u32;
    loop {
        if let Some(top) = top {
            if j > top {
                break;
            }
        } else if j > 0 && ratio.powi(j as i32) / (1.0 - ratio) < SCALE_TAIL_TOL {
            break;
        }
        let x = 2f64.powi(j as i32) * t;
        let k = x.floor();
        if k >= 0.0 && k < 2f64.powi(j as i32) {
            let phi = triangle(x - k);
            if phi > 0.0 {
                sum += (cfg.coefficient(j) * phi).powf(a);
            }
        }
        j += 1;
        if j > 2000 {
            break;
        }
    }
    sum
}

/// `σ(t)` with `σ^α(t) = Σ_j Σ_k (2^{-jd} φ(2^j t − k))^α`.
pub fn scale_parameter(cfg: &ContinuousStableConfig, t: f64) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("time {t} outside [0, 1]"));
    }
    Ok(scale_terms(cfg, t, None).powf(1.0 / cfg.alpha))
}

/// Scale parameter of the series truncated at level `J`.
pub fn truncated_scale_parameter(cfg: &ContinuousStableConfig, t: f64) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("time {t} outside [0, 1]"));
    }
    Ok(scale_terms(cfg, t, Some(cfg.levels)).powf(1.0 / cfg.alpha))
}

/// The bounds `φ(t)^{1/α} ≤ σ(t) ≤ (1 − 2^{-αd})^{-1/α}`.
pub fn scale_bounds(cfg: &ContinuousStableConfig, t: f64) -> (f64, f64) {
    let a = cfg.alpha;
    (
        triangle(t).powf(1.0 / a),
        (1.0 / (1.0 - 2f64.powf(-a * cfg.d))).powf(1.0 / a),
    )
}

/// Monte-Carlo estimate of `P(max_{k<2^j} |Z_{jk}| > 2^{jc})`.
pub fn max_deviation_probability(
    alpha: f64,
    c: f64,
    j: u32,
    n_mc: usize,
    stream: RandomStream,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("alpha = {alpha} must lie in (0, 2)"));
    }
    if !(c > 1.0 / alpha) {
        return domain(format!("c = {c} must exceed 1/alpha"));
    }
    if j > MAX_LEVELS {
        return domain(format!("level {j} exceeds {MAX_LEVELS}"));
    }
    if n_mc == 0 {
        return precondition("need at least one Monte-Carlo replicate");
    }
    let threshold = 2f64.powf(j as f64 * c);
    let hits = (0..n_mc as u64)
        .into_par_iter()
        .map(|i| {
            let mut draws = BasisDraws::new(alpha, stream.replicate(i), 0);
            (0..1u64 << j).any(|k| draws.z(j, k).abs() > threshold) as u64
        })
        .sum::<u64>();
    Ok(hits as f64 / n_mc as f64)
}

/// Estimate of `∫_0^1 E|X_j(t) − X_{j−1}(t)|^p dt` over `n_mc` draws,
/// with `t` on a midpoint grid of `t_points` nodes.
pub fn level_moment(
    cfg: &ContinuousStableConfig,
    j: u32,
    p: f64,
    n_mc: usize,
    t_points: usize,
    stream: RandomStream,
) -> Result<f64> {
    cfg.validate()?;
    if !(p > 0.0) || n_mc == 0 || t_points == 0 {
        return precondition("level moment needs p > 0 and non-empty samples");
    }
    let ts: Vec<f64> = (0..t_points)
        .map(|m| (m as f64 + 0.5) / t_points as f64)
        .collect();
    let coef = cfg.coefficient(j);
    let cells = 2f64.powi(j as i32);
    let total: f64 = (0..n_mc as u64)
        .into_par_iter()
        .map(|i| {
            let mut draws = BasisDraws::new(cfg.alpha, stream.replicate(i), 0);
            ts.iter()
                .map(|&t| {
                    let x = cells * t;
                    let k = x.floor();
                    (coef * draws.z(j, k as u64) * triangle(x - k)).abs().powf(p)
                })
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(total / (n_mc * t_points) as f64)
}

/// Per-segment basis choice for `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentBasis {
    pub d: f64,
    pub levels: u32,
}

impl Default for SegmentBasis {
    fn default() -> Self {
        Self {
            d: 2.0,
            levels: DEFAULT_LEVELS,
        }
    }
}

impl SegmentBasis {
    fn config(&self, alpha: f64) -> Result<ContinuousStableConfig> {
        ContinuousStableConfig::new(alpha, self.d, self.levels)
    }
}

/// Normalising coefficients `c_k = (2^{-n})^{1/α(k/2^n)} / σ̃_k(2^{-n})` of
/// the cells of `S_n`.
///
/// Segment processes are time-dilated, `X̃(t) = X(t/2)`, so that their
/// scale `σ̃(t) = σ(t/2)` is positive on `(0, 1]`; `σ` is the scale of the
/// truncated series actually simulated.
pub fn sn_coefficients(n: u32, af: &AlphaFunction, basis: SegmentBasis) -> Result<Vec<f64>> {
    check_sn(n, af)?;
    let cells = 1u64 << n;
    let h = 1.0 / cells as f64;
    (0..cells)
        .map(|k| {
            let a = af.value(k as f64 * h);
            let cfg = basis.config(a)?;
            let sigma = truncated_scale_parameter(&cfg, 0.5 * h)?;
            if !(sigma > 0.0) {
                return domain(format!("segment scale vanishes in cell {k}"));
            }
            Ok(h.powf(1.0 / a) / sigma)
        })
        .collect()
}

fn check_sn(n: u32, af: &AlphaFunction) -> Result<()> {
    if !(1..=24).contains(&n) || (1u64 << n) > MAX_LANES {
        return domain(format!("level n = {n} must lie in 1..=24"));
    }
    let (lo, hi) = af.domain();
    if lo > 0.0 || hi < 1.0 {
        return domain("the stability function must be defined on [0, 1]");
    }
    Ok(())
}

/// Continuous approximation
/// `S_n(u) = Σ_{k<K} c_k X̃_k(2^{-n}) + c_K X̃_K(u − K/2^n)`, `K = ⌊2^n u⌋`.
///
/// Cell `k` draws its segment process from lane `k` of `stream`.
pub fn simulate_sn(
    n: u32,
    af: &AlphaFunction,
    basis: SegmentBasis,
    stream: RandomStream,
    t_grid: &[f64],
) -> Result<PathGrid> {
    let coefs = sn_coefficients(n, af, basis)?;
    simulate_sn_with(n, af, basis, &coefs, stream, t_grid)
}

/// [`simulate_sn`] with precomputed coefficients from [`sn_coefficients`].
pub fn simulate_sn_with(
    n: u32,
    af: &AlphaFunction,
    basis: SegmentBasis,
    coefs: &[f64],
    stream: RandomStream,
    t_grid: &[f64],
) -> Result<PathGrid> {
    check_sn(n, af)?;
    let cells = 1u64 << n;
    if coefs.len() as u64 != cells {
        return precondition("one coefficient per cell is required");
    }
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return precondition("evaluation times must be strictly increasing");
    }
    if let Some(t) = t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return domain(format!("time {t} outside [0, 1]"));
    }
    let h = 1.0 / cells as f64;
    let top = t_grid.last().map_or(0, |&u| ((u * cells as f64).floor() as u64).min(cells));
    let mut values = vec![0.0; t_grid.len()];
    let mut running = 0.0;
    let mut i = 0;
    for k in 0..=top.min(cells - 1) {
        let a = af.value(k as f64 * h);
        let cfg = basis.config(a)?;
        let start = i;
        while i < t_grid.len() && ((t_grid[i] * cells as f64).floor() as u64) == k {
            i += 1;
        }
        // segment time s in [0, h) maps to series time s/2
        let mut local: Vec<f64> = t_grid[start..i]
            .iter()
            .map(|&u| 0.5 * (u - k as f64 * h))
            .collect();
        let needs_end = k < top;
        if needs_end {
            local.push(0.5 * h);
        }
        let mut draws = BasisDraws::new(a, stream, k);
        let x = evaluate_series(&cfg, cfg.levels, &local, &mut draws);
        for (m, idx) in (start..i).enumerate() {
            values[idx] = running + coefs[k as usize] * x[m];
        }
        if needs_end {
            running += coefs[k as usize] * x[x.len() - 1];
        }
    }
    // u = 1 lies past the last cell
    values[i..].fill(running);
    PathGrid::new(t_grid.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_values() {
        assert_eq!(triangle(0.25), 0.5);
        assert_eq!(triangle(0.75), 0.5);
        assert_eq!(triangle(0.5), 1.0);
        assert_eq!(triangle(2.0), 0.0);
        assert_eq!(triangle(-0.1), 0.0);
        assert_eq!(triangle_jk(1, 1, 0.75).unwrap(), 1.0);
        assert_eq!(triangle_jk(3, 0, 0.0).unwrap(), 0.0);
        assert!(triangle_jk(2, 4, 0.5).is_err());
        for j in 0..6u32 {
            for k in 0..1u64 << j {
                let w = 2f64.powi(-(j as i32));
                assert_eq!(triangle_jk(j, k, k as f64 * w).unwrap(), 0.0);
                assert_eq!(triangle_jk(j, k, (k + 1) as f64 * w).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn config_rules() {
        assert!(ContinuousStableConfig::new(1.5, 1.0, 8).is_ok());
        assert!(ContinuousStableConfig::new(1.5, 0.5, 8).is_err());
        assert!(ContinuousStableConfig::new(1.5, 1.0 / 1.5, 8).is_err());
        assert!(ContinuousStableConfig::lp(1.5, 8).is_ok());
        assert!(ContinuousStableConfig::new(2.5, 1.0, 8).is_err());
        assert!(ContinuousStableConfig::levels_for_tolerance(1.5, 1.0, 1e-3) > 0);
    }

    #[test]
    fn endpoints_vanish() {
        let cfg = ContinuousStableConfig::new(1.5, 1.0, 12).unwrap();
        for s in 0..5 {
            let p = sample_continuous_stable(&cfg, &[0.0, 0.3, 1.0], RandomStream::new(s, 0)).unwrap();
            assert_eq!(p.values()[0], 0.0);
            assert_eq!(p.values()[2], 0.0);
        }
    }

    #[test]
    fn level_identity() {
        let cfg = ContinuousStableConfig::new(1.5, 1.0, 10).unwrap();
        for j in 0..=10 {
            let (sup, bound) = level_increment_sup(&cfg, j, RandomStream::new(3, j as u64)).unwrap();
            assert!((sup - bound).abs() <= 1e-14, "j = {j}: {sup} vs {bound}");
        }
    }

    #[test]
    fn scale_parameter_values() {
        let cfg = ContinuousStableConfig::new(1.5, 1.0, 16).unwrap();
        assert_eq!(scale_parameter(&cfg, 0.0).unwrap(), 0.0);
        assert_eq!(scale_parameter(&cfg, 1.0).unwrap(), 0.0);
        assert!((scale_parameter(&cfg, 0.5).unwrap() - 1.0).abs() < 1e-14);
        // t = 1/4: φ(1/4) = 1/2 and level 1 peak
        let expect = (0.5f64.powf(1.5) + 0.5f64.powf(1.5)).powf(1.0 / 1.5);
        assert!((scale_parameter(&cfg, 0.25).unwrap() - expect).abs() < 1e-14);
        let (lo, hi) = scale_bounds(&cfg, 0.3);
        let s = scale_parameter(&cfg, 0.3).unwrap();
        assert!(lo <= s && s <= hi);
    }

    #[test]
    fn sn_boundaries_and_continuity() {
        let af = AlphaFunction::linear(1.2, 0.6).unwrap();
        let basis = SegmentBasis { d: 2.0, levels: 12 };
        let s = RandomStream::new(4, 1);
        let coarse = simulate_sn(3, &af, basis, s, &dyadic_grid(3)).unwrap();
        let fine = simulate_sn(3, &af, basis, s, &dyadic_grid(9)).unwrap();
        assert_eq!(coarse.values()[0], 0.0);
        for (m, v) in coarse.values().iter().enumerate() {
            assert!((fine.values()[m * 64] - v).abs() < 1e-12);
        }
        let coefs = sn_coefficients(3, &af, basis).unwrap();
        assert!(fine.max_jump() < coefs.iter().cloned().fold(0.0, f64::max));
    }

    #[test]
    fn max_deviation_trivial() {
        let p = max_deviation_probability(1.5, 10.0, 5, 200, RandomStream::new(1, 1)).unwrap();
        assert_eq!(p, 0.0);
        assert!(max_deviation_probability(1.5, 0.5, 5, 10, RandomStream::new(1, 1)).is_err());
    }
}
