//! Discrete approximations of the independent-increments multistable Lévy
//! motion: the deterministic-grid sum `L_I`, the random-index sum `L_R`
//! and the randomly normalised sum `L_C`, plus whole-line gluing and the
//! stable functional CLT.
//!
//! `X(j, n)` lives at draw address `2^n + j − 1` of lane 0, so a single
//! increment can be computed without simulating the whole path and agrees
//! exactly with the path computed from the same stream. With `nested` set
//! the address is taken from the reduced dyadic fraction `j/2^n`, so
//! `X(k, n)` and `X(2k, n + 1)` share their uniforms.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaFunction;
use crate::error::{domain, precondition, Result};
use crate::path::PathGrid;
use crate::rng::{DrawCursor, RandomStream};
use crate::stable::{poisson_arrivals, symmetric_from_uniforms, PoissonArrivals};

/// Largest supported resolution level.
pub const MAX_LEVEL: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Li,
    Lr,
    Lc,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Li, Scheme::Lr, Scheme::Lc];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Li => "li",
            Scheme::Lr => "lr",
            Scheme::Lc => "lc",
        }
    }

    pub fn simulate(self, cfg: &SchemeConfig) -> PathGrid {
        match self {
            Scheme::Li => simulate_li(cfg),
            Scheme::Lr => simulate_lr(cfg),
            Scheme::Lc => simulate_lc(cfg),
        }
    }

    /// Path values at the given times (step extension between nodes).
    pub fn values_at(self, cfg: &SchemeConfig, times: &[f64]) -> Result<Vec<f64>> {
        let ks = grid_indices(cfg, times)?;
        let top = ks.iter().copied().max().unwrap_or(0);
        Ok(match self {
            Scheme::Li => {
                let mut draws = LevelDraws::new(cfg, 0);
                ks.iter().map(|&k| draws.sum(0, k, |_| 1.0)).collect()
            }
            Scheme::Lr => {
                let arrivals = arrivals(cfg, top);
                let m: Vec<u64> = ks.iter().map(|&k| arrivals.gamma(k as usize).floor() as u64).collect();
                let sums = LevelDraws::new(cfg, 0).partial_sums(*m.iter().max().unwrap_or(&0), |_| 1.0);
                m.iter().map(|&j| sums[j as usize]).collect()
            }
            Scheme::Lc => {
                let shared = arrivals(cfg, cfg.cells()).gamma(cfg.cells() as usize);
                let mut draws = LevelDraws::new(cfg, 0).normalised_by(shared);
                ks.iter().map(|&k| draws.sum(0, k, |_| 1.0)).collect()
            }
        })
    }

    /// Increments `L(u2) − L(u1)` for each interval.
    pub fn increments(self, cfg: &SchemeConfig, intervals: &[(f64, f64)]) -> Result<Vec<f64>> {
        if self == Scheme::Li {
            return intervals.iter().map(|&(a, b)| li_increment(cfg, a, b)).collect();
        }
        let times: Vec<f64> = intervals.iter().flat_map(|&(a, b)| [a, b]).collect();
        let v = self.values_at(cfg, &times)?;
        Ok(v.chunks(2).map(|p| p[1] - p[0]).collect())
    }
}

impl std::str::FromStr for Scheme {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "li" => Ok(Scheme::Li),
            "lr" => Ok(Scheme::Lr),
            "lc" => Ok(Scheme::Lc),
            other => domain(format!("unknown scheme `{other}`")),
        }
    }
}

/// Level, stability function and stream of one scheme run.
///
/// `alpha` is the target function; `alpha_n`, when present, is the
/// level-`n` approximant actually used for sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub n: u32,
    pub alpha: AlphaFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_n: Option<AlphaFunction>,
    pub stream: RandomStream,
    #[serde(default)]
    pub nested: bool,
}

impl SchemeConfig {
    pub fn new(n: u32, alpha: AlphaFunction, stream: RandomStream) -> Result<Self> {
        let cfg = Self {
            n,
            alpha,
            alpha_n: None,
            stream,
            nested: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_approximant(mut self, alpha_n: AlphaFunction) -> Result<Self> {
        self.alpha_n = Some(alpha_n);
        self.validate()?;
        Ok(self)
    }

    pub fn with_nested(mut self, nested: bool) -> Self {
        self.nested = nested;
        self
    }

    pub fn with_stream(&self, stream: RandomStream) -> Self {
        Self {
            stream,
            ..self.clone()
        }
    }

    pub fn at_level(&self, n: u32) -> Result<Self> {
        let cfg = Self { n, ..self.clone() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > MAX_LEVEL {
            return domain(format!("level n = {} must lie in 1..={MAX_LEVEL}", self.n));
        }
        let (lo, hi) = self.alpha.domain();
        if lo > 0.0 || hi < 1.0 {
            return domain("the stability function must be defined on [0, 1]");
        }
        if let Some(an) = &self.alpha_n {
            let (lo, hi) = an.domain();
            if lo > 0.0 || hi < 1.0 {
                return domain("the approximant must be defined on [0, 1]");
            }
            if !self.sup_distance().is_finite() {
                return domain("the approximant is at infinite sup distance");
            }
        }
        Ok(())
    }

    /// `‖α_n − α‖_∞`, zero when no approximant is set.
    pub fn sup_distance(&self) -> f64 {
        self.alpha_n
            .as_ref()
            .map_or(0.0, |an| an.sup_distance(&self.alpha))
    }

    pub fn sampling_alpha(&self) -> &AlphaFunction {
        self.alpha_n.as_ref().unwrap_or(&self.alpha)
    }

    pub fn cells(&self) -> u64 {
        1u64 << self.n
    }
}

/// Draw address of `X(j, n)` inside its lane.
pub fn draw_address(n: u32, j: u64, nested: bool) -> u64 {
    if !nested {
        return (1u64 << n) + j - 1;
    }
    let tz = j.trailing_zeros().min(n);
    let reduced = j >> tz;
    (1u64 << (n - tz)) + reduced - 1
}

/// Reader for the draws `X(j, n)` of one unit segment.
///
/// Indices beyond `2^n` (only reachable in `L_R`) are read sequentially
/// from the overflow lane `lane + 1`.
struct LevelDraws<'a> {
    n: u32,
    nested: bool,
    af: &'a AlphaFunction,
    offset: f64,
    log_scale: f64,
    main: DrawCursor,
    overflow: Option<DrawCursor>,
    stream: RandomStream,
    lane: u64,
}

impl<'a> LevelDraws<'a> {
    fn new(cfg: &'a SchemeConfig, lane: u64) -> Self {
        Self::segment(cfg.n, cfg.nested, cfg.sampling_alpha(), 0.0, cfg.stream, lane)
    }

    fn segment(
        n: u32,
        nested: bool,
        af: &'a AlphaFunction,
        offset: f64,
        stream: RandomStream,
        lane: u64,
    ) -> Self {
        Self {
            n,
            nested,
            af,
            offset,
            log_scale: -(n as f64) * LN_2,
            main: stream.lane(lane),
            overflow: None,
            stream,
            lane,
        }
    }

    /// Replace the cell scale `2^{-n}` by `1/Γ`.
    fn normalised_by(mut self, gamma: f64) -> Self {
        self.log_scale = -gamma.ln();
        self
    }

    fn alpha(&self, j: u64) -> f64 {
        let cells = 1u64 << self.n;
        self.af.value(self.offset + j.min(cells) as f64 / cells as f64)
    }

    /// Scaled summand `s^{1/α_j} X(j, n)`.
    fn term(&mut self, j: u64) -> f64 {
        let a = self.alpha(j);
        let cells = 1u64 << self.n;
        let pair = if j <= cells {
            self.main.pair_at(draw_address(self.n, j, self.nested))
        } else {
            let lane = self.lane + 1;
            let stream = self.stream;
            self.overflow
                .get_or_insert_with(|| stream.lane(lane))
                .pair_at(j - cells - 1)
        };
        (self.log_scale / a).exp() * symmetric_from_uniforms(a, pair)
    }

    /// `Σ_{j=k1+1}^{k2} w(j) s^{1/α_j} X(j, n)`.
    fn sum(&mut self, k1: u64, k2: u64, w: impl Fn(u64) -> f64) -> f64 {
        let mut acc = 0.0;
        for j in k1 + 1..=k2 {
            let wj = w(j);
            if wj != 0.0 {
                acc += wj * self.term(j);
            }
        }
        acc
    }

    /// Running sums `S(0..=m)`.
    fn partial_sums(&mut self, m: u64, w: impl Fn(u64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(m as usize + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for j in 1..=m {
            let wj = w(j);
            if wj != 0.0 {
                acc += wj * self.term(j);
            }
            out.push(acc);
        }
        out
    }
}

fn grid_indices(cfg: &SchemeConfig, times: &[f64]) -> Result<Vec<u64>> {
    let cells = cfg.cells() as f64;
    times
        .iter()
        .map(|&u| {
            if !(0.0..=1.0).contains(&u) {
                return domain(format!("time {u} outside [0, 1]"));
            }
            Ok((u * cells).floor() as u64)
        })
        .collect()
}

fn arrivals(cfg: &SchemeConfig, count: u64) -> PoissonArrivals {
    poisson_arrivals(1.0, count as usize, cfg.stream.arrival_stream()).expect("unit rate")
}

/// `L_I(k/2^n) = Σ_{j≤k} (2^{-n})^{1/α_n(j/2^n)} X(j, n)`.
pub fn simulate_li(cfg: &SchemeConfig) -> PathGrid {
    let sums = LevelDraws::new(cfg, 0).partial_sums(cfg.cells(), |_| 1.0);
    PathGrid::uniform(cfg.cells(), sums)
}

/// `L_I(u2) − L_I(u1)` read directly from the draws of the cells in between.
pub fn li_increment(cfg: &SchemeConfig, u1: f64, u2: f64) -> Result<f64> {
    if u1 > u2 {
        return precondition(format!("increment needs u1 <= u2, got ({u1}, {u2})"));
    }
    let ks = grid_indices(cfg, &[u1, u2])?;
    Ok(LevelDraws::new(cfg, 0).sum(ks[0], ks[1], |_| 1.0))
}

/// `L_R(k/2^n) = Σ_{j≤⌊Γ_k⌋} (2^{-n})^{1/α_n(min(j/2^n, 1))} X(j, n)`.
pub fn simulate_lr(cfg: &SchemeConfig) -> PathGrid {
    let cells = cfg.cells();
    let arrivals = arrivals(cfg, cells);
    let top = arrivals.gamma(cells as usize).floor() as u64;
    let sums = LevelDraws::new(cfg, 0).partial_sums(top, |_| 1.0);
    let values = (0..=cells)
        .map(|k| sums[arrivals.gamma(k as usize).floor() as usize])
        .collect();
    PathGrid::uniform(cells, values)
}

/// `L_C(k/2^n) = Σ_{j≤k} (1/Γ_{2^n})^{1/α_n(j/2^n)} X(j, n)`.
pub fn simulate_lc(cfg: &SchemeConfig) -> PathGrid {
    let shared = arrivals(cfg, cfg.cells()).gamma(cfg.cells() as usize);
    simulate_lc_given(cfg, shared)
}

/// `L_C` with the shared arrival time fixed to `gamma`.
pub fn simulate_lc_given(cfg: &SchemeConfig, gamma: f64) -> PathGrid {
    let sums = LevelDraws::new(cfg, 0)
        .normalised_by(gamma)
        .partial_sums(cfg.cells(), |_| 1.0);
    PathGrid::uniform(cfg.cells(), sums)
}

/// Weighted `L_I`: `Σ_{j≤k} (2^{-n})^{1/α(j/2^n)} w(j/2^n) X(j, n)`.
pub(crate) fn weighted_li(cfg: &SchemeConfig, w: impl Fn(f64) -> f64) -> PathGrid {
    let cells = cfg.cells();
    let h = 1.0 / cells as f64;
    let sums = LevelDraws::new(cfg, 0).partial_sums(cells, |j| w(j as f64 * h));
    PathGrid::uniform(cells, sums)
}

/// `Σ_{j=1}^{2^n} (2^{-n})^{1/α(j/2^n)} f(j/2^n) X(j, n)`.
pub(crate) fn weighted_sum(cfg: &SchemeConfig, f: impl Fn(f64) -> f64) -> f64 {
    let cells = cfg.cells();
    let h = 1.0 / cells as f64;
    LevelDraws::new(cfg, 0).sum(0, cells, |j| f(j as f64 * h))
}

/// Whole-line motion on `[0, T]` glued from independent unit segments.
///
/// Segment `k` is an `L_I` simulation with `α_k(x) = α(x + k)`, drawn from
/// lane `2k` of `stream`; with `T = 1` the result equals [`simulate_li`].
pub fn glue_whole_line(af_global: &AlphaFunction, n: u32, stream: RandomStream) -> Result<PathGrid> {
    let (lo, hi) = af_global.domain();
    if lo != 0.0 || !(hi >= 1.0) || hi.fract() != 0.0 {
        return domain(format!(
            "gluing needs a stability function on [0, T] with integer T, got [{lo}, {hi}]"
        ));
    }
    if !(1..=MAX_LEVEL).contains(&n) {
        return domain(format!("level n = {n} must lie in 1..={MAX_LEVEL}"));
    }
    let segments = hi as u64;
    let cells = 1u64 << n;
    let mut values = Vec::with_capacity((segments * cells + 1) as usize);
    values.push(0.0);
    let mut base = 0.0;
    for k in 0..segments {
        let mut draws = LevelDraws::segment(n, false, af_global, k as f64, stream, 2 * k);
        let sums = draws.partial_sums(cells, |_| 1.0);
        values.extend(sums[1..].iter().map(|v| base + v));
        base += sums[cells as usize];
    }
    Ok(PathGrid::uniform(cells, values))
}

/// Partial-sum path `Σ_{k≤⌊n u⌋} n^{-1/α} Y_k` on the grid `{k/n}`.
pub fn simulate_stable_fclt(alpha: f64, n_terms: u64, stream: RandomStream) -> Result<PathGrid> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return domain(format!("alpha = {alpha} must lie in (0, 2]"));
    }
    if n_terms == 0 {
        return domain("the partial-sum path needs at least one term");
    }
    let scale = (n_terms as f64).powf(-1.0 / alpha);
    let mut cursor = stream.cursor();
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(n_terms as usize + 1);
    values.push(0.0);
    for _ in 0..n_terms {
        acc += scale * symmetric_from_uniforms(alpha, cursor.next_pair());
        values.push(acc);
    }
    Ok(PathGrid::uniform(n_terms, values))
}
