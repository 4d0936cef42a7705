use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Serialized form of an [`AlphaFunction`].
///
/// ```json
/// {"kind":"linear","intercept":1.2,"slope":0.6}
/// {"kind":"piecewise","breaks":[0.5],"values":[1.2,1.8]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaSpec {
    Constant {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Linear {
        intercept: f64,
        slope: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    /// Right-continuous step function: `values[i]` holds on
    /// `[breaks[i-1], breaks[i])`.
    #[serde(alias = "piecewise_constant")]
    Piecewise {
        breaks: Vec<f64>,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    /// Continuous interpolation through `(u, α)` knots; the domain is the
    /// knot range.
    PiecewiseLinear { knots: Vec<[f64; 2]> },
    /// Samples on a uniform grid of the domain with step interpolation.
    Table {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
}

/// The stability-index function `α(u)`, càdlàg with values in `[a, b] ⊂ (0, 2]`.
///
/// Every supported family is piecewise affine, which lets exponent
/// integrals be evaluated panel by panel in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlphaSpec", into = "AlphaSpec")]
pub struct AlphaFunction {
    spec: AlphaSpec,
    domain: (f64, f64),
    lower: f64,
    upper: f64,
}

/// `α(s) = c0 + c1·s` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePiece {
    pub lo: f64,
    pub hi: f64,
    pub c0: f64,
    pub c1: f64,
}

impl AffinePiece {
    pub fn at(&self, s: f64) -> f64 {
        self.c0 + self.c1 * s
    }

    /// `∫_lo^hi base^{α(s)} ds` in closed form; `0^α = 0`.
    pub fn power_integral(&self, base: f64) -> f64 {
        let h = self.hi - self.lo;
        if h <= 0.0 || base == 0.0 {
            return 0.0;
        }
        if base == 1.0 {
            return h;
        }
        let ln_b = base.ln();
        let start = self.at(self.lo) * ln_b;
        let x = self.c1 * ln_b * h;
        let ratio = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
        start.exp() * h * ratio
    }
}

impl TryFrom<AlphaSpec> for AlphaFunction {
    type Error = crate::Error;

    fn try_from(spec: AlphaSpec) -> Result<Self> {
        AlphaFunction::from_spec(spec)
    }
}

impl From<AlphaFunction> for AlphaSpec {
    fn from(af: AlphaFunction) -> Self {
        af.spec
    }
}

fn check_domain(d: Option<[f64; 2]>) -> Result<(f64, f64)> {
    let [lo, hi] = d.unwrap_or([0.0, 1.0]);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return domain(format!("invalid domain [{lo}, {hi}]"));
    }
    Ok((lo, hi))
}

impl AlphaFunction {
    pub fn from_spec(spec: AlphaSpec) -> Result<Self> {
        let (dom, lower, upper) = match &spec {
            AlphaSpec::Constant { value, domain } => (check_domain(*domain)?, *value, *value),
            AlphaSpec::Linear {
                intercept,
                slope,
                domain,
            } => {
                let d = check_domain(*domain)?;
                let (x, y) = (intercept + slope * d.0, intercept + slope * d.1);
                (d, x.min(y), x.max(y))
            }
            AlphaSpec::Piecewise {
                breaks,
                values,
                domain: dm,
            } => {
                let d = check_domain(*dm)?;
                if values.len() != breaks.len() + 1 {
                    return domain("piecewise alpha needs values.len() == breaks.len() + 1");
                }
                if breaks.windows(2).any(|w| !(w[0] < w[1]))
                    || breaks.iter().any(|&b| !(b > d.0 && b < d.1))
                {
                    return domain("piecewise breaks must increase strictly inside the domain");
                }
                let (lo, hi) = min_max(values.iter().copied());
                (d, lo, hi)
            }
            AlphaSpec::PiecewiseLinear { knots } => {
                if knots.len() < 2 {
                    return domain("piecewise_linear alpha needs at least two knots");
                }
                if knots.windows(2).any(|w| !(w[0][0] < w[1][0])) {
                    return domain("piecewise_linear knots must have increasing abscissae");
                }
                let d = check_domain(Some([knots[0][0], knots[knots.len() - 1][0]]))?;
                let (lo, hi) = min_max(knots.iter().map(|k| k[1]));
                (d, lo, hi)
            }
            AlphaSpec::Table { values, domain: dm } => {
                let d = check_domain(*dm)?;
                if values.is_empty() {
                    return domain("table alpha needs at least one value");
                }
                let (lo, hi) = min_max(values.iter().copied());
                (d, lo, hi)
            }
        };
        if !(lower > 0.0 && upper <= 2.0) || !lower.is_finite() || !upper.is_finite() {
            return domain(format!(
                "alpha must take values in (0, 2]; got range [{lower}, {upper}]"
            ));
        }
        Ok(Self {
            spec,
            domain: dom,
            lower,
            upper,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::from_spec(AlphaSpec::Constant {
            value,
            domain: None,
        })
    }

    pub fn linear(intercept: f64, slope: f64) -> Result<Self> {
        Self::from_spec(AlphaSpec::Linear {
            intercept,
            slope,
            domain: None,
        })
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::from_spec(AlphaSpec::Piecewise {
            breaks,
            values,
            domain: None,
        })
    }

    pub fn piecewise_linear(knots: Vec<[f64; 2]>) -> Result<Self> {
        Self::from_spec(AlphaSpec::PiecewiseLinear { knots })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        Self::from_spec(AlphaSpec::Table {
            values,
            domain: None,
        })
    }

    /// Same function on a different domain (only for kinds that carry one).
    pub fn with_domain(self, lo: f64, hi: f64) -> Result<Self> {
        let d = Some([lo, hi]);
        let spec = match self.spec {
            AlphaSpec::Constant { value, .. } => AlphaSpec::Constant { value, domain: d },
            AlphaSpec::Linear {
                intercept, slope, ..
            } => AlphaSpec::Linear {
                intercept,
                slope,
                domain: d,
            },
            AlphaSpec::Piecewise { breaks, values, .. } => AlphaSpec::Piecewise {
                breaks,
                values,
                domain: d,
            },
            AlphaSpec::Table { values, .. } => AlphaSpec::Table { values, domain: d },
            AlphaSpec::PiecewiseLinear { .. } => {
                return domain("piecewise_linear domain is fixed by its knots")
            }
        };
        Self::from_spec(spec)
    }

    /// The function used in the field-based counterexample:
    /// `α = b/2` on `[0, b/2]` and `α(u) = u` on `(b/2, 1]`.
    pub fn example1(b: f64) -> Result<Self> {
        let h = b / 2.0;
        if !(h > 0.0 && h < 1.0) {
            return domain(format!("example alpha needs b in (0, 2), got {b}"));
        }
        Self::piecewise_linear(vec![[0.0, h], [h, h], [1.0, 1.0]])
    }

    pub fn spec(&self) -> &AlphaSpec {
        &self.spec
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Lower bound `a`.
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// Upper bound `b`.
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_constant(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.domain.0 && u <= self.domain.1
    }

    /// `α(u)`; errors outside the domain.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !self.contains(u) {
            return domain(format!(
                "u = {u} outside alpha domain [{}, {}]",
                self.domain.0, self.domain.1
            ));
        }
        Ok(self.value(u))
    }

    /// `α(u)` with `u` clamped into the domain.
    pub fn value(&self, u: f64) -> f64 {
        let u = u.clamp(self.domain.0, self.domain.1);
        match &self.spec {
            AlphaSpec::Constant { value, .. } => *value,
            AlphaSpec::Linear {
                intercept, slope, ..
            } => (intercept + slope * u).clamp(self.lower, self.upper),
            AlphaSpec::Piecewise { breaks, values, .. } => {
                values[breaks.partition_point(|&b| b <= u)]
            }
            AlphaSpec::PiecewiseLinear { knots } => {
                let i = knots.partition_point(|k| k[0] <= u);
                if i == 0 {
                    return knots[0][1];
                }
                if i == knots.len() {
                    return knots[i - 1][1];
                }
                let ([x0, y0], [x1, y1]) = (knots[i - 1], knots[i]);
                y0 + (y1 - y0) * (u - x0) / (x1 - x0)
            }
            AlphaSpec::Table { values, .. } => values[self.table_cell(values.len(), u)],
        }
    }

    fn table_cell(&self, m: usize, u: f64) -> usize {
        let (lo, hi) = self.domain;
        let pos = (u - lo) / (hi - lo) * m as f64;
        (pos.floor().max(0.0) as usize).min(m - 1)
    }

    /// Points where `α` or its slope may change, strictly inside the domain.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.domain;
        match &self.spec {
            AlphaSpec::Constant { .. } | AlphaSpec::Linear { .. } => Vec::new(),
            AlphaSpec::Piecewise { breaks, .. } => breaks.clone(),
            AlphaSpec::PiecewiseLinear { knots } => {
                knots[1..knots.len() - 1].iter().map(|k| k[0]).collect()
            }
            AlphaSpec::Table { values, .. } => {
                let m = values.len();
                (1..m).map(|i| lo + (hi - lo) * i as f64 / m as f64).collect()
            }
        }
    }

    /// Affine pieces of `α` covering `[u1, u2]` (clipped to the domain).
    pub fn pieces(&self, u1: f64, u2: f64) -> Vec<AffinePiece> {
        let (lo, hi) = (u1.max(self.domain.0), u2.min(self.domain.1));
        if !(lo < hi) {
            return Vec::new();
        }
        let mut cuts = vec![lo];
        cuts.extend(self.breakpoints().into_iter().filter(|&b| b > lo && b < hi));
        cuts.push(hi);
        cuts.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let (c0, c1) = match &self.spec {
                    AlphaSpec::Linear {
                        intercept, slope, ..
                    } => (*intercept, *slope),
                    AlphaSpec::PiecewiseLinear { .. } => {
                        let (ya, yb) = (self.value(a), self.value(b));
                        let s = (yb - ya) / (b - a);
                        (ya - s * a, s)
                    }
                    _ => (self.value(0.5 * (a + b)), 0.0),
                };
                AffinePiece { lo: a, hi: b, c0, c1 }
            })
            .collect()
    }

    /// `∫_{u1}^{u2} base^{α(s)} ds` for `base ≥ 0`, exact on every panel.
    pub fn power_integral(&self, base: f64, u1: f64, u2: f64) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for p in self.pieces(u1, u2) {
            let v = p.power_integral(base);
            let t = sum + v;
            comp += if sum.abs() >= v.abs() {
                (sum - t) + v
            } else {
                (v - t) + sum
            };
            sum = t;
        }
        sum + comp
    }

    /// Sup-distance to another function, measured on a fine grid plus both
    /// functions' breakpoints.
    pub fn sup_distance(&self, other: &AlphaFunction) -> f64 {
        let (lo, hi) = self.domain;
        let mut pts: Vec<f64> = (0..=4096).map(|i| lo + (hi - lo) * i as f64 / 4096.0).collect();
        pts.extend(self.breakpoints());
        pts.extend(other.breakpoints());
        pts.iter()
            .map(|&u| (self.value(u) - other.value(u)).abs())
            .fold(0.0, f64::max)
    }
}

fn min_max(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_evaluate() {
        assert_eq!(AlphaFunction::constant(1.5).unwrap().eval(0.3).unwrap(), 1.5);
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        assert!((lin.eval(0.5).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!((lin.lower(), lin.upper()), (1.2, 1.2 + 0.6));
        let step = AlphaFunction::piecewise(vec![0.5], vec![1.2, 1.8]).unwrap();
        assert_eq!(step.eval(0.5).unwrap(), 1.8);
        assert_eq!(step.eval(0.4999).unwrap(), 1.2);
        let tab = AlphaFunction::table(vec![1.0, 1.5, 1.9, 1.1]).unwrap();
        assert_eq!(tab.eval(0.25).unwrap(), 1.5);
        assert_eq!(tab.eval(1.0).unwrap(), 1.1);
        let ex = AlphaFunction::example1(1.8).unwrap();
        assert_eq!(ex.eval(0.3).unwrap(), 0.9);
        assert!((ex.eval(0.95).unwrap() - 0.95).abs() < 1e-15);
    }

    #[test]
    fn out_of_domain() {
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        assert!(lin.eval(-0.1).is_err());
        assert!(lin.eval(1.1).is_err());
    }

    #[test]
    fn bounds_are_validated() {
        assert!(AlphaFunction::constant(0.0).is_err());
        assert!(AlphaFunction::constant(2.01).is_err());
        assert!(AlphaFunction::linear(1.5, 0.6).is_err());
        assert!(AlphaFunction::piecewise(vec![0.5], vec![1.0]).is_err());
        assert!(AlphaFunction::piecewise(vec![1.5], vec![1.0, 1.2]).is_err());
        assert!(AlphaFunction::table(vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let lin: AlphaFunction =
            serde_json::from_str(r#"{"kind":"linear","intercept":1.2,"slope":0.6}"#).unwrap();
        assert_eq!(lin, AlphaFunction::linear(1.2, 0.6).unwrap());
        let pw: AlphaFunction =
            serde_json::from_str(r#"{"kind":"piecewise","breaks":[0.5],"values":[1.2,1.8]}"#)
                .unwrap();
        assert_eq!(pw.upper(), 1.8);
        let back: AlphaFunction = serde_json::from_str(&serde_json::to_string(&pw).unwrap()).unwrap();
        assert_eq!(back, pw);
        let bad = serde_json::from_str::<AlphaFunction>(r#"{"kind":"constant","value":2.5}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn piece_integral_matches_direct_formula() {
        let lin = AlphaFunction::linear(1.2, 0.6).unwrap();
        // ∫_0^1 2^{1.2+0.6 s} ds = 2^{1.2} (2^{0.6} - 1) / (0.6 ln 2)
        let exact = 2f64.powf(1.2) * (2f64.powf(0.6) - 1.0) / (0.6 * 2f64.ln());
        assert!((lin.power_integral(2.0, 0.0, 1.0) - exact).abs() < 1e-14);
        assert_eq!(lin.power_integral(0.0, 0.0, 1.0), 0.0);
        assert!((lin.power_integral(1.0, 0.2, 0.7) - 0.5).abs() < 1e-15);
    }
}
