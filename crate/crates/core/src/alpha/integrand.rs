use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function `f` on `[0, 1]`, the integrand of a multistable integral.
///
/// Piecewise-constant representations are integrated exactly; closures go
/// through adaptive quadrature with splits at the supplied breakpoints.
#[derive(Clone)]
pub enum IntegrandFunction {
    Constant(f64),
    /// `1` on the interval between `lo` and `hi`, endpoints included as flagged.
    Indicator {
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
    /// Right-continuous steps: `values[i]` on `[breaks[i-1], breaks[i])`.
    Step { breaks: Vec<f64>, values: Vec<f64> },
    /// Samples on a uniform grid of `[0, 1]` with right-continuous steps.
    Table(Vec<f64>),
    Closure {
        f: RealFn,
        breaks: Vec<f64>,
        label: String,
    },
    /// `Σ c_i f_i`.
    Combination(Vec<(f64, IntegrandFunction)>),
}

impl fmt::Debug for IntegrandFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(fm, "Constant({c})"),
            Self::Indicator {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => write!(
                fm,
                "Indicator{}{lo}, {hi}{}",
                if *lo_closed { '[' } else { '(' },
                if *hi_closed { ']' } else { ')' }
            ),
            Self::Step { breaks, values } => write!(fm, "Step({breaks:?}, {values:?})"),
            Self::Table(v) => write!(fm, "Table(len={})", v.len()),
            Self::Closure { label, .. } => write!(fm, "Closure({label})"),
            Self::Combination(terms) => fm.debug_list().entries(terms.iter()).finish(),
        }
    }
}

impl IntegrandFunction {
    pub fn zero() -> Self {
        Self::Constant(0.0)
    }

    /// `1_{[lo, hi]}`.
    pub fn indicator(lo: f64, hi: f64) -> Self {
        Self::Indicator {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    /// `1_{(lo, hi]}`.
    pub fn indicator_left_open(lo: f64, hi: f64) -> Self {
        Self::Indicator {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        }
    }

    /// Indicator of the single point `x`.
    pub fn point(x: f64) -> Self {
        Self::indicator(x, x)
    }

    pub fn step(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return domain("step function needs values.len() == breaks.len() + 1");
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("step breaks must be strictly increasing");
        }
        Ok(Self::Step { breaks, values })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return domain("tabulated integrand needs at least one value");
        }
        Ok(Self::Table(values))
    }

    pub fn closure<F>(label: impl Into<String>, breaks: Vec<f64>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Closure {
            f: Arc::new(f),
            breaks,
            label: label.into(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::Combination(vec![(c, self.clone())])
    }

    /// `self - other`.
    pub fn minus(&self, other: &Self) -> Self {
        Self::Combination(vec![(1.0, self.clone()), (-1.0, other.clone())])
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::Combination(vec![(1.0, self.clone()), (1.0, other.clone())])
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Indicator {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                let above = if *lo_closed { x >= *lo } else { x > *lo };
                let below = if *hi_closed { x <= *hi } else { x < *hi };
                if above && below {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Step { breaks, values } => values[breaks.partition_point(|&b| b <= x)],
            Self::Table(v) => {
                let m = v.len();
                let i = ((x * m as f64).floor().max(0.0) as usize).min(m - 1);
                v[i]
            }
            Self::Closure { f, .. } => f(x),
            Self::Combination(terms) => terms.iter().map(|(c, f)| c * f.eval(x)).sum(),
        }
    }

    /// Points in (0, 1) where the function may jump or kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            Self::Constant(_) => Vec::new(),
            Self::Indicator { lo, hi, .. } => vec![*lo, *hi],
            Self::Step { breaks, .. } => breaks.clone(),
            Self::Table(v) => (1..v.len()).map(|i| i as f64 / v.len() as f64).collect(),
            Self::Closure { breaks, .. } => breaks.clone(),
            Self::Combination(terms) => terms.iter().flat_map(|(_, f)| f.breakpoints()).collect(),
        };
        out.retain(|&b| b > 0.0 && b < 1.0);
        out.sort_by(|a, b| a.total_cmp(b));
        out.dedup();
        out
    }

    pub fn is_piecewise_constant(&self) -> bool {
        match self {
            Self::Closure { .. } => false,
            Self::Combination(terms) => terms.iter().all(|(_, f)| f.is_piecewise_constant()),
            _ => true,
        }
    }

    /// Constant panels `(lo, hi, value)` covering [0, 1], for
    /// piecewise-constant functions (values taken at panel midpoints).
    pub fn panels(&self) -> Option<Vec<(f64, f64, f64)>> {
        if !self.is_piecewise_constant() {
            return None;
        }
        Some(panels_of(&self.breakpoints(), |x| self.eval(x)))
    }

    /// Essential supremum of `|f|` (exact for piecewise-constant functions,
    /// a dense-grid estimate otherwise).
    pub fn sup_abs(&self) -> f64 {
        match self.panels() {
            Some(p) => p.iter().map(|&(_, _, v)| v.abs()).fold(0.0, f64::max),
            None => {
                let mut pts: Vec<f64> = (0..=8192).map(|i| i as f64 / 8192.0).collect();
                pts.extend(self.breakpoints());
                pts.iter().map(|&x| self.eval(x).abs()).fold(0.0, f64::max)
            }
        }
    }
}

/// Panels between sorted `breaks` with the midpoint value of `f`.
pub(crate) fn panels_of(breaks: &[f64], f: impl Fn(f64) -> f64) -> Vec<(f64, f64, f64)> {
    let mut cuts = Vec::with_capacity(breaks.len() + 2);
    cuts.push(0.0);
    cuts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < 1.0));
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    cuts.windows(2)
        .map(|w| (w[0], w[1], f(0.5 * (w[0] + w[1]))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_endpoints() {
        let f = IntegrandFunction::indicator_left_open(0.5, 1.0);
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(1.0), 1.0);
        let g = IntegrandFunction::indicator(0.0, 0.5);
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(IntegrandFunction::point(0.5).eval(0.5), 1.0);
    }

    #[test]
    fn point_has_zero_essential_sup() {
        assert_eq!(IntegrandFunction::point(0.5).sup_abs(), 0.0);
    }

    #[test]
    fn combination_panels() {
        let f = IntegrandFunction::indicator(0.0, 0.25)
            .plus(&IntegrandFunction::table(vec![1.0, 2.0]).unwrap().scaled(3.0));
        let p = f.panels().unwrap();
        assert_eq!(p, vec![(0.0, 0.25, 4.0), (0.25, 0.5, 3.0), (0.5, 1.0, 6.0)]);
        assert_eq!(f.sup_abs(), 6.0);
    }

    #[test]
    fn closure_is_not_piecewise_constant() {
        let f = IntegrandFunction::closure("x", vec![], |x| x);
        assert!(f.panels().is_none());
        assert!((f.sup_abs() - 1.0).abs() < 1e-12);
    }
}
