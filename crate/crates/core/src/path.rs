//! Sampled process paths and their CSV form.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};

/// Values of a process on a strictly increasing grid starting at `t = 0`,
/// with `value(0) = 0`. Between nodes the path is the càdlàg step
/// extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl PathGrid {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return precondition("path needs matching, non-empty time and value vectors");
        }
        if times[0] != 0.0 || values[0] != 0.0 {
            return precondition("path must start at t = 0 with value 0");
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return precondition("path times must be strictly increasing");
        }
        Ok(Self { times, values })
    }

    /// Path on the uniform grid `{k/cells : k = 0..=cells·horizon}`.
    pub(crate) fn uniform(cells_per_unit: u64, values: Vec<f64>) -> Self {
        let h = 1.0 / cells_per_unit as f64;
        let times = (0..values.len()).map(|k| k as f64 * h).collect();
        debug_assert_eq!(values[0], 0.0);
        Self { times, values }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("non-empty path")
    }

    /// Right-continuous step value at `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.times.partition_point(|&s| s <= t);
        self.values[i.saturating_sub(1)]
    }

    /// Largest absolute difference between consecutive samples.
    pub fn max_jump(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.times.iter().zip(&self.values) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "t,value" => {}
            _ => return precondition("path CSV must start with the header `t,value`"),
        }
        let (mut times, mut values) = (Vec::new(), Vec::new());
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|x| x.trim().parse().ok())
                    .ok_or_else(|| Error::Precondition(format!("bad CSV row `{line}`")))
            };
            times.push(parse(cols.next())?);
            values.push(parse(cols.next())?);
        }
        Self::new(times, values)
    }
}

/// Long-format CSV with header `t,value,replicate`.
pub fn write_ensemble_csv<W: Write>(paths: &[PathGrid], mut w: W) -> Result<()> {
    writeln!(w, "t,value,replicate")?;
    for (r, p) in paths.iter().enumerate() {
        for (t, v) in p.times.iter().zip(&p.values) {
            writeln!(w, "{t},{v},{r}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_enforced() {
        assert!(PathGrid::new(vec![0.0, 0.5], vec![0.0, 1.0]).is_ok());
        assert!(PathGrid::new(vec![0.1, 0.5], vec![0.0, 1.0]).is_err());
        assert!(PathGrid::new(vec![0.0, 0.5], vec![0.3, 1.0]).is_err());
        assert!(PathGrid::new(vec![0.0, 0.5, 0.5], vec![0.0, 1.0, 2.0]).is_err());
        assert!(PathGrid::new(vec![0.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn step_extension() {
        let p = PathGrid::new(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, -1.0]).unwrap();
        assert_eq!(p.value_at(0.49), 0.0);
        assert_eq!(p.value_at(0.5), 2.0);
        assert_eq!(p.value_at(3.0), -1.0);
        assert_eq!(p.max_jump(), 3.0);
    }

    #[test]
    fn csv_layout() {
        let p = PathGrid::new(vec![0.0, 0.25], vec![0.0, 0.1 + 0.2]).unwrap();
        let s = p.to_csv();
        assert_eq!(s, "t,value\n0,0\n0.25,0.30000000000000004\n");
        assert_eq!(PathGrid::read_csv(s.as_bytes()).unwrap(), p);
        let mut buf = Vec::new();
        write_ensemble_csv(&[p.clone(), p], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("0.25,0.30000000000000004,1\n"));
    }
}
