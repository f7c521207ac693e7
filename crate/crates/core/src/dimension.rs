//! Box-counting dimension of sampled graphs.
//!
//! A graph is sampled at `S + 1` abscissae `i/S`. At box size `ε = 2^{−j}` each
//! of the `2^j` columns spans `S/2^j + 1` samples (neighbouring columns share
//! their boundary sample), and the column contributes every `ε`-cell between
//! its lowest and highest ordinate. Cells are anchored at the minimum ordinate
//! and, for a second count, at the minimum shifted down by `ε/2`; the estimate
//! fits the mean of the two.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::fit_line;

/// Smallest admissible sample count.
pub const MIN_SAMPLES: usize = 1 << 12;

/// `2 + ln|a| / ln b`, the box dimension of `Σ aⁿ g(bⁿx)` for suitable `g`
/// when `|ab| > 1`.
pub fn theoretical_dim(a: f64, b: f64) -> Result<f64> {
    if !(b > 1.0) || !((a * b).abs() > 1.0) {
        return Err(Error::Regime(format!(
            "dimension formula needs b > 1 and |ab| > 1, got a = {a}, b = {b}"
        )));
    }
    Ok(2.0 + a.abs().ln() / b.ln())
}

/// Ordinates at `x_i = i/S`, `i = 0..=S`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSample {
    ys: Vec<f64>,
}

impl GraphSample {
    /// `ys` holds `S + 1` values with `S` a power of two `≥ 2^12`.
    pub fn new(ys: Vec<f64>) -> Result<Self> {
        let s = ys.len().saturating_sub(1);
        if s < MIN_SAMPLES || !s.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "graph sample needs S + 1 values with S a power of two >= {MIN_SAMPLES}, got {}",
                ys.len()
            )));
        }
        if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
            return Err(Error::NonFinite {
                x: i as f64 / s as f64,
                value: ys[i],
            });
        }
        Ok(Self { ys })
    }

    pub fn from_fn<F>(f: F, s: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let ys = (0..=s)
            .into_par_iter()
            .map(|i| f(i as f64 / s as f64))
            .collect();
        Self::new(ys)
    }

    /// `S`, the number of intervals.
    pub fn intervals(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ys
    }

    pub fn abscissa(&self, i: usize) -> f64 {
        i as f64 / self.intervals() as f64
    }

    fn min(&self) -> f64 {
        self.ys.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Box sizes `2^{−j}` for `j_min ≤ j ≤ j_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleLadder {
    j_min: u32,
    j_max: u32,
}

impl ScaleLadder {
    /// Requires `j_min < j_max ≤ log2(S) − 2`.
    pub fn new(j_min: u32, j_max: u32, s: usize) -> Result<Self> {
        let log_s = s.trailing_zeros();
        if !s.is_power_of_two() || j_min >= j_max || j_max + 2 > log_s {
            return Err(Error::InvalidParameter(format!(
                "scale ladder {j_min}..={j_max} invalid for S = {s}: need j_min < j_max <= log2(S) - 2"
            )));
        }
        Ok(Self { j_min, j_max })
    }

    /// `j = 4..=12`, capped by the sample count.
    pub fn default_for(s: usize) -> Result<Self> {
        Self::new(4, 12.min(s.trailing_zeros().saturating_sub(2)), s)
    }

    pub fn j_min(&self) -> u32 {
        self.j_min
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        self.j_min..=self.j_max
    }
}

fn check_eps(gs: &GraphSample, eps: f64) -> Result<u32> {
    let j = -eps.log2();
    let s = gs.intervals();
    if !(eps > 0.0) || j.fract() != 0.0 || j < 0.0 || (j as u32) + 2 > s.trailing_zeros() {
        return Err(Error::InvalidParameter(format!(
            "box size must be 2^-j with 0 <= j <= log2(S) - 2, got {eps}"
        )));
    }
    Ok(j as u32)
}

fn count_with_anchor(gs: &GraphSample, j: u32, anchor: f64) -> u64 {
    let eps = (-(j as f64)).exp2();
    let cols = 1usize << j;
    let width = gs.intervals() / cols;
    (0..cols)
        .into_par_iter()
        .map(|c| {
            let col = &gs.ys[c * width..=(c + 1) * width];
            let (lo, hi) = col
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &y| {
                    (l.min(y), h.max(y))
                });
            let top = ((hi - anchor) / eps).floor();
            let bottom = ((lo - anchor) / eps).floor();
            (top - bottom) as u64 + 1
        })
        .sum()
}

/// Cells of side `eps` met by the graph, grid anchored at `(0, min y)`.
pub fn box_count(gs: &GraphSample, eps: f64) -> Result<u64> {
    let j = check_eps(gs, eps)?;
    Ok(count_with_anchor(gs, j, gs.min()))
}

/// As [`box_count`] with the anchor moved down by `eps/2`.
pub fn box_count_shifted(gs: &GraphSample, eps: f64) -> Result<u64> {
    let j = check_eps(gs, eps)?;
    Ok(count_with_anchor(gs, j, gs.min() - eps / 2.0))
}

/// Counts at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleCount {
    pub j: u32,
    pub eps: f64,
    pub anchored: u64,
    pub shifted: u64,
}

impl ScaleCount {
    pub fn mean(&self) -> f64 {
        0.5 * (self.anchored + self.shifted) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimEstimate {
    /// `slope` clamped to `[1, 2]`, the possible range for a graph.
    pub dimension: f64,
    /// Least-squares slope; rounding of the counts can move it slightly
    /// outside `[1, 2]` for smooth or very rough graphs.
    pub slope: f64,
    pub intercept: f64,
    pub scales: Vec<ScaleCount>,
}

/// Slope of `log2 N(ε)` against `log2(1/ε)` over the ladder, `N` the mean of
/// the anchored and shifted counts.
pub fn estimate_dim(gs: &GraphSample, ladder: ScaleLadder) -> Result<DimEstimate> {
    ScaleLadder::new(ladder.j_min, ladder.j_max, gs.intervals())?;
    let scales: Vec<ScaleCount> = ladder
        .levels()
        .map(|j| {
            let eps = (-(j as f64)).exp2();
            let y0 = gs.min();
            ScaleCount {
                j,
                eps,
                anchored: count_with_anchor(gs, j, y0),
                shifted: count_with_anchor(gs, j, y0 - eps / 2.0),
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = scales
        .iter()
        .map(|s| (s.j as f64, s.mean().log2()))
        .collect();
    let (slope, intercept) = fit_line(&points)?;
    Ok(DimEstimate {
        dimension: slope.clamp(1.0, 2.0),
        slope,
        intercept,
        scales,
    })
}
