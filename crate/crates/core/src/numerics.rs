//! Shared numerical kernels.
//!
//! Composite midpoint quadrature (the integrands here are often nowhere
//! differentiable, so nothing of higher order is attempted), ordinary least
//! squares line fitting and the geometric tail bound used to size every
//! truncated series in the crate.
//!
//! Quadrature evaluates the integrand in parallel but always reduces with the
//! same fixed pairwise tree, so results are bit-for-bit reproducible.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default resolution for inner products.
pub const DEFAULT_RESOLUTION: usize = 1 << 14;
/// Resolution used by the acceptance runs.
pub const ACCEPTANCE_RESOLUTION: usize = 1 << 16;

const CHUNK: usize = 4096;
const PAIRWISE_BASE: usize = 32;

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "interval requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Midpoint,
}

/// Number of subintervals and rule. The resolution is a power of two, at
/// least 2, so estimates at `res` and `res / 2` share half their nodes'
/// cells and can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    resolution: usize,
    scheme: Scheme,
}

impl QuadratureSpec {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 || !resolution.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "quadrature resolution must be a power of two >= 2, got {resolution}"
            )));
        }
        Ok(Self {
            resolution,
            scheme: Scheme::Midpoint,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Midpoint abscissae of the partition of `iv`.
    pub fn nodes(&self, iv: Interval) -> Vec<f64> {
        let h = iv.width() / self.resolution as f64;
        (0..self.resolution)
            .map(|i| iv.lo + (i as f64 + 0.5) * h)
            .collect()
    }

    fn halved(&self) -> Option<Self> {
        (self.resolution >= 4).then_some(Self {
            resolution: self.resolution / 2,
            scheme: self.scheme,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_RESOLUTION,
            scheme: Scheme::Midpoint,
        }
    }
}

/// Pairwise (cascade) summation with a fixed tree shape.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BASE {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Composite midpoint estimate of `∫ f` over `iv`.
pub fn integrate<F>(f: F, iv: Interval, q: QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = q.resolution;
    let h = iv.width() / n as f64;
    let chunk_sums: Vec<Result<f64>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut vals = Vec::with_capacity(end - start);
            for i in start..end {
                let x = iv.lo + (i as f64 + 0.5) * h;
                let v = f(x);
                if !v.is_finite() {
                    return Err(Error::NonFinite { x, value: v });
                }
                vals.push(v);
            }
            Ok(pairwise_sum(&vals))
        })
        .collect();
    let sums = chunk_sums.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(pairwise_sum(&sums) * h)
}

/// Estimate plus `|estimate(res) − estimate(res/2)|` as an error indicator.
pub fn integrate_with_error<F>(f: F, iv: Interval, q: QuadratureSpec) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let fine = integrate(&f, iv, q)?;
    let err = match q.halved() {
        Some(coarse) => (fine - integrate(&f, iv, coarse)?).abs(),
        None => f64::NAN,
    };
    Ok((fine, err))
}

/// Ordinary least-squares line through `points`, returned as `(slope, intercept)`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae are equal".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// `r^m / (1 − r)`, the bound on `|Σ_{n≥m} r^n|` for `0 ≤ r < 1`.
pub fn geometric_tail(r: f64, m: usize) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "geometric ratio must be non-negative, got {r}"
        )));
    }
    if r >= 1.0 {
        return Err(Error::Divergent { ratio: r });
    }
    Ok(r.powi(m.min(i32::MAX as usize) as i32) / (1.0 - r))
}

/// Smallest `m` with `geometric_tail(r, m) · scale ≤ tol`.
pub fn truncation_length(r: f64, scale: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    geometric_tail(r, 0)?;
    if scale <= 0.0 {
        return Ok(0);
    }
    let mut m = 0usize;
    // r^m underflows to zero long before this cap for any r < 1 - 1e-4.
    while geometric_tail(r, m)? * scale > tol {
        m += 1;
        if m > 1_000_000 {
            return Err(Error::Divergent { ratio: r });
        }
    }
    Ok(m)
}
