//! Real functions of one variable as used throughout the crate.
//!
//! A [`RealFunction`] is a cheaply clonable evaluation rule `x ↦ f(x)` over ℝ
//! tagged with its kind. Besides evaluation it may know
//!
//! * a period, which lets the series solvers reduce arguments exactly, and
//! * one-sided limits from the right, needed to build the IFS maps of a
//!   fractal interpolant at the partition nodes.
//!
//! Periodic builtins and piecewise functions use the right-closed cell
//! convention: for `x > 0` the argument is reduced into `(0, P]`, so
//! `f(1) = f(2) = …` while `f(0)` may differ (see [`reduce_right_closed`]).

use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interp::PiecewiseG;

type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Which family a [`RealFunction`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Builtin,
    Piecewise,
    /// Periodic extension of a sample set on `[0, 1]`.
    Periodic,
    Composite,
}

/// Closed-form functions with analytic one-sided limits.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Const(f64),
    Identity,
    /// `Σ c_i x^i`, ascending coefficients.
    Poly(Vec<f64>),
    /// `cos(πx)`, period 2.
    CosPi,
    /// `cos(2πkx)`.
    Cos2PiK(u32),
    /// `sin(2πkx)`.
    Sin2PiK(u32),
    /// `√2 cos(2πkx)`, the normalized classical cosine.
    BasisCos(u32),
    /// `√2 sin(2πkx)`.
    BasisSin(u32),
    /// `c + Σ_k cos[k-1]·cos(2πkx) + sin[k-1]·sin(2πkx)`.
    TrigPoly {
        constant: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    /// Period-1 step: `0` on `[0, c]`, `h` on `(c, 1]`.
    Step {
        c: f64,
        h: f64,
    },
    /// Period-1 sawtooth: `x` on `[0, 1]`, extended by `f(x) = f(x − 1)` for `x > 1`.
    Saw,
    /// `x − 1/2`, not extended.
    XMinusHalf,
    /// Indicator of the closed interval `[lo, hi]`.
    Indicator {
        lo: f64,
        hi: f64,
    },
    /// Tent on `[lo, hi]` with unit peak at the midpoint.
    Triangle {
        lo: f64,
        hi: f64,
    },
}

/// Reduce `y` into `(0, p]` for `y ≠ 0`; `0` stays `0`.
///
/// Exact for `p` a power of two and `y ≥ 0`.
pub fn reduce_right_closed(y: f64, p: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    let r = y - p * (y / p).floor();
    if r == 0.0 {
        p
    } else {
        r
    }
}

fn frac(y: f64) -> f64 {
    y - y.floor()
}

impl Builtin {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Builtin::Const(c) => *c,
            Builtin::Identity => x,
            Builtin::Poly(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci),
            Builtin::CosPi => (TAU * frac(x / 2.0)).cos(),
            Builtin::Cos2PiK(k) => (TAU * frac(*k as f64 * x)).cos(),
            Builtin::Sin2PiK(k) => (TAU * frac(*k as f64 * x)).sin(),
            Builtin::BasisCos(k) => SQRT_2 * (TAU * frac(*k as f64 * x)).cos(),
            Builtin::BasisSin(k) => SQRT_2 * (TAU * frac(*k as f64 * x)).sin(),
            Builtin::TrigPoly { constant, cos, sin } => {
                let r = frac(x);
                let mut v = *constant;
                for (i, c) in cos.iter().enumerate() {
                    v += c * (TAU * frac((i + 1) as f64 * r)).cos();
                }
                for (i, s) in sin.iter().enumerate() {
                    v += s * (TAU * frac((i + 1) as f64 * r)).sin();
                }
                v
            }
            Builtin::Step { c, h } => {
                let r = reduce_right_closed(x, 1.0);
                if r <= *c {
                    0.0
                } else {
                    *h
                }
            }
            Builtin::Saw => reduce_right_closed(x, 1.0),
            Builtin::XMinusHalf => x - 0.5,
            Builtin::Indicator { lo, hi } => {
                if *lo <= x && x <= *hi {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::Triangle { lo, hi } => {
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                (1.0 - (x - mid).abs() / half).max(0.0)
            }
        }
    }

    /// `lim_{t→x+} f(t)`.
    pub fn right_limit(&self, x: f64) -> f64 {
        match self {
            Builtin::Step { c, h } => {
                if frac(x) < *c {
                    0.0
                } else {
                    *h
                }
            }
            Builtin::Saw => frac(x),
            Builtin::Indicator { lo, hi } => {
                if *lo <= x && x < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.eval(x),
        }
    }

    pub fn period(&self) -> Option<f64> {
        match self {
            Builtin::CosPi => Some(2.0),
            Builtin::Const(_)
            | Builtin::Cos2PiK(_)
            | Builtin::Sin2PiK(_)
            | Builtin::BasisCos(_)
            | Builtin::BasisSin(_)
            | Builtin::TrigPoly { .. }
            | Builtin::Step { .. }
            | Builtin::Saw => Some(1.0),
            _ => None,
        }
    }

    /// Exact `sup |f|` where it is cheap to state.
    pub fn sup_norm(&self) -> Option<f64> {
        match self {
            Builtin::Const(c) => Some(c.abs()),
            Builtin::CosPi | Builtin::Cos2PiK(_) | Builtin::Sin2PiK(_) => Some(1.0),
            Builtin::BasisCos(_) | Builtin::BasisSin(_) => Some(SQRT_2),
            Builtin::Step { h, .. } => Some(h.abs()),
            Builtin::Saw | Builtin::Indicator { .. } | Builtin::Triangle { .. } => Some(1.0),
            _ => None,
        }
    }
}

/// Periodic extension of samples on `[0, 1]`, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PeriodicSamples {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Input(format!(
                "need at least 2 samples, got {}",
                points.len()
            )));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::Input(
                    "sample abscissae must be strictly increasing".into(),
                ));
            }
        }
        let (first, last) = (points[0].0, points[points.len() - 1].0);
        if first < 0.0 || last > 1.0 {
            return Err(Error::Input(format!(
                "sample abscissae must lie in [0, 1], got [{first}, {last}]"
            )));
        }
        if points.iter().any(|p| !p.1.is_finite()) {
            return Err(Error::Input("sample ordinates must be finite".into()));
        }
        // Pad one period on each side so every r ∈ [0, 1) has a bracketing segment.
        let (lx, ly) = points[points.len() - 1];
        let (fx, fy) = points[0];
        let mut xs = vec![lx - 1.0];
        let mut ys = vec![ly];
        xs.extend(points.iter().map(|p| p.0));
        ys.extend(points.iter().map(|p| p.1));
        xs.push(fx + 1.0);
        ys.push(fy);
        Ok(Self { xs, ys })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = frac(x);
        // first index with xs[i] > r; the segment is [i-1, i]
        let i = self
            .xs
            .partition_point(|&s| s <= r)
            .clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        if x1 == x0 {
            return y1;
        }
        y0 + (y1 - y0) * (r - x0) / (x1 - x0)
    }
}

struct Composite {
    label: String,
    eval: Box<EvalFn>,
    right_limit: Option<Box<EvalFn>>,
    period: Option<f64>,
}

#[derive(Clone)]
enum Rule {
    Builtin(Builtin),
    Piecewise(Arc<PiecewiseG>),
    Sampled(Arc<PeriodicSamples>),
    Composite(Arc<Composite>),
}

/// An evaluation rule over ℝ. Cloning is cheap.
#[derive(Clone)]
pub struct RealFunction {
    rule: Rule,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Builtin(b) => write!(f, "RealFunction::Builtin({b:?})"),
            Rule::Piecewise(p) => write!(f, "RealFunction::Piecewise(N = {})", p.n()),
            Rule::Sampled(_) => write!(f, "RealFunction::Periodic(samples)"),
            Rule::Composite(c) => write!(f, "RealFunction::Composite({})", c.label),
        }
    }
}

impl From<Builtin> for RealFunction {
    fn from(b: Builtin) -> Self {
        Self::builtin(b)
    }
}

impl RealFunction {
    pub fn builtin(b: Builtin) -> Self {
        Self {
            rule: Rule::Builtin(b),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::builtin(Builtin::Const(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn piecewise(pw: PiecewiseG) -> Self {
        Self {
            rule: Rule::Piecewise(Arc::new(pw)),
        }
    }

    pub fn sampled(samples: PeriodicSamples) -> Self {
        Self {
            rule: Rule::Sampled(Arc::new(samples)),
        }
    }

    /// A user rule without limit information.
    pub fn from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::composite(label.into(), Box::new(f), None, None)
    }

    /// A user rule with period `period` under the right-closed convention.
    pub fn periodic_fn<F>(label: impl Into<String>, period: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::composite(label.into(), Box::new(f), None, Some(period))
    }

    /// Attach an exact right-limit rule to a composite function.
    ///
    /// Builtins and piecewise functions already carry one; calling this on
    /// them wraps them into a composite.
    pub fn with_right_limit<L>(self, limit: L) -> Self
    where
        L: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let period = self.period();
        let label = format!("{self:?}");
        let inner = self;
        Self::composite(
            label,
            Box::new(move |x| inner.eval(x)),
            Some(Box::new(limit)),
            period,
        )
    }

    fn composite(
        label: String,
        eval: Box<EvalFn>,
        right_limit: Option<Box<EvalFn>>,
        period: Option<f64>,
    ) -> Self {
        Self {
            rule: Rule::Composite(Arc::new(Composite {
                label,
                eval,
                right_limit,
                period,
            })),
        }
    }

    pub fn kind(&self) -> FunctionKind {
        match self.rule {
            Rule::Builtin(_) => FunctionKind::Builtin,
            Rule::Piecewise(_) => FunctionKind::Piecewise,
            Rule::Sampled(_) => FunctionKind::Periodic,
            Rule::Composite(_) => FunctionKind::Composite,
        }
    }

    pub fn as_builtin(&self) -> Option<&Builtin> {
        match &self.rule {
            Rule::Builtin(b) => Some(b),
            _ => None,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.rule {
            Rule::Builtin(b) => b.eval(x),
            Rule::Piecewise(p) => p.eval(x),
            Rule::Sampled(s) => s.eval(x),
            Rule::Composite(c) => (c.eval)(x),
        }
    }

    /// A period `P` such that `f(x) = f(reduce_right_closed(x, P))` for all `x`.
    pub fn period(&self) -> Option<f64> {
        match &self.rule {
            Rule::Builtin(b) => b.period(),
            Rule::Piecewise(_) | Rule::Sampled(_) => Some(1.0),
            Rule::Composite(c) => c.period,
        }
    }

    /// `lim_{t→x+} f(t)` when the rule can provide it exactly.
    pub fn right_limit(&self, x: f64) -> Option<f64> {
        match &self.rule {
            Rule::Builtin(b) => Some(b.right_limit(x)),
            Rule::Piecewise(p) => Some(p.right_limit(x)),
            // linear interpolation is right-continuous after the floor reduction
            Rule::Sampled(s) => Some(s.eval(x)),
            Rule::Composite(c) => c.right_limit.as_ref().map(|l| l(x)),
        }
    }

    pub fn has_right_limits(&self) -> bool {
        match &self.rule {
            Rule::Composite(c) => c.right_limit.is_some(),
            _ => true,
        }
    }

    /// Right limit from the offsets 1e-4, 1e-5, 1e-6 with two Richardson
    /// steps. Approximate; only a fallback for rules without exact limits.
    pub fn numeric_right_limit(&self, x: f64) -> f64 {
        let v: Vec<f64> = [1e-4, 1e-5, 1e-6]
            .iter()
            .map(|h| self.eval(x + h))
            .collect();
        let r1 = (10.0 * v[1] - v[0]) / 9.0;
        let r2 = (10.0 * v[2] - v[1]) / 9.0;
        (100.0 * r2 - r1) / 99.0
    }

    /// Exact right limit if known, else the numeric estimate with a flag set.
    pub fn right_limit_or_numeric(&self, x: f64) -> (f64, bool) {
        match self.right_limit(x) {
            Some(v) => (v, false),
            None => (self.numeric_right_limit(x), true),
        }
    }

    /// Sup norm when known in closed form.
    pub fn exact_sup_norm(&self) -> Option<f64> {
        match &self.rule {
            Rule::Builtin(b) => b.sup_norm(),
            _ => None,
        }
    }

    /// `Σ c_i f_i`.
    pub fn linear_combination(terms: &[(f64, RealFunction)]) -> Self {
        let terms: Vec<(f64, RealFunction)> = terms.to_vec();
        let period = match terms.first() {
            Some((_, f)) => {
                let p = f.period();
                if terms.iter().all(|(_, g)| g.period() == p) {
                    p
                } else {
                    None
                }
            }
            None => Some(1.0),
        };
        let has_limits = terms.iter().all(|(_, f)| f.has_right_limits());
        let label = format!("linear combination of {} terms", terms.len());
        let eval_terms = terms.clone();
        let eval: Box<EvalFn> =
            Box::new(move |x| eval_terms.iter().map(|(c, f)| c * f.eval(x)).sum());
        let limit: Option<Box<EvalFn>> = has_limits.then(|| {
            let lt = terms.clone();
            Box::new(move |x: f64| {
                lt.iter()
                    .map(|(c, f)| c * f.right_limit(x).unwrap_or(f64::NAN))
                    .sum()
            }) as Box<EvalFn>
        });
        Self::composite(label, eval, limit, period)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::linear_combination(&[(c, self.clone())])
    }

    /// Evaluate on a slice of abscissae.
    pub fn sample(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// `sin²(πx)`, a continuous period-1 function vanishing at the integers.
pub fn sin_squared_pi() -> RealFunction {
    RealFunction::periodic_fn("sin^2(pi x)", 1.0, |x| (PI * x).sin().powi(2))
        .with_right_limit(|x| (PI * x).sin().powi(2))
}
