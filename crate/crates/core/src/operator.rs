//! The dilation operator `T_b f(x) = f(bx)`, the operator `M = I − a·T_b`
//! and its inverse as a truncated Neumann series.
//!
//! The exponent `p` only selects the regime and feeds the norm formulas:
//!
//! * contractive, `|a| < |b|^{1/p}`: `f(x) = Σ_{n≥0} aⁿ g(bⁿx)`
//! * expansive, `|a| > |b|^{1/p}`: `f(x) = −Σ_{n≥1} a⁻ⁿ g(x/bⁿ)`
//!
//! with `|b|^{1/∞} = 1`. Series are truncated at the first `T` for which the
//! geometric tail bound `rᵀ/(1−r)·‖g‖_∞` drops below the requested tolerance.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::{reduce_right_closed, RealFunction};
use crate::numerics::{geometric_tail, integrate, truncation_length, Interval, QuadratureSpec};

/// Default series tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

const SUP_SAMPLES: usize = 1 << 12;
const SUP_INFLATION: f64 = 1.1;

/// Lebesgue exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "exponent p must lie in [1, inf), got {p}"
            )));
        }
        Ok(Exponent::Finite(p))
    }

    /// `|b|^{1/p}`, which is 1 for `p = ∞`.
    pub fn root(&self, b: f64) -> f64 {
        match self {
            Exponent::Finite(p) => b.abs().powf(1.0 / p),
            Exponent::Infinity => 1.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Input(format!("cannot parse exponent '{s}'")))?;
                Exponent::finite(p)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Contractive,
    Expansive,
}

/// The triple `(a, b, p)` of `f(x) − a·f(bx) = g(x)` posed in `L^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationParams {
    a: f64,
    b: f64,
    p: Exponent,
}

impl EquationParams {
    pub fn new(a: f64, b: f64, p: Exponent) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a and b must be finite, got a = {a}, b = {b}"
            )));
        }
        if b == 0.0 {
            return Err(Error::InvalidParameter(
                "b = 0: the equation is not well posed in L^p because g(0) is not determined \
                 by an L^p class; use the b = 0 branch, which needs the value g(0) (--g0)"
                    .into(),
            ));
        }
        // exact comparison on the caller's reals
        if a.abs() == p.root(b) {
            return Err(Error::Resonance {
                a,
                b,
                p: p.to_string(),
            });
        }
        Ok(Self { a, b, p })
    }

    /// Shorthand for `p = ∞`, the sup-norm setting used for pointwise work.
    pub fn sup(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, Exponent::Infinity)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn regime(&self) -> Regime {
        if self.a.abs() < self.p.root(self.b) {
            Regime::Contractive
        } else {
            Regime::Expansive
        }
    }

    /// Ratio of the pointwise series: `|a|` or `1/|a|`.
    fn series_ratio(&self) -> f64 {
        match self.regime() {
            Regime::Contractive => self.a.abs(),
            Regime::Expansive => 1.0 / self.a.abs(),
        }
    }
}

/// `x ↦ f(bx)`.
pub fn apply_t(b: f64, f: &RealFunction) -> Result<RealFunction> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dilation factor b must be finite and nonzero, got {b}"
        )));
    }
    let inner = f.clone();
    let label = format!("T_{b} {f:?}");
    let g = match dilated_period(f, b) {
        Some(p) => RealFunction::periodic_fn(label, p, move |x| inner.eval(b * x)),
        None => RealFunction::from_fn(label, move |x| inner.eval(b * x)),
    };
    if b > 0.0 && f.has_right_limits() {
        let lim = f.clone();
        Ok(g.with_right_limit(move |x| lim.right_limit(b * x).unwrap_or(f64::NAN)))
    } else {
        Ok(g)
    }
}

/// `x ↦ f(x) − a·f(bx)`.
pub fn apply_m(params: &EquationParams, f: &RealFunction) -> RealFunction {
    let (a, b) = (params.a, params.b);
    let inner = f.clone();
    let label = format!("M_{{{a},{b}}} {f:?}");
    let eval = move |x: f64| inner.eval(x) - a * inner.eval(b * x);
    match dilated_period(f, b) {
        Some(p) => RealFunction::periodic_fn(label, p, eval),
        None => RealFunction::from_fn(label, eval),
    }
}

/// A period of `x ↦ f(bx)` usable with right-closed reduction: integer
/// dilations of a periodic function keep the period.
fn dilated_period(f: &RealFunction, b: f64) -> Option<f64> {
    f.period().filter(|_| b.fract() == 0.0)
}

/// `max |g|` over `2^12` uniform samples of one period (or of `[−1, 1]`),
/// inflated by 10%. An estimate, not a certificate.
pub fn estimate_sup_norm(g: &RealFunction) -> Result<f64> {
    let (lo, hi) = match g.period() {
        Some(p) => (0.0, p),
        None => (-1.0, 1.0),
    };
    let h = (hi - lo) / SUP_SAMPLES as f64;
    let mut m: f64 = 0.0;
    for i in 0..=SUP_SAMPLES {
        let x = lo + i as f64 * h;
        let v = g.eval(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        m = m.max(v.abs());
    }
    Ok(m * SUP_INFLATION)
}

/// Truncated series inverse `M⁻¹g`.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    params: EquationParams,
    g: RealFunction,
    truncation: usize,
    tail_bound: f64,
    sup_norm_g: f64,
    /// Period used to reduce `bⁿx` exactly between terms.
    reduction: Option<f64>,
}

impl SeriesSolution {
    pub fn params(&self) -> &EquationParams {
        &self.params
    }

    pub fn g(&self) -> &RealFunction {
        &self.g
    }

    /// Number of series terms kept.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Uniform bound on the discarded tail.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn sup_norm_g(&self) -> f64 {
        self.sup_norm_g
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = (self.params.a, self.params.b);
        match self.params.regime() {
            Regime::Contractive => {
                // reducing up front keeps the chains of f(x) and f(bx) in step
                let y0 = match self.reduction {
                    Some(p) => reduce_right_closed(x, p),
                    None => x,
                };
                let (mut y, mut w, mut s) = (y0, 1.0, 0.0);
                for _ in 0..self.truncation {
                    s += w * self.g.eval(y);
                    y *= b;
                    if let Some(p) = self.reduction {
                        y = reduce_right_closed(y, p);
                    }
                    w *= a;
                }
                s
            }
            Regime::Expansive => {
                let (mut y, mut w, mut s) = (x, 1.0, 0.0);
                for _ in 0..self.truncation {
                    y /= b;
                    w /= a;
                    s += w * self.g.eval(y);
                }
                -s
            }
        }
    }

    pub fn sample(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    /// The solution as a [`RealFunction`]; periodic whenever `g` is and `b` is
    /// an integer in the contractive regime.
    pub fn to_function(&self) -> RealFunction {
        let me = self.clone();
        let label = format!(
            "M^-1 {:?} (a = {}, b = {})",
            self.g, self.params.a, self.params.b
        );
        match (self.params.regime(), self.reduction) {
            (Regime::Contractive, Some(p)) => {
                RealFunction::periodic_fn(label, p, move |x| me.eval(x))
            }
            _ => RealFunction::from_fn(label, move |x| me.eval(x)),
        }
    }
}

/// Solve `f − a·T_b f = g` to uniform accuracy `tol`.
///
/// `sup_norm_g` must bound `|g|` on the arguments the series visits; when
/// absent, the exact builtin bound or [`estimate_sup_norm`] is used.
pub fn solve(
    params: &EquationParams,
    g: &RealFunction,
    sup_norm_g: Option<f64>,
    tol: f64,
) -> Result<SeriesSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let ratio = params.series_ratio();
    if ratio >= 1.0 {
        let what = match params.regime() {
            Regime::Contractive => "contractive regime in L^p needs |a| < 1 for a pointwise series",
            Regime::Expansive => "expansive regime in L^p needs |a| > 1 for a pointwise series",
        };
        return Err(Error::Regime(format!(
            "{what} (a = {}, b = {}, p = {})",
            params.a, params.b, params.p
        )));
    }
    let sup = match sup_norm_g {
        Some(s) if s >= 0.0 && s.is_finite() => s,
        Some(s) => {
            return Err(Error::InvalidParameter(format!(
                "sup norm of g must be finite and non-negative, got {s}"
            )))
        }
        None => match g.exact_sup_norm() {
            Some(s) => s,
            None => estimate_sup_norm(g)?,
        },
    };
    let truncation = truncation_length(ratio, sup, tol)?;
    let tail_bound = geometric_tail(ratio, truncation)? * sup;
    let reduction = match params.regime() {
        Regime::Contractive => dilated_period(g, params.b),
        Regime::Expansive => None,
    };
    Ok(SeriesSolution {
        params: *params,
        g: g.clone(),
        truncation,
        tail_bound,
        sup_norm_g: sup,
        reduction,
    })
}

/// `b = 0`: `f(x) = g(x) + a/(1−a)·g(0)`, with `g(0)` supplied explicitly.
pub fn solve_b_zero(a: f64, g: &RealFunction, g_at_zero: f64) -> Result<RealFunction> {
    if a == 1.0 {
        return Err(Error::InvalidParameter(
            "b = 0 branch requires a != 1".into(),
        ));
    }
    let shift = a / (1.0 - a) * g_at_zero;
    let inner = g.clone();
    Ok(RealFunction::from_fn(
        format!("{g:?} + {shift}"),
        move |x| inner.eval(x) + shift,
    ))
}

/// `‖T_b‖_p = |b|^{−1/p}`.
pub fn t_norm(params: &EquationParams) -> f64 {
    1.0 / params.p.root(params.b)
}

/// Lower and upper bounds on `‖M f‖_p` given `‖f‖_p`.
pub fn sandwich_bounds(params: &EquationParams, norm_f: f64) -> (f64, f64) {
    let q = params.a.abs() / params.p.root(params.b);
    ((1.0 - q).abs() * norm_f, (1.0 + q) * norm_f)
}

/// `‖g − M⁻¹g‖_∞ ≤ |a|/(1−|a|)·‖g‖_∞` for `|a| < 1`.
pub fn smoothing_distance_bound(a: f64, sup_norm_g: f64) -> Result<f64> {
    if !(a.abs() < 1.0) {
        return Err(Error::Regime(format!(
            "smoothing bound needs |a| < 1, got a = {a}"
        )));
    }
    Ok(a.abs() / (1.0 - a.abs()) * sup_norm_g)
}

/// `|⟨T_b u, v⟩ − ⟨u, b⁻¹ T_{1/b} v⟩|` by quadrature over `iv`.
///
/// Vanishes up to quadrature error when both integrands are supported
/// inside `iv`.
pub fn adjoint_identity_residual(
    b: f64,
    u: &RealFunction,
    v: &RealFunction,
    q: QuadratureSpec,
    iv: Interval,
) -> Result<f64> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dilation factor b must be finite and nonzero, got {b}"
        )));
    }
    let lhs = integrate(|x| u.eval(b * x) * v.eval(x), iv, q)?;
    let rhs = integrate(|x| u.eval(x) * v.eval(x / b) / b, iv, q)?;
    Ok((lhs - rhs).abs())
}

/// `(∫_iv f²)^{1/2}` by quadrature.
pub fn l2_norm(f: &RealFunction, iv: Interval, q: QuadratureSpec) -> Result<f64> {
    Ok(integrate(|x| f.eval(x).powi(2), iv, q)?.sqrt())
}
