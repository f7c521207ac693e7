//! Fractal interpolation on the uniform partition `x_n = n/N`.
//!
//! A period-1 function `g` glued from `N` pieces determines the solution of
//! `f(x) − a·f(Nx) = g(x)`, which interpolates data computable in closed form
//! from `g`, and whose graph over `[0, 1]` is (the closure of) the attractor of
//! the IFS `w_n(x, y) = ((x + n − 1)/N, a·y + g_n(x))`.
//!
//! Pieces are glued on right-closed cells `[x_0, x_1], (x_1, x_2], …,
//! (x_{N−1}, x_N]` and `g` is extended by `g(x) = g(x − 1)` on `(1, ∞)`, so
//! that `g(x_n)` is the left-cell value at every node and `g(0)` is kept
//! separately.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::function::{reduce_right_closed, RealFunction};
use crate::operator::{estimate_sup_norm, solve, EquationParams, SeriesSolution};

/// Tolerance on node abscissae read from data.
pub const NODE_TOL: f64 = 1e-9;
/// Tolerance of the jump identity in [`continuity_condition`].
pub const CONTINUITY_TOL: f64 = 1e-12;
/// Tolerance of the spot checks in [`g_from_base`].
pub const CONTRACT_TOL: f64 = 1e-9;

/// A period-1 function glued from `N ≥ 2` pieces on `[0, 1]`.
///
/// On `((n−1)/N, n/N]` it equals `pieces[n−1]((Nx − n + 1))`; at `0` it equals
/// `value_at_zero`.
#[derive(Clone)]
pub struct PiecewiseG {
    pieces: Vec<RealFunction>,
    value_at_zero: f64,
}

impl fmt::Debug for PiecewiseG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PiecewiseG")
            .field("pieces", &self.pieces)
            .field("value_at_zero", &self.value_at_zero)
            .finish()
    }
}

impl PiecewiseG {
    pub fn new(pieces: Vec<RealFunction>, value_at_zero: f64) -> Result<Self> {
        if pieces.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need N >= 2 pieces, got {}",
                pieces.len()
            )));
        }
        if !value_at_zero.is_finite() {
            return Err(Error::InvalidParameter("g(0) must be finite".into()));
        }
        Ok(Self {
            pieces,
            value_at_zero,
        })
    }

    /// Pieces `g_n ≡ c_n`; `g(0)` defaults to `c_1`.
    pub fn constant_pieces(values: &[f64], value_at_zero: Option<f64>) -> Result<Self> {
        let pieces = values.iter().map(|&c| RealFunction::constant(c)).collect();
        Self::new(
            pieces,
            value_at_zero.unwrap_or(values.first().copied().unwrap_or(0.0)),
        )
    }

    pub fn n(&self) -> usize {
        self.pieces.len()
    }

    pub fn pieces(&self) -> &[RealFunction] {
        &self.pieces
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at_zero
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = reduce_right_closed(x, 1.0);
        if r == 0.0 {
            return self.value_at_zero;
        }
        let t = r * self.n() as f64;
        let idx = (t.ceil() as usize).clamp(1, self.n()) - 1;
        self.pieces[idx].eval(t - idx as f64)
    }

    /// `lim_{t→x+} g(t)`, numeric for pieces without exact limits.
    pub fn right_limit(&self, x: f64) -> f64 {
        let r = x - x.floor();
        let t = r * self.n() as f64;
        let idx = (t.floor() as usize).min(self.n() - 1);
        self.pieces[idx].right_limit_or_numeric(t - idx as f64).0
    }

    /// `g(n/N +)` for `n = 0..N−1` and whether it was obtained numerically.
    pub fn right_limit_at_node(&self, n: usize) -> (f64, bool) {
        self.pieces[n].right_limit_or_numeric(0.0)
    }

    /// `g(n/N)` for `n = 1..N`.
    pub fn value_at_node(&self, n: usize) -> f64 {
        if n == 0 {
            self.value_at_zero
        } else {
            self.pieces[n - 1].eval(1.0)
        }
    }

    /// Whether every piece supplies exact one-sided limits.
    pub fn exact_limits(&self) -> bool {
        self.pieces.iter().all(|p| p.has_right_limits())
    }

    /// `max |g|` if every piece knows its sup norm exactly.
    pub fn exact_sup_norm(&self) -> Option<f64> {
        self.pieces
            .iter()
            .map(|p| p.exact_sup_norm())
            .try_fold(self.value_at_zero.abs(), |m, s| s.map(|s| m.max(s)))
    }
}

/// The reconstructed period-1 function `g`.
pub fn g_from_pieces(pw: &PiecewiseG) -> RealFunction {
    RealFunction::piecewise(pw.clone())
}

fn check_scale(a: f64) -> Result<()> {
    if !(a.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scale factor must satisfy |a| < 1, got {a}"
        )));
    }
    Ok(())
}

/// Data `(x_n, y_n)` on the uniform partition of `[0, 1]` with scale `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationProblem {
    a: f64,
    y: Vec<f64>,
}

impl InterpolationProblem {
    pub fn new(y: Vec<f64>, a: f64) -> Result<Self> {
        check_scale(a)?;
        if y.len() < 3 {
            return Err(Error::Input(format!(
                "need N + 1 >= 3 data points, got {}",
                y.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("data ordinates must be finite".into()));
        }
        Ok(Self { a, y })
    }

    /// Validate that the abscissae are `n/N` within [`NODE_TOL`].
    pub fn from_points(points: &[(f64, f64)], a: f64) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Input(format!(
                "need N + 1 >= 3 data points, got {}",
                points.len()
            )));
        }
        let n = (points.len() - 1) as f64;
        for (i, &(x, _)) in points.iter().enumerate() {
            let want = i as f64 / n;
            if (x - want).abs() > NODE_TOL {
                return Err(Error::Input(format!(
                    "abscissae must form the uniform partition n/N: point {i} has x = {x}, \
                     expected {want}"
                )));
            }
        }
        Self::new(points.iter().map(|p| p.1).collect(), a)
    }

    /// Read a CSV with header `x,y`.
    pub fn from_csv(path: &Path, a: f64) -> Result<Self> {
        Self::from_points(&read_xy_csv(path)?, a)
    }

    pub fn n(&self) -> usize {
        self.y.len() - 1
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let n = self.n() as f64;
        self.y
            .iter()
            .enumerate()
            .map(|(i, &y)| (i as f64 / n, y))
            .collect()
    }

    /// Piecewise-constant `g` whose solution interpolates the data:
    /// `g_n ≡ y_n − a·y_N` and `g(0) = (1 − a)·y_0`.
    pub fn step_pieces(&self) -> PiecewiseG {
        let yn = self.y[self.n()];
        let values: Vec<f64> = self.y[1..].iter().map(|&y| y - self.a * yn).collect();
        PiecewiseG::constant_pieces(&values, Some((1.0 - self.a) * self.y[0]))
            .expect("at least two pieces")
    }

    /// `g = f₀ − a·f₀(N·)` with `f₀` the polyline through the data, extended
    /// with period 1 on `(1, ∞)`. Always satisfies the continuity condition.
    pub fn linear_pieces(&self) -> Result<PiecewiseG> {
        g_from_base(
            &periodic_polyline(self.nodes())?,
            &RealFunction::zero(),
            self.a,
            self.n(),
        )
    }
}

/// Piecewise-linear interpolant of `nodes` on `[0, 1]`, repeated with the
/// right-closed period-1 convention: `f(0)` is the first ordinate and
/// `f(1) = f(2) = …` the last. Abscissae must increase from 0 to 1.
pub fn periodic_polyline(nodes: Vec<(f64, f64)>) -> Result<RealFunction> {
    let increasing = nodes.windows(2).all(|w| w[0].0 < w[1].0);
    if nodes.len() < 2 || !increasing || nodes[0].0 != 0.0 || nodes[nodes.len() - 1].0 != 1.0 {
        return Err(Error::Input(
            "polyline nodes must increase from x = 0 to x = 1".into(),
        ));
    }
    let eval_nodes = nodes.clone();
    let at = move |r: f64, nodes: &[(f64, f64)]| {
        let i = nodes.partition_point(|p| p.0 < r).clamp(1, nodes.len() - 1);
        let ((x0, y0), (x1, y1)) = (nodes[i - 1], nodes[i]);
        y0 + (y1 - y0) * (r - x0) / (x1 - x0)
    };
    Ok(RealFunction::periodic_fn("polyline", 1.0, move |x| {
        at(reduce_right_closed(x, 1.0), &eval_nodes)
    })
    .with_right_limit(move |x| at(x - x.floor(), &nodes)))
}

/// `x,y` rows with a header.
pub fn read_xy_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::Input(format!(
            "{}: expected header 'x,y', got '{}'",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| {
                Error::Input(format!(
                    "{}: row {}: cannot parse '{s}'",
                    path.display(),
                    line + 1
                ))
            })
        };
        out.push((parse(&rec[0])?, parse(&rec[1])?));
    }
    Ok(out)
}

/// `(y_0, …, y_N)` interpolated by the solution of `f − a·f(N·) = g`.
pub fn interpolation_values(g: &RealFunction, a: f64, n: usize) -> Result<Vec<f64>> {
    if a == 1.0 {
        return Err(Error::InvalidParameter(
            "a = 1 has no interpolation values".into(),
        ));
    }
    check_scale(a)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need N >= 2, got {n}")));
    }
    let g1 = g.eval(1.0);
    let mut y = Vec::with_capacity(n + 1);
    y.push(g.eval(0.0) / (1.0 - a));
    for i in 1..n {
        y.push(g.eval(i as f64 / n as f64) + a / (1.0 - a) * g1);
    }
    y.push(g1 / (1.0 - a));
    Ok(y)
}

/// One map `w_n(x, y) = ((x + n − 1)/N, a·y + g_n(x))`.
#[derive(Debug, Clone)]
pub struct IfsMap {
    n: usize,
    big_n: usize,
    a: f64,
    g: RealFunction,
    g_at_zero: f64,
    g_at_one: f64,
}

impl IfsMap {
    /// One-based map index.
    pub fn index(&self) -> usize {
        self.n
    }

    /// `g_n(x)` on `[0, 1]`, with the one-sided endpoint values.
    pub fn g_n(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.g_at_zero
        } else if x == 1.0 {
            self.g_at_one
        } else {
            self.g.eval(x)
        }
    }

    pub fn g_at_zero(&self) -> f64 {
        self.g_at_zero
    }

    pub fn g_at_one(&self) -> f64 {
        self.g_at_one
    }

    /// `L_n(x) = (x + n − 1)/N`.
    pub fn l(&self, x: f64) -> f64 {
        (x + (self.n - 1) as f64) / self.big_n as f64
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (self.l(x), self.a * y + self.g_n(x))
    }
}

/// The IFS `{w_1, …, w_N}` with a common vertical scale `a`.
#[derive(Debug, Clone)]
pub struct IfsSpec {
    a: f64,
    maps: Vec<IfsMap>,
    approximate: bool,
}

impl IfsSpec {
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn maps(&self) -> &[IfsMap] {
        &self.maps
    }

    /// Set when some `g_n(0)` came from a numeric right limit.
    pub fn approximate(&self) -> bool {
        self.approximate
    }
}

/// IFS whose attractor is the closure of the graph of the FIF of `pw`.
pub fn ifs_from_g(pw: &PiecewiseG, a: f64) -> Result<IfsSpec> {
    check_scale(a)?;
    let big_n = pw.n();
    let mut approximate = false;
    let maps = (0..big_n)
        .map(|i| {
            let (g_at_zero, approx) = pw.right_limit_at_node(i);
            approximate |= approx;
            IfsMap {
                n: i + 1,
                big_n,
                a,
                g: pw.pieces[i].clone(),
                g_at_zero,
                g_at_one: pw.value_at_node(i + 1),
            }
        })
        .collect();
    Ok(IfsSpec {
        a,
        maps,
        approximate,
    })
}

/// Like [`ifs_from_g`] for a period-1 function given as a single rule.
pub fn ifs_from_function(g: &RealFunction, a: f64, big_n: usize) -> Result<IfsSpec> {
    check_scale(a)?;
    if big_n < 2 {
        return Err(Error::InvalidParameter(format!("need N >= 2, got {big_n}")));
    }
    if !g.has_right_limits() {
        return Err(Error::UnsupportedFunction(format!(
            "{g:?} provides no one-sided limits; wrap it as piecewise pieces or attach a \
             right-limit rule"
        )));
    }
    let nf = big_n as f64;
    let maps = (1..=big_n)
        .map(|n| {
            let inner = g.clone();
            let shift = (n - 1) as f64;
            IfsMap {
                n,
                big_n,
                a,
                g: RealFunction::from_fn(format!("g_{n}"), move |x| inner.eval((x + shift) / nf)),
                g_at_zero: g.right_limit(shift / nf).unwrap_or(f64::NAN),
                g_at_one: g.eval(n as f64 / nf),
            }
        })
        .collect();
    Ok(IfsSpec {
        a,
        maps,
        approximate: false,
    })
}

/// Jump identity `g(n/N+) − g(n/N) = a/(1−a)·(g(1) − g(0))` at every interior
/// node, to [`CONTINUITY_TOL`] relative to the magnitudes involved.
pub fn continuity_condition(pw: &PiecewiseG, a: f64) -> bool {
    let rhs = a / (1.0 - a) * (pw.value_at_node(pw.n()) - pw.value_at_zero);
    (1..pw.n()).all(|n| {
        let (plus, _) = pw.right_limit_at_node(n);
        let at = pw.value_at_node(n);
        let scale = 1f64.max(plus.abs()).max(at.abs()).max(rhs.abs());
        ((plus - at) - rhs).abs() <= CONTINUITY_TOL * scale
    })
}

/// Pieces of `g = g₀ + f₀ − a·f₀(N·)`.
///
/// `f₀` must satisfy `f₀(x) = f₀(x − 1)` on `(1, ∞)`; `g₀` must have period 1
/// and vanish at 0 and 1. Both are spot-checked.
pub fn g_from_base(
    f0: &RealFunction,
    g0: &RealFunction,
    a: f64,
    big_n: usize,
) -> Result<PiecewiseG> {
    check_scale(a)?;
    if big_n < 2 {
        return Err(Error::InvalidParameter(format!("need N >= 2, got {big_n}")));
    }
    let probes = [0.0625, 0.25, 0.3, 0.5, 0.71, 0.9375, 1.0];
    for &t in &probes {
        let (u, v) = (f0.eval(t + 1.0), f0.eval(t));
        if (u - v).abs() > CONTRACT_TOL {
            return Err(Error::ContractViolation(format!(
                "f0(x) = f0(x - 1) on (1, inf) fails at x = {}: {u} vs {v}",
                t + 1.0
            )));
        }
        let (u, v) = (g0.eval(t + 1.0), g0.eval(t));
        if (u - v).abs() > CONTRACT_TOL {
            return Err(Error::ContractViolation(format!(
                "g0 has period 1 fails at x = {t}: {v} vs {u}"
            )));
        }
    }
    for x in [0.0, 1.0] {
        let v = g0.eval(x);
        if v.abs() > CONTRACT_TOL {
            return Err(Error::ContractViolation(format!(
                "g0({x}) = 0 fails: g0({x}) = {v}"
            )));
        }
    }
    let nf = big_n as f64;
    let pieces = (1..=big_n)
        .map(|n| {
            let shift = (n - 1) as f64;
            let (f0e, g0e) = (f0.clone(), g0.clone());
            let (f0l, g0l) = (f0.clone(), g0.clone());
            RealFunction::from_fn(format!("base piece {n}"), move |t| {
                let x = (t + shift) / nf;
                g0e.eval(x) + f0e.eval(x) - a * f0e.eval(t + shift)
            })
            .with_right_limit(move |t| {
                let x = (t + shift) / nf;
                g0l.right_limit_or_numeric(x).0 + f0l.right_limit_or_numeric(x).0
                    - a * f0l.right_limit_or_numeric(t + shift).0
            })
        })
        .collect();
    let z = g0.eval(0.0) + (1.0 - a) * f0.eval(0.0);
    PiecewiseG::new(pieces, z)
}

/// The FIF of `pw` as a truncated series solution with `b = N`.
pub fn fif_solution(pw: &PiecewiseG, a: f64, tol: f64) -> Result<SeriesSolution> {
    check_scale(a)?;
    let params = EquationParams::sup(a, pw.n() as f64)?;
    let g = g_from_pieces(pw);
    let sup = match pw.exact_sup_norm() {
        Some(s) => s,
        None => estimate_sup_norm(&g)?,
    };
    solve(&params, &g, Some(sup), tol)
}

/// `f(x)` for the FIF of `pw`, accurate to `tol`.
pub fn evaluate_fif(pw: &PiecewiseG, a: f64, x: f64, tol: f64) -> Result<f64> {
    Ok(fif_solution(pw, a, tol)?.eval(x))
}

/// Points `(x, y)`, `x ∈ [0, 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    points: Vec<(f64, f64)>,
}

impl PointCloud {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Chaos game with uniform map choice. `iterations` counts every step; the
/// first `burn_in` points are discarded.
pub fn render_attractor(
    ifs: &IfsSpec,
    iterations: usize,
    seed: (f64, f64),
    burn_in: usize,
    rng_seed: u64,
) -> Result<PointCloud> {
    if iterations <= burn_in {
        return Err(Error::InvalidParameter(format!(
            "iterations ({iterations}) must exceed burn-in ({burn_in})"
        )));
    }
    if !(0.0..=1.0).contains(&seed.0) || !seed.1.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "seed point must lie in [0, 1] x R, got {seed:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (mut x, mut y) = seed;
    let mut points = Vec::with_capacity(iterations - burn_in);
    for i in 0..iterations {
        let map = &ifs.maps[rng.random_range(0..ifs.n())];
        (x, y) = map.apply(x, y);
        if i >= burn_in {
            points.push((x, y));
        }
    }
    Ok(PointCloud { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{sin_squared_pi, Builtin};
    use approx::assert_abs_diff_eq;

    fn example(a: f64) -> PiecewiseG {
        PiecewiseG::constant_pieces(&[0.0, 1.0 - a], Some(0.0)).unwrap()
    }

    #[test]
    fn example_reconstruction() {
        let g = g_from_pieces(&example(0.5));
        assert_eq!(g.eval(0.25), 0.0);
        assert_eq!(g.eval(0.5), 0.0);
        assert_eq!(g.eval(0.75), 0.5);
        assert_eq!(g.eval(1.0), 0.5);
        assert_eq!(g.eval(1.75), 0.5);
        assert_eq!(g.eval(0.0), 0.0);
        assert_eq!(g.right_limit(0.5), Some(0.5));
    }

    #[test]
    fn example_interpolation_values() {
        let g = g_from_pieces(&example(0.3));
        let y = interpolation_values(&g, 0.3, 2).unwrap();
        assert_eq!(y[0], 0.0);
        assert_abs_diff_eq!(y[1], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(y[2], 1.0, epsilon = 1e-15);
        let y0 = interpolation_values(&g, 0.0, 2).unwrap();
        assert_eq!(y0, vec![0.0, 0.0, 0.7]);
        assert!(interpolation_values(&g, 1.0, 2).is_err());
    }

    #[test]
    fn sin_squared_values_match_series() {
        let g = sin_squared_pi();
        let y = interpolation_values(&g, 0.5, 4).unwrap();
        let params = EquationParams::sup(0.5, 4.0).unwrap();
        let f = solve(&params, &g, Some(1.0), 1e-12).unwrap();
        for (i, yi) in y.iter().enumerate() {
            assert_abs_diff_eq!(*yi, f.eval(i as f64 / 4.0), epsilon = 1e-11);
        }
        assert_abs_diff_eq!(y[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[4], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(y[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn example_ifs_maps() {
        let a = 0.3;
        let ifs = ifs_from_g(&example(a), a).unwrap();
        assert!(!ifs.approximate());
        let (w1, w2) = (&ifs.maps()[0], &ifs.maps()[1]);
        for &(x, y) in &[(0.0, 0.4), (0.3, -1.0), (1.0, 2.0)] {
            assert_eq!(w1.apply(x, y), (x / 2.0, a * y));
            let (u, v) = w2.apply(x, y);
            assert_eq!(u, x / 2.0 + 0.5);
            assert_abs_diff_eq!(v, (1.0 - a) + a * y, epsilon = 1e-15);
        }
    }

    #[test]
    fn ifs_of_zero_and_continuous_g() {
        let zero = PiecewiseG::constant_pieces(&[0.0, 0.0], None).unwrap();
        for m in ifs_from_g(&zero, 0.4).unwrap().maps() {
            assert_eq!(m.apply(0.3, 2.0).1, 0.8);
        }
        let ifs = ifs_from_function(&sin_squared_pi(), 0.4, 3).unwrap();
        for m in ifs.maps() {
            let n = m.index() as f64;
            assert_abs_diff_eq!(
                m.g_at_zero(),
                ((n - 1.0) / 3.0 * std::f64::consts::PI).sin().powi(2),
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                m.g_at_one(),
                (n / 3.0 * std::f64::consts::PI).sin().powi(2),
                epsilon = 1e-15
            );
        }
        let bare = RealFunction::periodic_fn("bare", 1.0, |x| x);
        assert!(matches!(
            ifs_from_function(&bare, 0.4, 2),
            Err(Error::UnsupportedFunction(_))
        ));
    }

    #[test]
    fn continuity_examples() {
        assert!(continuity_condition(&example(0.5), 0.5));
        assert!(!continuity_condition(&example(0.3), 0.3));
        let pieces = (1..=3)
            .map(|n| {
                let s = (n - 1) as f64;
                RealFunction::from_fn("sin2", move |t| {
                    (std::f64::consts::PI * (t + s) / 3.0).sin().powi(2)
                })
                .with_right_limit(move |t| (std::f64::consts::PI * (t + s) / 3.0).sin().powi(2))
            })
            .collect();
        let pw = PiecewiseG::new(pieces, 0.0).unwrap();
        assert!(continuity_condition(&pw, 0.7));
    }

    #[test]
    fn base_construction_reproduces_example() {
        let f0: RealFunction = Builtin::Saw.into();
        let pw = g_from_base(&f0, &RealFunction::zero(), 0.5, 2).unwrap();
        let g = g_from_pieces(&pw);
        assert_abs_diff_eq!(g.eval(0.25), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.eval(0.75), 0.5, epsilon = 1e-15);
        assert!(continuity_condition(&pw, 0.5));

        let g0 = sin_squared_pi();
        let pw = g_from_base(&f0, &g0, 0.0, 2).unwrap();
        assert_abs_diff_eq!(
            g_from_pieces(&pw).eval(0.3),
            0.3 + g0.eval(0.3),
            epsilon = 1e-15
        );
        let pw = g_from_base(&RealFunction::zero(), &g0, 0.6, 3).unwrap();
        assert_abs_diff_eq!(g_from_pieces(&pw).eval(0.8), g0.eval(0.8), epsilon = 1e-15);

        let bad: RealFunction = Builtin::XMinusHalf.into();
        assert!(matches!(
            g_from_base(&bad, &RealFunction::zero(), 0.5, 2),
            Err(Error::ContractViolation(m)) if m.contains("f0")
        ));
        assert!(matches!(
            g_from_base(&f0, &RealFunction::constant(1.0), 0.5, 2),
            Err(Error::ContractViolation(m)) if m.contains("g0(0)")
        ));
    }

    #[test]
    fn fif_examples() {
        let pw = example(0.5);
        assert_abs_diff_eq!(
            evaluate_fif(&pw, 0.5, 0.7, 1e-10).unwrap(),
            0.7,
            epsilon = 1e-10
        );
        let pw = example(0.3);
        assert_abs_diff_eq!(
            evaluate_fif(&pw, 0.3, 0.5, 1e-10).unwrap(),
            0.3,
            epsilon = 1e-10
        );
        assert_eq!(evaluate_fif(&pw, 0.3, 0.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn problem_from_points() {
        let p =
            InterpolationProblem::from_points(&[(0.0, 0.0), (0.5, 0.3), (1.0, 1.0)], 0.3).unwrap();
        let pw = p.step_pieces();
        assert_eq!(pw.value_at_node(1), 0.0);
        assert_abs_diff_eq!(pw.value_at_node(2), 0.7, epsilon = 1e-15);
        assert!(
            InterpolationProblem::from_points(&[(0.0, 0.0), (0.4, 0.3), (1.0, 1.0)], 0.3).is_err()
        );
        assert!(InterpolationProblem::from_points(&[(0.0, 0.0), (1.0, 1.0)], 0.3).is_err());
        assert!(
            InterpolationProblem::from_points(&[(0.0, 0.0), (0.5, 0.3), (1.0, 1.0)], 1.0).is_err()
        );
    }

    #[test]
    fn linear_pieces_interpolate_continuously() {
        let p = InterpolationProblem::new(vec![0.2, -0.4, 0.9, 0.1], -0.6).unwrap();
        let pw = p.linear_pieces().unwrap();
        assert!(continuity_condition(&pw, -0.6));
        let f = fif_solution(&pw, -0.6, 1e-12).unwrap();
        for (x, y) in p.nodes() {
            assert_abs_diff_eq!(f.eval(x), y, epsilon = 1e-10);
        }
    }

    #[test]
    fn chaos_game_of_zero_g_collapses() {
        let zero = PiecewiseG::constant_pieces(&[0.0, 0.0, 0.0], None).unwrap();
        let ifs = ifs_from_g(&zero, 0.5).unwrap();
        let cloud = render_attractor(&ifs, 1100, (0.2, 1.0), 100, 7).unwrap();
        assert_eq!(cloud.len(), 1000);
        let bound = 0.5f64.powi(100);
        assert!(cloud.points().iter().all(|p| p.1.abs() <= bound));
        assert!(render_attractor(&ifs, 10, (0.2, 1.0), 10, 7).is_err());
    }

    #[test]
    fn chaos_game_is_reproducible() {
        let ifs = ifs_from_g(&example(0.5), 0.5).unwrap();
        let c1 = render_attractor(&ifs, 5000, (0.3, 0.0), 100, 42).unwrap();
        let c2 = render_attractor(&ifs, 5000, (0.3, 0.0), 100, 42).unwrap();
        assert_eq!(c1, c2);
        assert!(c1.points().iter().all(|p| (p.1 - p.0).abs() < 1e-3));
    }
}
