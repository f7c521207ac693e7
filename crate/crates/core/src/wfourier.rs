//! Weierstrass Fourier bases on `L²[0, 1]` with `b = 2`.
//!
//! The hat functions are the images of the classical basis under `M⁻¹`:
//!
//! ```text
//! ĉ_k(x) = √(1−a²) Σ_{n≥0} aⁿ c_k(2ⁿx),   c_k(x) = √2 cos(2πkx)
//! ŝ_k(x) = √(1−a²) Σ_{n≥0} aⁿ s_k(2ⁿx),   s_k(x) = √2 sin(2πkx)
//! ```
//!
//! with Gram entries `⟨ĉ_k, ĉ_l⟩ = a^j` when one index is `2^j` times the
//! other. The tilde functions orthonormalize them: `c̃_k = ĉ_k` for odd `k`
//! and `c̃_k = √(1−a²) ĉ_k − a c_{k/2}` for even `k`, likewise for sines.
//!
//! Phases are tracked as `frac(k·x)` and doubled in place, which is exact in
//! binary floating point, so `a = 0` reproduces the classical functions bit
//! for bit.

use std::f64::consts::{SQRT_2, TAU};
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::numerics::{integrate, pairwise_sum, truncation_length, Interval, QuadratureSpec};

/// Default accuracy of basis evaluation.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Threshold defining the default number of dyadic terms in [`transform_coeffs`].
pub const TAIL_THRESHOLD: f64 = 1e-12;
/// Number of equispaced midpoints in [`l2_error_512`].
pub const ERROR_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    Const,
    Cos,
    Sin,
}

impl BasisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisKind::Const => "const",
            BasisKind::Cos => "cos",
            BasisKind::Sin => "sin",
        }
    }
}

impl std::str::FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "const" => Ok(BasisKind::Const),
            "cos" => Ok(BasisKind::Cos),
            "sin" => Ok(BasisKind::Sin),
            other => Err(Error::Input(format!(
                "basis kind must be const, cos or sin, got '{other}'"
            ))),
        }
    }
}

/// `e`, `c_k` or `s_k` (and their hat and tilde counterparts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    kind: BasisKind,
    k: u32,
}

impl BasisIndex {
    pub const CONST: BasisIndex = BasisIndex {
        kind: BasisKind::Const,
        k: 0,
    };

    pub fn new(kind: BasisKind, k: u32) -> Result<Self> {
        match kind {
            BasisKind::Const => Ok(Self::CONST),
            _ if k == 0 => Err(Error::InvalidParameter(format!(
                "{} index must be >= 1",
                kind.as_str()
            ))),
            _ => Ok(Self { kind, k }),
        }
    }

    /// # Panics
    /// If `k == 0`.
    pub fn cos(k: u32) -> Self {
        Self::new(BasisKind::Cos, k).expect("cosine index must be >= 1")
    }

    /// # Panics
    /// If `k == 0`.
    pub fn sin(k: u32) -> Self {
        Self::new(BasisKind::Sin, k).expect("sine index must be >= 1")
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// `0` for the constant.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// `1, c_1, s_1, …, c_K, s_K`.
    pub fn family(k_max: u32) -> Vec<Self> {
        let mut v = vec![Self::CONST];
        for k in 1..=k_max {
            v.push(Self::cos(k));
            v.push(Self::sin(k));
        }
        v
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BasisKind::Const => write!(f, "e"),
            BasisKind::Cos => write!(f, "c{}", self.k),
            BasisKind::Sin => write!(f, "s{}", self.k),
        }
    }
}

/// The scale `a`, `|a| < 1`; `b` is 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WfParams {
    a: f64,
}

impl WfParams {
    pub const B: f64 = 2.0;

    pub fn new(a: f64) -> Result<Self> {
        if !(a.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Weierstrass Fourier basis needs |a| < 1, got {a}"
            )));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `√(1 − a²)`.
    pub fn norm_factor(&self) -> f64 {
        (1.0 - self.a * self.a).sqrt()
    }
}

fn frac(y: f64) -> f64 {
    y - y.floor()
}

/// `√2 cos(2πkx)` or `√2 sin(2πkx)`; `1` for the constant.
pub fn eval_classical(idx: BasisIndex, x: f64) -> f64 {
    let phase = frac(idx.k as f64 * x);
    trig(idx.kind, phase)
}

#[inline]
fn trig(kind: BasisKind, phase: f64) -> f64 {
    match kind {
        BasisKind::Const => 1.0,
        BasisKind::Cos => SQRT_2 * (TAU * phase).cos(),
        BasisKind::Sin => SQRT_2 * (TAU * phase).sin(),
    }
}

/// Hat/tilde evaluator with the series length fixed once.
#[derive(Debug, Clone, Copy)]
pub struct BasisEvaluator {
    wp: WfParams,
    terms: usize,
}

impl BasisEvaluator {
    /// Series length from the operator rule: `|a|^T/(1−|a|)·√(2(1−a²)) ≤ tol`.
    pub fn new(wp: WfParams, tol: f64) -> Result<Self> {
        let terms = truncation_length(wp.a.abs(), SQRT_2 * wp.norm_factor(), tol)?.max(1);
        Ok(Self { wp, terms })
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn params(&self) -> WfParams {
        self.wp
    }

    pub fn hat(&self, idx: BasisIndex, x: f64) -> f64 {
        if idx.kind == BasisKind::Const {
            return 1.0;
        }
        let mut phase = frac(idx.k as f64 * x);
        let (mut w, mut s) = (1.0, 0.0);
        for _ in 0..self.terms {
            s += w * trig(idx.kind, phase);
            phase = frac(2.0 * phase);
            w *= self.wp.a;
        }
        self.wp.norm_factor() * s
    }

    pub fn tilde(&self, idx: BasisIndex, x: f64) -> f64 {
        if idx.kind == BasisKind::Const || idx.k % 2 == 1 {
            return self.hat(idx, x);
        }
        let half = BasisIndex {
            kind: idx.kind,
            k: idx.k / 2,
        };
        self.wp.norm_factor() * self.hat(idx, x) - self.wp.a * eval_classical(half, x)
    }

    pub fn eval(&self, basis: Basis, idx: BasisIndex, x: f64) -> f64 {
        match basis {
            Basis::Classical => eval_classical(idx, x),
            Basis::Hat => self.hat(idx, x),
            Basis::Tilde => self.tilde(idx, x),
        }
    }
}

/// Which family of functions an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Classical,
    Hat,
    Tilde,
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "classical" => Ok(Basis::Classical),
            "hat" => Ok(Basis::Hat),
            "tilde" => Ok(Basis::Tilde),
            other => Err(Error::Input(format!(
                "basis must be classical, hat or tilde, got '{other}'"
            ))),
        }
    }
}

pub fn eval_hat(idx: BasisIndex, wp: WfParams, x: f64, tol: f64) -> Result<f64> {
    Ok(BasisEvaluator::new(wp, tol)?.hat(idx, x))
}

pub fn eval_tilde(idx: BasisIndex, wp: WfParams, x: f64, tol: f64) -> Result<f64> {
    Ok(BasisEvaluator::new(wp, tol)?.tilde(idx, x))
}

/// A basis function as a period-1 [`RealFunction`].
pub fn basis_function(
    basis: Basis,
    idx: BasisIndex,
    wp: WfParams,
    tol: f64,
) -> Result<RealFunction> {
    let ev = BasisEvaluator::new(wp, tol)?;
    Ok(RealFunction::periodic_fn(
        format!("{basis:?} {idx}"),
        1.0,
        move |x| ev.eval(basis, idx, x),
    ))
}

/// `⟨ĥ_i, ĥ_j⟩` in closed form.
pub fn gram_hat_analytic(i: BasisIndex, j: BasisIndex, wp: WfParams) -> f64 {
    if i.kind != j.kind {
        return 0.0;
    }
    if i.kind == BasisKind::Const {
        return 1.0;
    }
    let (lo, hi) = if i.k <= j.k { (i.k, j.k) } else { (j.k, i.k) };
    if hi % lo != 0 {
        return 0.0;
    }
    let q = hi / lo;
    if q.is_power_of_two() {
        wp.a.powi(q.trailing_zeros() as i32)
    } else {
        0.0
    }
}

/// `⟨ĥ_i, ĥ_j⟩` by midpoint quadrature over `[0, 1]`.
pub fn gram_quadrature(
    i: BasisIndex,
    j: BasisIndex,
    wp: WfParams,
    q: QuadratureSpec,
    tol: f64,
) -> Result<f64> {
    let ev = BasisEvaluator::new(wp, tol)?;
    integrate(|x| ev.hat(i, x) * ev.hat(j, x), Interval::unit(), q)
}

/// A symmetric matrix of inner products with labelled rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    labels: Vec<BasisIndex>,
    data: Vec<f64>,
}

impl GramMatrix {
    fn from_fn(labels: Vec<BasisIndex>, f: impl Fn(usize, usize) -> f64) -> Self {
        let n = labels.len();
        let mut data = vec![0.0; n * n];
        for r in 0..n {
            for c in r..n {
                let v = f(r, c);
                data[r * n + c] = v;
                data[c * n + r] = v;
            }
        }
        Self { labels, data }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisIndex] {
        &self.labels
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.size() + c]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|r| (0..n).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &GramMatrix) -> Result<f64> {
        if self.labels != other.labels {
            return Err(Error::InvalidParameter(
                "Gram matrices index different functions".into(),
            ));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }

    /// `max |G − I|`.
    pub fn max_identity_deviation(&self) -> f64 {
        let n = self.size();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| (self.get(r, c) - if r == c { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    /// LU determinant.
    pub fn determinant(&self) -> f64 {
        let n = self.size();
        DMatrix::from_row_slice(n, n, &self.data).lu().determinant()
    }
}

pub fn gram_matrix_analytic(labels: &[BasisIndex], wp: WfParams) -> GramMatrix {
    GramMatrix::from_fn(labels.to_vec(), |r, c| {
        gram_hat_analytic(labels[r], labels[c], wp)
    })
}

/// `(f(x_i))` on the midpoint nodes of `[0, 1]` for each function.
pub fn sample_basis(
    basis: Basis,
    labels: &[BasisIndex],
    wp: WfParams,
    q: QuadratureSpec,
    tol: f64,
) -> Result<Vec<Vec<f64>>> {
    let ev = BasisEvaluator::new(wp, tol)?;
    let nodes = q.nodes(Interval::unit());
    Ok(labels
        .par_iter()
        .map(|&idx| nodes.iter().map(|&x| ev.eval(basis, idx, x)).collect())
        .collect())
}

fn discrete_inner(u: &[f64], v: &[f64]) -> f64 {
    let prod: Vec<f64> = u.iter().zip(v).map(|(x, y)| x * y).collect();
    pairwise_sum(&prod) / u.len() as f64
}

/// Gram matrix of `basis` functions by midpoint quadrature; every function is
/// sampled once.
pub fn gram_matrix_quadrature(
    basis: Basis,
    labels: &[BasisIndex],
    wp: WfParams,
    q: QuadratureSpec,
    tol: f64,
) -> Result<GramMatrix> {
    let samples = sample_basis(basis, labels, wp, q, tol)?;
    let n = labels.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|r| (r..n).map(move |c| (r, c))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(r, c)| discrete_inner(&samples[r], &samples[c]))
        .collect();
    let mut data = vec![0.0; n * n];
    for (&(r, c), v) in pairs.iter().zip(values) {
        data[r * n + c] = v;
        data[c * n + r] = v;
    }
    Ok(GramMatrix {
        labels: labels.to_vec(),
        data,
    })
}

/// Determinants of leading blocks of the hat Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramDetReport {
    pub m: u32,
    /// `det (⟨ĉ_k, ĉ_l⟩)_{k,l ≤ 2^m}` by LU.
    pub cos_block: f64,
    /// Closed form of `cos_block`: `(1−a²)^{⌊2^m / 2⌋}`.
    pub cos_block_closed_form: f64,
    /// Determinant over `{ĉ_k, ŝ_k : k ≤ 2^m}`.
    pub paired_block: f64,
    /// `(1−a²)^{2^m}`.
    pub conjectured: f64,
}

/// Leading-block determinants for `0 ≤ m ≤ 6`, reported side by side with
/// `(1 − a²)^{2^m}`.
///
/// Dyadic chains `k, 2k, 4k, …` decouple and each chain block has the
/// Kac–Murdock–Szegő form `a^{|i−j|}`, with determinant `(1−a²)^{len−1}`;
/// summing over chains gives one factor per even index.
pub fn gram_det(m: u32, wp: WfParams) -> Result<GramDetReport> {
    if m > 6 {
        return Err(Error::InvalidParameter(format!(
            "gram_det supports m <= 6, got {m}"
        )));
    }
    let size = 1u32 << m;
    let cos: Vec<BasisIndex> = (1..=size).map(BasisIndex::cos).collect();
    let paired: Vec<BasisIndex> = (1..=size)
        .map(BasisIndex::cos)
        .chain((1..=size).map(BasisIndex::sin))
        .collect();
    let one_minus = 1.0 - wp.a * wp.a;
    Ok(GramDetReport {
        m,
        cos_block: gram_matrix_analytic(&cos, wp).determinant(),
        cos_block_closed_form: one_minus.powi((size / 2) as i32),
        paired_block: gram_matrix_analytic(&paired, wp).determinant(),
        conjectured: one_minus.powi(size as i32),
    })
}

/// Ambient space of the series in [`inner_product_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    /// `L²(ℝ)`, where `T_b* T_b = 1/b`.
    Line,
    /// Period-1 functions on `[0, 1]` with integer `b`, where `T_b` is an isometry.
    Periodic,
}

/// Which side the dilation acts on in a base inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `⟨g_k, T_{b^m} g_l⟩`.
    Forward,
    /// `⟨g_k, T*_{b^m} g_l⟩`.
    Adjoint,
}

/// `⟨f_k, f_l⟩` for `f = M⁻¹g` and orthonormal `g_k`, from the base inner
/// products of the `g`s:
///
/// ```text
/// c·δ_kl + Σ_{n=1}^{terms} Σ_{m=1}^{n} w(n, m) ⟨g_k, (T_{b^m} + T*_{b^m}) g_l⟩
/// ```
///
/// On the line `c = (1 − a²/b)⁻¹`, `w = a^{2n−m} b^{m−n}`; on the periodic
/// space `c = (1 − a²)⁻¹`, `w = a^{2n−m}`.
pub fn inner_product_series<F>(
    k: u32,
    l: u32,
    a: f64,
    b: f64,
    base_ip: F,
    terms: usize,
    setting: Setting,
) -> Result<f64>
where
    F: Fn(u32, Side) -> f64,
{
    if terms == 0 {
        return Err(Error::InvalidParameter(
            "need at least one series term".into(),
        ));
    }
    let shrink = match setting {
        Setting::Line => {
            if !(a * a < b) {
                return Err(Error::Regime(format!(
                    "series needs a^2 < b, got a = {a}, b = {b}"
                )));
            }
            1.0 / b
        }
        Setting::Periodic => {
            if !(a.abs() < 1.0) {
                return Err(Error::Regime(format!(
                    "periodic series needs |a| < 1, got a = {a}"
                )));
            }
            1.0
        }
    };
    let c = 1.0 / (1.0 - a * a * shrink);
    let base: Vec<f64> = (1..=terms as u32)
        .map(|m| base_ip(m, Side::Forward) + base_ip(m, Side::Adjoint))
        .collect();
    let mut total = if k == l { c } else { 0.0 };
    for n in 1..=terms {
        for m in 1..=n {
            let w = a.powi((2 * n - m) as i32) * shrink.powi((n - m) as i32);
            total += w * base[m - 1];
        }
    }
    Ok(total)
}

/// Classical or tilde coefficients `(α_0, α_1..K, β_1..K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    pub alpha0: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub basis: CoeffBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffBasis {
    Classical,
    Tilde,
}

impl CoeffBasis {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoeffBasis::Classical => "classical",
            CoeffBasis::Tilde => "tilde",
        }
    }
}

impl CoeffVector {
    pub fn new(alpha0: f64, alphas: Vec<f64>, betas: Vec<f64>, basis: CoeffBasis) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::InvalidParameter(format!(
                "{} cosine but {} sine coefficients",
                alphas.len(),
                betas.len()
            )));
        }
        if !alpha0.is_finite() || alphas.iter().chain(&betas).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficients must be finite".into(),
            ));
        }
        Ok(Self {
            alpha0,
            alphas,
            betas,
            basis,
        })
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// Coefficient of basis function `idx`, zero past `K`.
    pub fn get(&self, idx: BasisIndex) -> f64 {
        let i = idx.k as usize;
        match idx.kind {
            BasisKind::Const => self.alpha0,
            BasisKind::Cos => self.alphas.get(i - 1).copied().unwrap_or(0.0),
            BasisKind::Sin => self.betas.get(i - 1).copied().unwrap_or(0.0),
        }
    }

    /// Keep the first `k` pairs.
    pub fn truncated(&self, k: usize) -> Self {
        let k = k.min(self.k());
        Self {
            alpha0: self.alpha0,
            alphas: self.alphas[..k].to_vec(),
            betas: self.betas[..k].to_vec(),
            basis: self.basis,
        }
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.alpha0 * self.alpha0
            + self
                .alphas
                .iter()
                .chain(&self.betas)
                .map(|v| v * v)
                .sum::<f64>()
    }

    /// Rows `basis,kind,k,value`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["basis", "kind", "k", "value"])?;
        let tag = self.basis.as_str();
        w.write_record([tag, "const", "0", &format!("{:?}", self.alpha0)])?;
        for (i, v) in self.alphas.iter().enumerate() {
            w.write_record([tag, "cos", &(i + 1).to_string(), &format!("{v:?}")])?;
        }
        for (i, v) in self.betas.iter().enumerate() {
            w.write_record([tag, "sin", &(i + 1).to_string(), &format!("{v:?}")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path)?;
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["basis", "kind", "k", "value"] {
            return Err(Error::Input(format!(
                "{}: expected header 'basis,kind,k,value'",
                path.display()
            )));
        }
        let mut basis = None;
        let mut alpha0 = 0.0;
        let (mut alphas, mut betas) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            let tag = match &rec[0] {
                "classical" => CoeffBasis::Classical,
                "tilde" => CoeffBasis::Tilde,
                other => {
                    return Err(Error::Input(format!(
                        "basis must be classical or tilde, got '{other}'"
                    )))
                }
            };
            if *basis.get_or_insert(tag) != tag {
                return Err(Error::Input("mixed bases in one coefficient file".into()));
            }
            let kind: BasisKind = rec[1].parse()?;
            let k: usize = rec[2]
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("cannot parse index '{}'", &rec[2])))?;
            let v: f64 = rec[3]
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("cannot parse value '{}'", &rec[3])))?;
            let slot = match kind {
                BasisKind::Const => {
                    alpha0 = v;
                    continue;
                }
                BasisKind::Cos => &mut alphas,
                BasisKind::Sin => &mut betas,
            };
            if k == 0 {
                return Err(Error::Input("cos/sin rows need k >= 1".into()));
            }
            if slot.len() < k {
                slot.resize(k, 0.0);
            }
            slot[k - 1] = v;
        }
        let k = alphas.len().max(betas.len());
        alphas.resize(k, 0.0);
        betas.resize(k, 0.0);
        Self::new(
            alpha0,
            alphas,
            betas,
            basis.unwrap_or(CoeffBasis::Classical),
        )
    }
}

/// `⟨h, c_n⟩`, `⟨h, s_n⟩`, `n ≤ K`, and `α_0 = ∫h` by midpoint quadrature.
pub fn classical_coeffs<F>(h: F, k: usize, q: QuadratureSpec) -> Result<CoeffVector>
where
    F: Fn(f64) -> f64 + Sync,
{
    let nodes = q.nodes(Interval::unit());
    let values: Vec<f64> = nodes.par_iter().map(|&x| h(x)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            x: nodes[i],
            value: values[i],
        });
    }
    let project = |idx: BasisIndex| {
        let basis: Vec<f64> = nodes.iter().map(|&x| eval_classical(idx, x)).collect();
        discrete_inner(&values, &basis)
    };
    let alpha0 = pairwise_sum(&values) / values.len() as f64;
    let alphas = (1..=k as u32)
        .into_par_iter()
        .map(|n| project(BasisIndex::cos(n)))
        .collect();
    let betas = (1..=k as u32)
        .into_par_iter()
        .map(|n| project(BasisIndex::sin(n)))
        .collect();
    CoeffVector::new(alpha0, alphas, betas, CoeffBasis::Classical)
}

/// Smallest `m` with `|a|^m ≤ 1e−12`.
pub fn default_tail_terms(wp: WfParams) -> usize {
    let r = wp.a.abs();
    let mut m = 0;
    let mut p = 1.0;
    while p > TAIL_THRESHOLD {
        p *= r;
        m += 1;
    }
    m
}

/// Tilde coefficients of a function band-limited to the vector's `K`.
pub fn transform_coeffs(
    cv: &CoeffVector,
    wp: WfParams,
    tail_terms: Option<usize>,
) -> Result<CoeffVector> {
    transform_coeffs_with(cv, wp, tail_terms, |_| None)
}

/// Tilde coefficients, asking `extra` for classical coefficients past `K`
/// (treated as zero when it returns `None`).
///
/// ```text
/// α̃_n = √(1−a²) Σ_{m=0}^{M} a^m α_{n2^m}                 n odd
/// α̃_n = −a α_{n/2} + (1−a²) Σ_{m=0}^{M} a^m α_{n2^m}     n even
/// ```
pub fn transform_coeffs_with<F>(
    cv: &CoeffVector,
    wp: WfParams,
    tail_terms: Option<usize>,
    extra: F,
) -> Result<CoeffVector>
where
    F: Fn(BasisIndex) -> Option<f64>,
{
    if cv.basis != CoeffBasis::Classical {
        return Err(Error::InvalidParameter(
            "transform_coeffs expects classical coefficients".into(),
        ));
    }
    let a = wp.a;
    let tail = tail_terms.unwrap_or_else(|| default_tail_terms(wp));
    let coeff = |idx: BasisIndex| -> f64 {
        if (idx.k as usize) <= cv.k() {
            cv.get(idx)
        } else {
            extra(idx).unwrap_or(0.0)
        }
    };
    let transform = |kind: BasisKind, n: u32| -> f64 {
        let mut s = 0.0;
        let mut w = 1.0;
        for m in 0..=tail {
            let Some(j) = 1u64
                .checked_shl(m as u32)
                .and_then(|p| p.checked_mul(n as u64))
                .filter(|&j| j <= u32::MAX as u64)
            else {
                break;
            };
            s += w * coeff(BasisIndex { kind, k: j as u32 });
            w *= a;
        }
        if n % 2 == 1 {
            wp.norm_factor() * s
        } else {
            -a * coeff(BasisIndex { kind, k: n / 2 }) + (1.0 - a * a) * s
        }
    };
    let k = cv.k() as u32;
    let alphas = (1..=k).map(|n| transform(BasisKind::Cos, n)).collect();
    let betas = (1..=k).map(|n| transform(BasisKind::Sin, n)).collect();
    CoeffVector::new(cv.alpha0, alphas, betas, CoeffBasis::Tilde)
}

/// Partial sum `α_0 + Σ_{n≤K} α_n u_n(x) + β_n v_n(x)` in the vector's basis.
pub fn synthesize(cv: &CoeffVector, wp: WfParams, x: f64, tol: f64) -> Result<f64> {
    Ok(Synthesizer::new(cv, wp, tol)?.eval(x))
}

/// [`synthesize`] with the basis evaluator built once.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    cv: CoeffVector,
    ev: BasisEvaluator,
}

impl Synthesizer {
    pub fn new(cv: &CoeffVector, wp: WfParams, tol: f64) -> Result<Self> {
        Ok(Self {
            cv: cv.clone(),
            ev: BasisEvaluator::new(wp, tol)?,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let basis = match self.cv.basis {
            CoeffBasis::Classical => Basis::Classical,
            CoeffBasis::Tilde => Basis::Tilde,
        };
        let mut s = self.cv.alpha0;
        for (i, (&al, &be)) in self.cv.alphas.iter().zip(&self.cv.betas).enumerate() {
            let k = (i + 1) as u32;
            if al != 0.0 {
                s += al * self.ev.eval(basis, BasisIndex::cos(k), x);
            }
            if be != 0.0 {
                s += be * self.ev.eval(basis, BasisIndex::sin(k), x);
            }
        }
        s
    }
}

/// `x_i = (i + 1/2)/512`, `i = 0..511`.
pub fn error_points() -> Vec<f64> {
    (0..ERROR_POINTS)
        .map(|i| (i as f64 + 0.5) / ERROR_POINTS as f64)
        .collect()
}

/// Root mean square of `h − approx` over [`error_points`].
pub fn l2_error_512<F, G>(h: F, approx: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let sq: Vec<f64> = error_points()
        .into_iter()
        .map(|x| (h(x) - approx(x)).powi(2))
        .collect();
    (pairwise_sum(&sq) / ERROR_POINTS as f64).sqrt()
}
