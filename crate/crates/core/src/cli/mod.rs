//! The `roughfn` command line.

pub mod gspec;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dimension::{estimate_dim, theoretical_dim, GraphSample, ScaleLadder};
use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::interp::{
    continuity_condition, fif_solution, ifs_from_g, render_attractor, InterpolationProblem,
};
use crate::numerics::{Interval, QuadratureSpec, DEFAULT_RESOLUTION};
use crate::operator::{solve, solve_b_zero, EquationParams, Exponent};
use crate::wfourier::{
    classical_coeffs, error_points, eval_classical, gram_det, gram_matrix_analytic,
    gram_matrix_quadrature, l2_error_512, transform_coeffs_with, Basis, BasisEvaluator, BasisIndex,
    BasisKind, GramMatrix, Synthesizer, WfParams,
};
use output::{fmt_f64, write_csv, write_summary, write_svg, Series};

#[derive(Debug, Parser)]
#[command(
    name = "roughfn",
    version,
    about = "Series solutions of f(x) - a f(bx) = g(x), fractal interpolation and Weierstrass Fourier bases",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Scale factor a.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Dilation factor b.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Lebesgue exponent p in [1, inf].
    #[arg(long, global = true, default_value = "inf")]
    pub p: String,
    /// Series tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Number of sample points (command specific default).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve f(x) - a f(bx) = g(x) and sample f at midpoints of [0, 1].
    Solve {
        /// Right-hand side g.
        #[arg(long)]
        g: String,
        /// Value g(0) for the b = 0 branch.
        #[arg(long, allow_negative_numbers = true)]
        g0: Option<f64>,
        /// Bound on sup |g|; estimated when absent.
        #[arg(long)]
        sup_norm: Option<f64>,
    },
    /// Fractal interpolation of uniform data read from an x,y CSV.
    Interp {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = InterpMode::Step)]
        mode: InterpMode,
        /// Chaos-game points written alongside the series samples.
        #[arg(long, default_value_t = 20_000)]
        attractor_points: usize,
    },
    /// Sample classical, hat and tilde basis functions.
    Basis {
        #[arg(long, value_enum, default_value_t = KindArg::Cos)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Gram matrix of the hat basis.
    Gram {
        #[arg(long, default_value_t = 8)]
        size: u32,
        #[arg(long, value_enum, default_value_t = GramMethod::Analytic)]
        method: GramMethod,
        #[arg(long, value_enum, default_value_t = KindArg::Cos)]
        family: KindArg,
        /// Quadrature resolution (power of two).
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
    },
    /// Classical and Weierstrass Fourier partial sums of a target function.
    Approx {
        #[arg(long, default_value = "xm05")]
        target: String,
        #[arg(long)]
        terms: usize,
    },
    /// Box-counting dimension of the solution graph.
    Dim {
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 4)]
        jmin: u32,
        #[arg(long, default_value_t = 12)]
        jmax: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterpMode {
    /// Piecewise-constant g; reproduces discontinuous interpolants.
    Step,
    /// g built from the polyline through the data; always continuous.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Const,
    Cos,
    Sin,
}

impl From<KindArg> for BasisKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Const => BasisKind::Const,
            KindArg::Cos => BasisKind::Cos,
            KindArg::Sin => BasisKind::Sin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GramMethod {
    Analytic,
    Quadrature,
    Both,
}

impl Common {
    fn a(&self) -> Result<f64> {
        self.a
            .ok_or_else(|| Error::Input("missing required flag --a".into()))
    }

    fn b(&self) -> Result<f64> {
        self.b
            .ok_or_else(|| Error::Input("missing required flag --b".into()))
    }

    fn p(&self) -> Result<Exponent> {
        self.p.parse()
    }

    fn tol(&self) -> Result<f64> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(self.tol)
    }

    fn samples(&self, default: usize) -> Result<usize> {
        let s = self.samples.unwrap_or(default);
        if s < 2 {
            return Err(Error::InvalidParameter(format!(
                "--samples must be at least 2, got {s}"
            )));
        }
        Ok(s)
    }

    fn out_file(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        Ok(self.out.join(name))
    }
}

/// Midpoints `(i + 1/2)/n` of `[0, 1]`.
fn midpoints(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

pub fn run(cli: &Cli) -> Result<()> {
    let c = &cli.common;
    match &cli.command {
        Command::Solve { g, g0, sup_norm } => cmd_solve(c, g, *g0, *sup_norm),
        Command::Interp {
            data,
            mode,
            attractor_points,
        } => cmd_interp(c, data, *mode, *attractor_points),
        Command::Basis { kind, k } => cmd_basis(c, (*kind).into(), *k),
        Command::Gram {
            size,
            method,
            family,
            resolution,
        } => cmd_gram(c, *size, *method, (*family).into(), *resolution),
        Command::Approx { target, terms } => cmd_approx(c, target, *terms),
        Command::Dim { g, jmin, jmax } => cmd_dim(c, g, *jmin, *jmax),
    }
}

fn xy_rows<'s>(xs: &'s [f64], ys: &'s [f64]) -> impl Iterator<Item = Vec<String>> + 's {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| vec![fmt_f64(x), fmt_f64(y)])
}

pub fn cmd_solve(c: &Common, g_spec: &str, g0: Option<f64>, sup_norm: Option<f64>) -> Result<()> {
    let (a, b) = (c.a()?, c.b()?);
    let g = gspec::parse(g_spec)?;
    let tol = c.tol()?;
    let xs = midpoints(c.samples(256)?);
    let (ys, note) = if b == 0.0 && g0.is_some() {
        let f = solve_b_zero(a, &g, g0.unwrap_or_default())?;
        (f.sample(&xs), "b = 0 branch".to_string())
    } else {
        let params = EquationParams::new(a, b, c.p()?)?;
        let sol = solve(&params, &g, sup_norm, tol)?;
        let note = format!(
            "regime {:?}, {} terms, tail bound {:e}",
            params.regime(),
            sol.truncation(),
            sol.tail_bound()
        );
        (sol.sample(&xs), note)
    };
    let path = c.out_file("solve.csv")?;
    write_csv(&path, &["x", "f"], xy_rows(&xs, &ys))?;
    write_svg(
        &c.out_file("solve.svg")?,
        &format!("f(x) - {a} f({b} x) = {g_spec}"),
        &[Series::line(
            "f",
            "black",
            xs.iter().copied().zip(ys.iter().copied()).collect(),
        )],
    )?;
    println!("solve: {note}; wrote {}", path.display());
    Ok(())
}

pub fn cmd_interp(
    c: &Common,
    data: &Path,
    mode: InterpMode,
    attractor_points: usize,
) -> Result<()> {
    let a = c.a()?;
    let tol = c.tol()?;
    let problem = InterpolationProblem::from_csv(data, a)?;
    let pw = match mode {
        InterpMode::Step => problem.step_pieces(),
        InterpMode::Linear => problem.linear_pieces()?,
    };
    let sol = fif_solution(&pw, a, tol)?;
    let continuous = continuity_condition(&pw, a);
    let verdict = if continuous {
        "continuous"
    } else {
        "discontinuous"
    };

    let xs = midpoints(c.samples(512)?);
    let ys = sol.sample(&xs);
    write_csv(
        &c.out_file("interp_fif.csv")?,
        &["x", "f"],
        xy_rows(&xs, &ys),
    )?;

    let nodes = problem.nodes();
    write_csv(
        &c.out_file("interp_nodes.csv")?,
        &["n", "x", "y", "f"],
        nodes
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| vec![i.to_string(), fmt_f64(x), fmt_f64(y), fmt_f64(sol.eval(x))]),
    )?;

    let ifs = ifs_from_g(&pw, a)?;
    let nf = ifs.n() as f64;
    write_csv(
        &c.out_file("interp_ifs.csv")?,
        &["n", "x_scale", "x_shift", "a", "g_at_0", "g_at_1"],
        ifs.maps().iter().map(|m| {
            vec![
                m.index().to_string(),
                fmt_f64(1.0 / nf),
                fmt_f64((m.index() - 1) as f64 / nf),
                fmt_f64(a),
                fmt_f64(m.g_at_zero()),
                fmt_f64(m.g_at_one()),
            ]
        }),
    )?;

    let cloud = if attractor_points > 0 {
        let cloud = render_attractor(&ifs, attractor_points + 100, (1.0 / 3.0, 0.0), 100, c.seed)?;
        write_csv(
            &c.out_file("interp_attractor.csv")?,
            &["x", "y"],
            cloud
                .points()
                .iter()
                .map(|&(x, y)| vec![fmt_f64(x), fmt_f64(y)]),
        )?;
        cloud.points().to_vec()
    } else {
        Vec::new()
    };

    write_summary(
        &c.out_file("interp_summary.csv")?,
        &[
            ("N", problem.n().to_string()),
            ("a", fmt_f64(a)),
            ("mode", format!("{mode:?}").to_lowercase()),
            ("continuity", verdict.to_string()),
            ("approximate_limits", ifs.approximate().to_string()),
            ("terms", sol.truncation().to_string()),
            ("tail_bound", fmt_f64(sol.tail_bound())),
        ],
    )?;
    write_svg(
        &c.out_file("interp.svg")?,
        &format!("fractal interpolation, a = {a}"),
        &[
            Series::dots("attractor", "gray", cloud),
            Series::line(
                "f",
                "black",
                xs.iter().copied().zip(ys.iter().copied()).collect(),
            ),
            Series::dots("data", "red", nodes),
        ],
    )?;
    println!("interp: N = {}, a = {a}, verdict {verdict}", problem.n());
    Ok(())
}

pub fn cmd_basis(c: &Common, kind: BasisKind, k: u32) -> Result<()> {
    let wp = WfParams::new(c.a()?)?;
    let idx = BasisIndex::new(kind, k)?;
    let ev = BasisEvaluator::new(wp, c.tol()?)?;
    let xs = midpoints(c.samples(1024)?);
    let cols: Vec<[f64; 3]> = xs
        .iter()
        .map(|&x| [eval_classical(idx, x), ev.hat(idx, x), ev.tilde(idx, x)])
        .collect();
    let path = c.out_file("basis.csv")?;
    write_csv(
        &path,
        &["x", "classical", "hat", "tilde"],
        xs.iter()
            .zip(&cols)
            .map(|(&x, v)| vec![fmt_f64(x), fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2])]),
    )?;
    let curve = |j: usize| xs.iter().zip(&cols).map(|(&x, v)| (x, v[j])).collect();
    write_svg(
        &c.out_file("basis.svg")?,
        &format!("{idx}, a = {}", wp.a()),
        &[
            Series::line("classical", "red", curve(0)),
            Series::line("hat", "blue", curve(1)),
            Series::line("tilde", "black", curve(2)),
        ],
    )?;
    println!(
        "basis: {idx} with {} series terms; wrote {}",
        ev.terms(),
        path.display()
    );
    Ok(())
}

fn write_gram(path: &Path, g: &GramMatrix) -> Result<()> {
    let mut header = vec!["index".to_string()];
    header.extend(g.labels().iter().map(|l| l.to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(
        path,
        &header,
        (0..g.size()).map(|r| {
            let mut row = vec![g.labels()[r].to_string()];
            row.extend((0..g.size()).map(|col| fmt_f64(g.get(r, col))));
            row
        }),
    )
}

pub fn cmd_gram(
    c: &Common,
    size: u32,
    method: GramMethod,
    family: BasisKind,
    resolution: usize,
) -> Result<()> {
    let wp = WfParams::new(c.a()?)?;
    if size == 0 {
        return Err(Error::InvalidParameter("--size must be at least 1".into()));
    }
    let labels: Vec<BasisIndex> = match family {
        BasisKind::Const => BasisIndex::family(size),
        kind => (1..=size)
            .map(|k| BasisIndex::new(kind, k))
            .collect::<Result<_>>()?,
    };
    let mut summary = vec![("a", fmt_f64(wp.a())), ("size", labels.len().to_string())];
    let analytic = gram_matrix_analytic(&labels, wp);
    if method != GramMethod::Quadrature {
        write_gram(&c.out_file("gram_analytic.csv")?, &analytic)?;
        summary.push(("det_analytic", fmt_f64(analytic.determinant())));
    }
    if method != GramMethod::Analytic {
        let q = QuadratureSpec::new(resolution)?;
        let quad = gram_matrix_quadrature(Basis::Hat, &labels, wp, q, c.tol()?)?;
        write_gram(&c.out_file("gram_quadrature.csv")?, &quad)?;
        summary.push(("resolution", resolution.to_string()));
        if method == GramMethod::Both {
            let diff = analytic.max_abs_diff(&quad)?;
            summary.push(("max_abs_diff", fmt_f64(diff)));
            println!("gram: max |analytic - quadrature| = {diff:e}");
        }
    }
    if family == BasisKind::Cos && size.is_power_of_two() && size <= 64 {
        let r = gram_det(size.trailing_zeros(), wp)?;
        summary.push(("det_conjectured", fmt_f64(r.conjectured)));
        summary.push(("det_paired_cos_sin", fmt_f64(r.paired_block)));
    }
    write_summary(&c.out_file("gram_summary.csv")?, &summary)?;
    println!(
        "gram: {} x {} block written to {}",
        labels.len(),
        labels.len(),
        c.out.display()
    );
    Ok(())
}

/// Classical and tilde partial sums with their 512-point errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub xs: Vec<f64>,
    pub h: Vec<f64>,
    pub classical: Vec<f64>,
    pub tilde: Vec<f64>,
    pub error_classical: f64,
    pub error_tilde: f64,
}

/// Resolution of the coefficient quadrature in `approx`.
pub const APPROX_RESOLUTION: usize = DEFAULT_RESOLUTION;

pub fn approximate(h: &RealFunction, wp: WfParams, terms: usize, tol: f64) -> Result<ApproxResult> {
    let q = QuadratureSpec::new(APPROX_RESOLUTION)?;
    let classical = classical_coeffs(|x| h.eval(x), terms, q)?;
    let nodes = q.nodes(Interval::unit());
    let hv: Vec<f64> = nodes.iter().map(|&x| h.eval(x)).collect();
    // coefficients past K on demand, zero above the Nyquist index
    let nyquist = (APPROX_RESOLUTION / 2) as u32;
    let extra = |idx: BasisIndex| -> Option<f64> {
        (idx.k() < nyquist).then(|| {
            let prod: Vec<f64> = nodes
                .iter()
                .zip(&hv)
                .map(|(&x, &v)| v * eval_classical(idx, x))
                .collect();
            crate::numerics::pairwise_sum(&prod) / prod.len() as f64
        })
    };
    let tilde = transform_coeffs_with(&classical, wp, None, extra)?;
    let sc = Synthesizer::new(&classical, wp, tol)?;
    let st = Synthesizer::new(&tilde, wp, tol)?;
    let xs = error_points();
    Ok(ApproxResult {
        h: h.sample(&xs),
        classical: xs.iter().map(|&x| sc.eval(x)).collect(),
        tilde: xs.iter().map(|&x| st.eval(x)).collect(),
        error_classical: l2_error_512(|x| h.eval(x), |x| sc.eval(x)),
        error_tilde: l2_error_512(|x| h.eval(x), |x| st.eval(x)),
        xs,
    })
}

pub fn cmd_approx(c: &Common, target: &str, terms: usize) -> Result<()> {
    let wp = WfParams::new(c.a()?)?;
    let h = gspec::parse(target)?;
    let r = approximate(&h, wp, terms, c.tol()?)?;
    let ck = format!("classical_{terms}");
    let tk = format!("tilde_{terms}");
    write_csv(
        &c.out_file("approx.csv")?,
        &["x", "h", &ck, &tk],
        (0..r.xs.len()).map(|i| {
            vec![
                fmt_f64(r.xs[i]),
                fmt_f64(r.h[i]),
                fmt_f64(r.classical[i]),
                fmt_f64(r.tilde[i]),
            ]
        }),
    )?;
    write_summary(
        &c.out_file("approx_summary.csv")?,
        &[
            ("target", target.to_string()),
            ("a", fmt_f64(wp.a())),
            ("terms", terms.to_string()),
            ("l2_error_classical", fmt_f64(r.error_classical)),
            ("l2_error_tilde", fmt_f64(r.error_tilde)),
        ],
    )?;
    let curve = |ys: &[f64]| r.xs.iter().copied().zip(ys.iter().copied()).collect();
    write_svg(
        &c.out_file("approx.svg")?,
        &format!("{target}: K = {terms}, a = {}", wp.a()),
        &[
            Series::line("h", "gray", curve(&r.h)),
            Series::line(&ck, "red", curve(&r.classical)),
            Series::line(&tk, "black", curve(&r.tilde)),
        ],
    )?;
    println!(
        "approx: K = {terms}, l2 error classical {:.6e}, tilde {:.6e}",
        r.error_classical, r.error_tilde
    );
    Ok(())
}

pub fn cmd_dim(c: &Common, g_spec: &str, jmin: u32, jmax: u32) -> Result<()> {
    let (a, b) = (c.a()?, c.b()?);
    let g = gspec::parse(g_spec)?;
    let params = EquationParams::new(a, b, c.p()?)?;
    let sol = solve(&params, &g, None, c.tol()?)?;
    let s = c.samples(1 << 16)?;
    let gs = GraphSample::from_fn(|x| sol.eval(x), s)?;
    let est = estimate_dim(&gs, ScaleLadder::new(jmin, jmax, s)?)?;
    write_csv(
        &c.out_file("dim.csv")?,
        &["j", "eps", "count_anchored", "count_shifted", "count_mean"],
        est.scales.iter().map(|sc| {
            vec![
                sc.j.to_string(),
                fmt_f64(sc.eps),
                sc.anchored.to_string(),
                sc.shifted.to_string(),
                fmt_f64(sc.mean()),
            ]
        }),
    )?;
    let theory = theoretical_dim(a, b).ok();
    let mut summary = vec![
        ("a", fmt_f64(a)),
        ("b", fmt_f64(b)),
        ("samples", s.to_string()),
        ("estimate", fmt_f64(est.dimension)),
        ("slope", fmt_f64(est.slope)),
    ];
    if let Some(t) = theory {
        summary.push(("theoretical", fmt_f64(t)));
    }
    write_summary(&c.out_file("dim_summary.csv")?, &summary)?;
    match theory {
        Some(t) => println!("dim: estimate {:.5}, formula {t:.5}", est.dimension),
        None => println!(
            "dim: estimate {:.5} (formula not applicable)",
            est.dimension
        ),
    }
    Ok(())
}
