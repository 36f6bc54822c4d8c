//! The `wcs` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 solver failure,
//! 3 verification failure. Settings come from flags, then `--config`, then
//! `WCS_DEFAULT_GRID` (grid size only), then built-in defaults.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{resolve_model, RunConfig};
use crate::error::{Error, Result};
use crate::geometry::{verify_geometry, DEFAULT_STEP};
use crate::model::{builtin_model, BUILTIN_MODELS, DEFAULT_MODEL_TOL, DEFAULT_VALIDATION_GRID};
use crate::report::{csv_line, fmt_sig, rounded_json};
use crate::stability::{
    paper_bound, paper_bound_sign, paper_integral_limits, paper_integrals, sweep, verdict,
    Lambda1Mode, SweepConfig, VerdictOptions,
};
use crate::sturm_liouville::{
    solve_fd, solve_shooting, variational_check, SturmLiouvilleProblem, DEFAULT_GRID,
    DEFAULT_SHOOTING_TOL,
};
use crate::surfaces::{l1_spectrum, parse_surface, simons_lambda1_bound, SURFACE_FAMILIES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const GRID_ENV: &str = "WCS_DEFAULT_GRID";
const DEFAULT_TAU: f64 = 1.0;
const DEFAULT_RQ_TOL: f64 = 1e-8;
const LIMIT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "wcs",
    version,
    about = "Stability of minimal cones in warped products"
)]
struct Cli {
    /// TOML file with run settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format [default: plain; json for verify-geometry].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the main output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

impl Format {
    fn parse(s: &str) -> Result<Self> {
        <Format as ValueEnum>::from_str(s, true)
            .map_err(|_| Error::Config(format!("unknown format `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Fd,
    Shooting,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the builtin warped models (or describe a model file).
    Models(ModelsArgs),
    /// Catalog of minimal hypersurfaces.
    Surfaces {
        #[command(subcommand)]
        command: SurfacesCommand,
    },
    /// Axial eigenvalues δ₁ ≤ δ₂ ≤ … on [−ε, 0].
    Delta1(Delta1Args),
    /// Eigenvalues of −Δ − ‖A‖² on a catalog surface.
    Lambda1(Lambda1Args),
    /// λ₁ + δ₁ instability verdict for one cone.
    Verdict(VerdictArgs),
    /// Verdicts over a grid of dimensions and depths.
    Sweep(SweepArgs),
    /// Finite-difference checks of the cone geometry in the round sphere.
    VerifyGeometry(GeometryArgs),
    /// Test-function integrals at ε = π/2 and the closed-form bound.
    VerifyLimits(LimitsArgs),
}

#[derive(Debug, Subcommand)]
enum SurfacesCommand {
    /// List the surface families.
    List,
    /// Spectrum of −Δ − ‖A‖².
    Spectrum(Lambda1Args),
}

#[derive(Debug, Args)]
struct ModelsArgs {
    /// Builtin name or model file; all builtin models when omitted.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Run the curvature-compatibility validation.
    #[arg(long)]
    validate: bool,
    /// Points of the validation grid.
    #[arg(long, default_value_t = DEFAULT_VALIDATION_GRID)]
    validation_grid: usize,
    #[arg(long, default_value_t = DEFAULT_MODEL_TOL)]
    model_tol: f64,
}

#[derive(Debug, Args)]
struct Delta1Args {
    /// Builtin model name or path to a model TOML file.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Interior grid points [default: $WCS_DEFAULT_GRID or 1024].
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    num_eigen: Option<usize>,
    /// Shooting bisection tolerance [default: 1e-10].
    #[arg(long)]
    tol: Option<f64>,
    /// Also write sampled eigenfunctions as CSV.
    #[arg(long)]
    eigenfunctions: Option<PathBuf>,
    /// Number of random Rayleigh-quotient checks against δ₁.
    #[arg(long)]
    rq_samples: Option<usize>,
    /// Seed for the random test functions [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct Lambda1Args {
    /// e.g. clifford:1,1, equator:5, flat_subtorus:3
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    count: Option<usize>,
    /// Report the upper estimate from (‖A‖²+τ)^{1/2} instead.
    #[arg(long)]
    bound: bool,
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Debug, Args)]
struct VerdictArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Use the upper estimate for λ₁.
    #[arg(long)]
    bound: bool,
    #[arg(long)]
    tau: Option<f64>,
    /// Skip the shooting cross-check.
    #[arg(long)]
    no_cross_check: bool,
    /// Also evaluate −n + RQ of the explicit spherical test function.
    #[arg(long)]
    test_function_bound: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    model: Option<String>,
    /// Family (clifford, equator, flat_subtorus) or a fixed surface.
    #[arg(long)]
    surface: Option<String>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Comma-separated depths.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Worker threads [default: available parallelism].
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    bound: bool,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    no_cross_check: bool,
    /// Write `n,eps,lambda1,delta1,sum,verdict` rows to this file.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    #[arg(long)]
    surface: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Chart point, comma-separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    u: Vec<f64>,
}

#[derive(Debug, Args)]
struct LimitsArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Evaluate at this depth instead of π/2 (no limit comparison).
    #[arg(long)]
    eps: Option<f64>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_solver_failure() {
                EXIT_SOLVER
            } else {
                EXIT_USAGE
            },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

struct Context<'a> {
    config: RunConfig,
    format: Option<Format>,
    output: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Context<'_> {
    fn format(&self, default: Format) -> std::result::Result<Format, Failure> {
        match (self.format, &self.config.format) {
            (Some(f), _) => Ok(f),
            (None, Some(s)) => Ok(Format::parse(s)?),
            (None, None) => Ok(default),
        }
    }

    fn output(&self) -> Option<&Path> {
        self.output.as_deref().or(self.config.output.as_deref())
    }

    /// Writes the main result to `--output` or standard output.
    fn emit(&mut self, text: &str) -> std::result::Result<(), Failure> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match self.output().map(Path::to_path_buf) {
            Some(path) => {
                std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
            }
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|e| usage(e.to_string())),
        }
    }

    fn say(&mut self, line: &str) -> std::result::Result<(), Failure> {
        writeln!(self.stdout, "{line}").map_err(|e| usage(e.to_string()))
    }

    fn grid(&self, flag: Option<usize>) -> std::result::Result<usize, Failure> {
        if let Some(g) = flag.or(self.config.grid) {
            return Ok(g);
        }
        match std::env::var(GRID_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&g| g > 0)
                .ok_or_else(|| usage(format!("{GRID_ENV}=`{v}` is not a positive integer"))),
            Err(_) => Ok(DEFAULT_GRID),
        }
    }

    fn tau(&self, flag: Option<f64>) -> f64 {
        flag.or(self.config.tau).unwrap_or(DEFAULT_TAU)
    }
}

fn required<T>(value: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    value.ok_or_else(|| usage(format!("missing required --{flag}")))
}

fn positive(value: f64, flag: &str) -> std::result::Result<f64, Failure> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(usage(format!("--{flag} must be positive, got {value}")))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let config = match cli.config.as_deref().map(RunConfig::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Context {
        config,
        format: cli.format,
        output: cli.output,
        stdout,
    };
    let result = match cli.command {
        Command::Models(a) => cmd_models(&mut ctx, a),
        Command::Surfaces {
            command: SurfacesCommand::List,
        } => cmd_surfaces_list(&mut ctx),
        Command::Surfaces {
            command: SurfacesCommand::Spectrum(a),
        } => cmd_lambda1(&mut ctx, a),
        Command::Delta1(a) => cmd_delta1(&mut ctx, a),
        Command::Lambda1(a) => cmd_lambda1(&mut ctx, a),
        Command::Verdict(a) => cmd_verdict(&mut ctx, a),
        Command::Sweep(a) => cmd_sweep(&mut ctx, a, stderr),
        Command::VerifyGeometry(a) => cmd_verify_geometry(&mut ctx, a),
        Command::VerifyLimits(a) => cmd_verify_limits(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_models(ctx: &mut Context<'_>, a: ModelsArgs) -> CmdResult {
    let n = a.n.or(ctx.config.n);
    let models = match a.model.or(ctx.config.model.clone()) {
        Some(spec) => vec![resolve_model(&spec, n)?],
        None => BUILTIN_MODELS
            .iter()
            .map(|name| builtin_model(name, n.unwrap_or(2)))
            .collect::<Result<Vec<_>>>()?,
    };
    let mut reports = Vec::new();
    for m in &models {
        reports.push(if a.validate {
            Some(m.validate(a.validation_grid, a.model_tol)?)
        } else {
            None
        });
    }
    let all_passed = reports.iter().flatten().all(|r| r.passed);
    let text = match ctx.format(Format::Plain)? {
        Format::Plain => {
            let mut lines = Vec::new();
            for (m, r) in models.iter().zip(&reports) {
                let i = m.interval();
                let mut line = format!(
                    "{}: f = {}, c = {}, k = {}, interval = ({}, {}), eps_max = {}",
                    m.name(),
                    m.warping().describe(),
                    fmt_sig(m.c()),
                    fmt_sig(m.k()),
                    fmt_sig(i.lower),
                    fmt_sig(i.upper),
                    fmt_sig(m.eps_max())
                );
                if let Some(r) = r {
                    line.push_str(&format!(
                        "; validation {} (residuals {}, {})",
                        if r.passed { "PASS" } else { "FAIL" },
                        fmt_sig(r.max_second_derivative_residual),
                        fmt_sig(r.max_first_derivative_residual)
                    ));
                }
                lines.push(line);
            }
            lines.join("\n")
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = models
                .iter()
                .zip(&reports)
                .map(|(m, r)| {
                    let i = m.interval();
                    let mut v = serde_json::json!({
                        "name": m.name(),
                        "n": m.n(),
                        "f": m.warping().describe(),
                        "c": m.c(),
                        "k": m.k(),
                        "interval": [finite_or_string(i.lower), finite_or_string(i.upper)],
                        "eps_max": finite_or_string(m.eps_max()),
                    });
                    if let Some(r) = r {
                        v["validation"] = serde_json::to_value(r).expect("report serializes");
                    }
                    rounded_json(v)
                })
                .collect();
            serde_json::to_string_pretty(&items).expect("json")
        }
        Format::Csv => {
            let mut out = vec![csv_line(&[
                "name",
                "f",
                "c",
                "k",
                "lower",
                "upper",
                "eps_max",
                "validation",
            ])];
            for (m, r) in models.iter().zip(&reports) {
                let i = m.interval();
                out.push(csv_line(&[
                    m.name().to_string(),
                    m.warping().describe(),
                    fmt_sig(m.c()),
                    fmt_sig(m.k()),
                    fmt_sig(i.lower),
                    fmt_sig(i.upper),
                    fmt_sig(m.eps_max()),
                    r.as_ref()
                        .map(|r| if r.passed { "pass" } else { "fail" })
                        .unwrap_or("")
                        .to_string(),
                ]));
            }
            out.join("\n")
        }
    };
    ctx.emit(&text)?;
    Ok(if all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!(fmt_sig(x))
    }
}

fn cmd_surfaces_list(ctx: &mut Context<'_>) -> CmdResult {
    let rows = [
        (
            "equator",
            "equator:<n>",
            "totally geodesic S^n in S^{n+1}",
            "0",
            "1",
        ),
        (
            "clifford",
            "clifford:<p>,<q>",
            "S^p(sqrt(p/n)) x S^q(sqrt(q/n)) in S^{n+1}, n = p+q",
            "n",
            "1",
        ),
        (
            "flat_subtorus",
            "flat_subtorus:<n>",
            "totally geodesic T^n in T^{n+1}",
            "0",
            "0",
        ),
    ];
    debug_assert_eq!(rows.len(), SURFACE_FAMILIES.len());
    let text = match ctx.format(Format::Plain)? {
        Format::Plain => rows
            .iter()
            .map(|(_, usage, what, a2, k)| format!("{usage}: {what}; |A|^2 = {a2}; fiber k = {k}"))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => serde_json::to_string_pretty(
            &rows
                .iter()
                .map(|(name, usage, what, a2, k)| {
                    serde_json::json!({"family": name, "usage": usage, "description": what, "norm_a2": a2, "fiber_k": k})
                })
                .collect::<Vec<_>>(),
        )
        .expect("json"),
        Format::Csv => {
            let mut out = vec![csv_line(&["family", "usage", "description", "norm_a2", "fiber_k"])];
            out.extend(rows.iter().map(|(n, u, w, a, k)| csv_line(&[n, u, w, a, k])));
            out.join("\n")
        }
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn cmd_delta1(ctx: &mut Context<'_>, a: Delta1Args) -> CmdResult {
    let spec = required(a.model.or(ctx.config.model.clone()), "model")?;
    let n = a.n.or(ctx.config.n);
    let model = resolve_model(&spec, n)?;
    let eps = positive(required(a.eps.or(ctx.config.eps), "eps")?, "eps")?;
    let grid = ctx.grid(a.grid)?;
    let tol = positive(
        a.tol.or(ctx.config.tol).unwrap_or(DEFAULT_SHOOTING_TOL),
        "tol",
    )?;
    let num_eigen = a.num_eigen.or(ctx.config.num_eigen).unwrap_or(1);
    let method = match (a.method, &ctx.config.method) {
        (Some(m), _) => m,
        (None, Some(s)) => <MethodArg as ValueEnum>::from_str(s, true)
            .map_err(|_| usage(format!("unknown method `{s}`")))?,
        (None, None) => MethodArg::Fd,
    };
    let problem = SturmLiouvilleProblem::new(&model, eps, num_eigen)?;
    let fd = matches!(method, MethodArg::Fd | MethodArg::Both)
        .then(|| solve_fd(&problem, grid))
        .transpose()?;
    let shot = matches!(method, MethodArg::Shooting | MethodArg::Both)
        .then(|| solve_shooting(&problem, tol))
        .transpose()?;
    if let (Some(f), Some(s)) = (&fd, &shot) {
        for (j, (x, y)) in f.eigenvalues.iter().zip(&s.eigenvalues).enumerate() {
            if (x - y).abs() > crate::stability::agreement_tolerance(*y) {
                return Err(Error::SolverDisagreement {
                    index: j + 1,
                    fd: *x,
                    shooting: *y,
                }
                .into());
            }
        }
    }
    let primary = fd
        .as_ref()
        .or(shot.as_ref())
        .expect("at least one method ran");

    let samples = a.rq_samples.or(ctx.config.rq_samples).unwrap_or(0);
    let seed = a.seed.or(ctx.config.seed).unwrap_or(0);
    let check = if samples > 0 {
        Some(variational_check(
            &problem,
            primary.first(),
            samples,
            seed,
            DEFAULT_RQ_TOL,
        )?)
    } else {
        None
    };

    if let Some(path) = &a.eigenfunctions {
        std::fs::write(path, primary.eigenfunctions_csv())
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let text = match ctx.format(Format::Plain)? {
        Format::Plain => {
            let mut lines: Vec<String> = primary.eigenvalues.iter().map(|&d| fmt_sig(d)).collect();
            if let (Some(_), Some(s)) = (&fd, &shot) {
                lines.push(format!(
                    "shooting: {}",
                    s.eigenvalues
                        .iter()
                        .map(|&d| fmt_sig(d))
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
            if let Some(c) = &check {
                lines.push(format!(
                    "rayleigh check ({} samples, seed {}): min quotient - delta1 = {} {}",
                    c.samples,
                    c.seed,
                    fmt_sig(c.min_gap),
                    if c.passed { "PASS" } else { "FAIL" }
                ));
            }
            lines.join("\n")
        }
        Format::Json => {
            let mut v: serde_json::Value =
                serde_json::from_str(&primary.to_json()).expect("valid json");
            if let (Some(_), Some(s)) = (&fd, &shot) {
                v["shooting"] = serde_json::from_str(&s.to_json()).expect("valid json");
            }
            if let Some(c) = &check {
                v["rayleigh_check"] = rounded_json(serde_json::to_value(c).expect("serializes"));
            }
            serde_json::to_string_pretty(&v).expect("json")
        }
        Format::Csv => primary.eigenfunctions_csv(),
    };
    ctx.emit(&text)?;
    Ok(match check {
        Some(c) if !c.passed => EXIT_VERIFICATION,
        _ => EXIT_OK,
    })
}

fn cmd_lambda1(ctx: &mut Context<'_>, a: Lambda1Args) -> CmdResult {
    let surface = parse_surface(&required(
        a.surface.or(ctx.config.surface.clone()),
        "surface",
    )?)?;
    let count = a.count.or(ctx.config.count).unwrap_or(1);
    if a.bound {
        let tau = positive(ctx.tau(a.tau), "tau")?;
        let b = simons_lambda1_bound(&surface, tau)?;
        let text = match ctx.format(Format::Plain)? {
            Format::Plain => fmt_sig(b),
            Format::Json => serde_json::to_string_pretty(&rounded_json(serde_json::json!({
                "surface": surface.name,
                "n": surface.n,
                "tau": tau,
                "lambda1": {"value": b, "source": "bound"},
            })))
            .expect("json"),
            Format::Csv => format!(
                "surface,n,tau,lambda1_bound\n{}",
                csv_line(&[
                    surface.name.clone(),
                    surface.n.to_string(),
                    fmt_sig(tau),
                    fmt_sig(b)
                ])
            ),
        };
        ctx.emit(&text)?;
        return Ok(EXIT_OK);
    }
    let spectrum = l1_spectrum(&surface, count)?;
    let text = match ctx.format(Format::Plain)? {
        Format::Plain => spectrum
            .eigenvalues
            .iter()
            .map(|&v| fmt_sig(v))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => spectrum.to_json(),
        Format::Csv => {
            let mut out = vec!["index,eigenvalue".to_string()];
            out.extend(
                spectrum
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| format!("{},{}", i + 1, fmt_sig(v))),
            );
            out.join("\n")
        }
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn verdict_options(
    ctx: &Context<'_>,
    grid: Option<usize>,
    tol: Option<f64>,
    bound: bool,
    tau: Option<f64>,
    no_cross_check: bool,
) -> std::result::Result<VerdictOptions, Failure> {
    Ok(VerdictOptions {
        grid_size: ctx.grid(grid)?,
        shooting_tol: positive(
            tol.or(ctx.config.tol).unwrap_or(DEFAULT_SHOOTING_TOL),
            "tol",
        )?,
        cross_check: !no_cross_check,
        lambda1_mode: if bound {
            Lambda1Mode::Bound {
                tau: positive(ctx.tau(tau), "tau")?,
            }
        } else {
            Lambda1Mode::Exact
        },
        test_function_bound: false,
    })
}

fn cmd_verdict(ctx: &mut Context<'_>, a: VerdictArgs) -> CmdResult {
    let surface = parse_surface(&required(
        a.surface.or(ctx.config.surface.clone()),
        "surface",
    )?)?;
    let spec = required(a.model.or(ctx.config.model.clone()), "model")?;
    let model = resolve_model(&spec, Some(surface.n))?;
    let eps = positive(required(a.eps.or(ctx.config.eps), "eps")?, "eps")?;
    let mut options = verdict_options(ctx, a.grid, a.tol, a.bound, a.tau, a.no_cross_check)?;
    options.test_function_bound = a.test_function_bound;
    let report = verdict(&model, &surface, eps, &options)?;
    let text = match ctx.format(Format::Plain)? {
        Format::Plain => {
            let mut lines = vec![
                format!(
                    "model = {}, surface = {}, n = {}, eps = {}",
                    report.model,
                    report.surface,
                    report.n,
                    fmt_sig(eps)
                ),
                format!(
                    "lambda1 = {} ({})",
                    fmt_sig(report.lambda1.value),
                    report.lambda1.source
                ),
                format!(
                    "delta1 = {} ({})",
                    fmt_sig(report.delta1.value),
                    report.delta1.source
                ),
            ];
            if let Some(s) = report.diagnostics.delta1_shooting {
                lines.push(format!("delta1 = {} (shooting)", fmt_sig(s)));
            }
            lines.push(format!("sum = {}", fmt_sig(report.sum)));
            if let Some(b) = report.paper_bound {
                lines.push(format!(
                    "closed-form bound n^2/8 - 2n + 2 = {}",
                    fmt_sig(b.value)
                ));
            }
            if let Some(b) = report.test_function_bound {
                lines.push(format!("test-function bound = {}", fmt_sig(b.value)));
            }
            if report.beyond_theorem {
                lines.push("n beyond paper's theorem".into());
            }
            lines.push(report.verdict.describe().to_string());
            lines.join("\n")
        }
        Format::Json => report.to_json(),
        Format::Csv => format!("{}\n{}", crate::stability::CSV_HEADER, report.csv_row()),
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(ctx: &mut Context<'_>, a: SweepArgs, stderr: &mut dyn Write) -> CmdResult {
    let model = required(a.model.or(ctx.config.model.clone()), "model")?;
    let surface = required(a.surface.or(ctx.config.surface.clone()), "surface")?;
    let n_min = required(a.n_min.or(ctx.config.n_min), "n-min")?;
    let n_max = a.n_max.or(ctx.config.n_max).unwrap_or(n_min);
    if n_max < n_min {
        return Err(usage(format!("--n-max {n_max} is below --n-min {n_min}")));
    }
    let eps_values = if a.eps.is_empty() {
        ctx.config
            .eps_values
            .clone()
            .or(ctx.config.eps.map(|e| vec![e]))
            .ok_or_else(|| usage("missing required --eps"))?
    } else {
        a.eps.clone()
    };
    for &e in &eps_values {
        positive(e, "eps")?;
    }
    let jobs = a.jobs.or(ctx.config.jobs).unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    if jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let options = verdict_options(ctx, a.grid, a.tol, a.bound, a.tau, a.no_cross_check)?;
    let config = SweepConfig {
        model,
        surface_family: surface,
        n_values: (n_min..=n_max).collect(),
        eps_values,
        options,
        jobs,
    };
    let result = sweep(&config)?;
    if let Some(path) = &a.plot_data {
        crate::stability::emit_plot_data(&result, path)?;
    }
    let table = match ctx.format(Format::Csv)? {
        Format::Json => result.to_json(),
        Format::Csv | Format::Plain => result.to_csv(),
    };
    ctx.emit(&table)?;
    let summary = result.summary_line();
    if ctx.output().is_some() {
        ctx.say(&summary)?;
    } else {
        writeln!(stderr, "{summary}").map_err(|e| usage(e.to_string()))?;
    }
    Ok(if result.summary().failures > 0 {
        EXIT_SOLVER
    } else {
        EXIT_OK
    })
}

fn cmd_verify_geometry(ctx: &mut Context<'_>, a: GeometryArgs) -> CmdResult {
    let surface = parse_surface(&required(
        a.surface.or(ctx.config.surface.clone()),
        "surface",
    )?)?;
    let t = a.t.or(ctx.config.t).unwrap_or(0.0);
    let h = positive(a.h.or(ctx.config.h).unwrap_or(DEFAULT_STEP), "h")?;
    let u = (!a.u.is_empty()).then_some(a.u.as_slice());
    let report = verify_geometry(&surface, t, u, h)?;
    let text = match ctx.format(Format::Json)? {
        Format::Json => report.to_json(),
        Format::Plain => {
            let mut lines: Vec<String> = report
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "{}: value {} expected {} residual {} (tol {}) {}",
                        c.name,
                        fmt_sig(c.value),
                        fmt_sig(c.expected),
                        fmt_sig(c.residual),
                        fmt_sig(c.tolerance),
                        if c.passed { "PASS" } else { "FAIL" }
                    )
                })
                .collect();
            lines.extend(report.convergence.iter().map(|c| {
                format!(
                    "{} halving ratio {} {}",
                    c.name,
                    fmt_sig(c.ratio),
                    if c.passed { "PASS" } else { "FAIL" }
                )
            }));
            lines.push(if report.passed { "PASS" } else { "FAIL" }.to_string());
            lines.join("\n")
        }
        Format::Csv => {
            let mut out = vec!["check,value,expected,residual,tolerance,passed".to_string()];
            out.extend(report.checks.iter().map(|c| {
                csv_line(&[
                    c.name.to_string(),
                    fmt_sig(c.value),
                    fmt_sig(c.expected),
                    fmt_sig(c.residual),
                    fmt_sig(c.tolerance),
                    c.passed.to_string(),
                ])
            }));
            out.join("\n")
        }
    };
    ctx.emit(&text)?;
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

fn cmd_verify_limits(ctx: &mut Context<'_>, a: LimitsArgs) -> CmdResult {
    let n = required(a.n.or(ctx.config.n), "n")?;
    let eps = a.eps.or(ctx.config.eps).unwrap_or(FRAC_PI_2);
    let at_limit = eps == FRAC_PI_2;
    let r = paper_integrals(eps, n)?;
    let (l1, l2, l3) = paper_integral_limits(n);
    let close = |x: f64, y: f64| (x - y).abs() <= LIMIT_TOL * y.abs();
    let bound = paper_bound(n);
    let sign_ok = (paper_bound_sign(n) == std::cmp::Ordering::Less) == (bound < 0.0);
    let passed = !at_limit
        || (close(r.i1, l1)
            && close(r.i2, l2)
            && close(r.i3, l3)
            && (r.estimate() - bound).abs() <= LIMIT_TOL * bound.abs().max(1.0));
    let passed = passed && sign_ok;
    let status = if passed { "PASS" } else { "FAIL" };
    let text = match ctx.format(Format::Plain)? {
        Format::Plain => {
            let mut lines = vec![format!("n = {n}, eps = {}", fmt_sig(eps))];
            for (name, v, l) in [("I1", r.i1, l1), ("I2", r.i2, l2), ("I3", r.i3, l3)] {
                if at_limit {
                    lines.push(format!("{name} = {} (limit {})", fmt_sig(v), fmt_sig(l)));
                } else {
                    lines.push(format!("{name} = {}", fmt_sig(v)));
                }
            }
            lines.push(format!("-n + (I1 - I2)/I3 = {}", fmt_sig(r.estimate())));
            lines.push(format!(
                "n^2/8 - 2n + 2 = {} ({})",
                fmt_sig(bound),
                if bound < 0.0 {
                    "negative"
                } else {
                    "nonnegative"
                }
            ));
            lines.push(status.to_string());
            lines.join("\n")
        }
        Format::Json => serde_json::to_string_pretty(&rounded_json(serde_json::json!({
            "n": n,
            "eps": eps,
            "i1": {"value": r.i1, "limit": l1, "source": "quadrature"},
            "i2": {"value": r.i2, "limit": l2, "source": "quadrature"},
            "i3": {"value": r.i3, "limit": l3, "source": "quadrature"},
            "estimate": {"value": r.estimate(), "source": "quadrature"},
            "paper_bound": {"value": bound, "source": "closed_form"},
            "passed": passed,
        })))
        .expect("json"),
        Format::Csv => format!(
            "n,eps,i1,i2,i3,estimate,paper_bound,passed\n{n},{},{},{},{},{},{},{passed}",
            fmt_sig(eps),
            fmt_sig(r.i1),
            fmt_sig(r.i2),
            fmt_sig(r.i3),
            fmt_sig(r.estimate()),
            fmt_sig(bound)
        ),
    };
    ctx.emit(&text)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["wcs"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn delta1_flat() {
        let (code, out, _) = run_args(&["delta1", "--model", "flat", "--n", "4", "--eps", "0.5"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("39.4784176"), "{out}");
    }

    #[test]
    fn verify_limits_n6() {
        let (code, out, _) = run_args(&["verify-limits", "--n", "6"]);
        assert_eq!(code, 0);
        assert!(out.contains("I1 = 3.14159265359"), "{out}");
        assert!(out.contains("I2 = 2.74889357189"), "{out}");
        assert!(out.contains("I3 = 0.785398163397"), "{out}");
        assert!(out.trim_end().ends_with("PASS"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["delta1", "--model", "flat", "--n", "4"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["delta1", "--model", "nope", "--eps", "0.5"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["delta1", "--model", "sphere", "--eps", "2.0"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn solver_failure_code() {
        let (code, _, err) = run_args(&[
            "delta1",
            "--model",
            "flat",
            "--eps",
            "1",
            "--grid",
            "32",
            "--num-eigen",
            "4",
        ]);
        assert_eq!(code, EXIT_SOLVER, "{err}");
    }

    #[test]
    fn negative_t_flag() {
        let (code, out, err) = run_args(&[
            "verify-geometry",
            "--surface",
            "clifford:1,1",
            "--t",
            "-0.6",
            "--h",
            "1e-3",
        ]);
        assert_eq!(code, 0, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], true);
    }
}
