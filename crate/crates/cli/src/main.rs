//! Command-line front end: kernel tables, path simulation, Girsanov
//! reweighting, a validation suite and wetting-model condition checks.
//!
//! Every run resolves its configuration from an optional JSON config file
//! overridden by command-line flags, and embeds the resolved configuration
//! in the emitted artifact. Exit codes: 0 on success, 1 when a validation
//! or condition check fails, 2 on usage or configuration errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use sticky_core::diagnostics::{
    atom_frequency_check, feller_probe, sampler_agreement, wentzell_check, wentzell_null_check,
    CheckRecord, SuiteReport,
};
use sticky_core::girsanov::weighted_expectation;
use sticky_core::kernel::{
    chapman_kolmogorov_residual, sample_transition, transition_atom, transition_density,
    transition_mass,
};
use sticky_core::models::{flat_model, gaussian_model, verify_conditions, wetting_model};
use sticky_core::paths::{
    sample_euler_distorted, sample_exact_grid, sample_timechange, sample_timechange_terminal,
    TimeGrid,
};
use sticky_core::stats::mean_stderr;
use sticky_core::{Model, PairPotential, Params, PathSample, StickyParams};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "sticky", version, about = "Sticky reflected Brownian motion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the transition kernel (density, atom, total mass) as CSV.
    Kernel(KernelArgs),
    /// Sample paths and report ensemble statistics as JSON.
    Simulate(SimulateArgs),
    /// Estimate a distorted-semigroup expectation by Girsanov reweighting.
    Girsanov(GirsanovArgs),
    /// Run the analytic/statistical validation suite.
    Validate(ValidateArgs),
    /// Check the structural conditions of an interface wetting model.
    Wetting(WettingArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Kernel(args) => cmd_kernel(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Girsanov(args) => cmd_girsanov(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Wetting(args) => cmd_wetting(args),
    }
}

/// Load a JSON config file into a partial-config struct.
fn load_config<T: for<'de> Deserialize<'de> + Default>(path: &Option<PathBuf>) -> anyhow::Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        None => {
            use std::io::Write;
            if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
                // a closed pipe (e.g. piping into `head`) is not an error
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(e.into());
            }
            Ok(())
        }
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
    }
}

fn emit_json<T: Serialize>(output: &Option<PathBuf>, artifact: &T) -> anyhow::Result<()> {
    emit(output, &serde_json::to_string_pretty(artifact)?)
}

// ---------------------------------------------------------------------------
// kernel

#[derive(Args)]
struct KernelArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Stickiness parameter beta.
    #[arg(long)]
    beta: Option<f64>,
    /// Times, comma separated.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    /// Starting points, comma separated.
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    /// Upper end of the y grid.
    #[arg(long)]
    y_max: Option<f64>,
    /// Number of y grid points.
    #[arg(long)]
    y_points: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct KernelConfig {
    beta: Option<f64>,
    t: Option<Vec<f64>>,
    x: Option<Vec<f64>>,
    y_max: Option<f64>,
    y_points: Option<usize>,
}

fn cmd_kernel(args: KernelArgs) -> anyhow::Result<i32> {
    let file: KernelConfig = load_config(&args.config)?;
    let beta = args.beta.or(file.beta).unwrap_or(1.0);
    let ts = args.t.or(file.t).unwrap_or_else(|| vec![1.0]);
    let xs = args.x.or(file.x).unwrap_or_else(|| vec![0.0]);
    let y_max = args.y_max.or(file.y_max).unwrap_or(6.0);
    let y_points = args.y_points.or(file.y_points).unwrap_or(121);
    if y_points < 2 {
        bail!("y_points must be >= 2");
    }
    let params: Params = StickyParams::scalar(beta)?;

    let mut csv = String::new();
    writeln!(
        csv,
        "# sticky kernel table, version {VERSION}, beta = {beta}, y_max = {y_max}, y_points = {y_points}"
    )?;
    writeln!(csv, "t,x,y,density,atom,mass")?;
    for &t in &ts {
        for &x in &xs {
            let atom: f64 = transition_atom(t, x, &params)?;
            let mass: f64 = transition_mass(t, x, &params)?;
            for k in 0..y_points {
                let y = y_max * k as f64 / (y_points - 1) as f64;
                let d: f64 = transition_density(t, x, y, &params)?;
                writeln!(csv, "{t},{x},{y},{d:.17e},{atom:.17e},{mass:.17e}")?;
            }
        }
    }
    emit(&args.output, csv.trim_end())?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Sampler {
    /// Exact-in-distribution kernel draws on the grid.
    Exact,
    /// Time-change construction (n = 1 only); records noise and local time.
    Timechange,
    /// Splitting integrator for the distorted dynamics (needs a model).
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ModelKind {
    /// No drift (reference dynamics).
    Flat,
    /// H(x) = |x|^2 / 2.
    Gaussian,
    /// Nearest-neighbor pair potential pinned at the walls.
    Wetting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Potential {
    /// V(r) = r^2 / 2.
    Quadratic,
    /// V(r) = r^2 / 2 + eps cos r.
    Soft,
}

fn build_model(
    kind: ModelKind,
    n: usize,
    potential: Potential,
    eps: f64,
) -> anyhow::Result<Model> {
    Ok(match kind {
        ModelKind::Flat => flat_model(n),
        ModelKind::Gaussian => gaussian_model(n)?,
        ModelKind::Wetting => {
            let pot = match potential {
                Potential::Quadratic => PairPotential::quadratic(),
                Potential::Soft => PairPotential::soft_convex(eps)?,
            };
            wetting_model(n, pot)?
        }
    })
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    sampler: Option<Sampler>,
    #[arg(long)]
    beta: Option<f64>,
    /// Dimension (number of components).
    #[arg(long)]
    dim: Option<usize>,
    /// Starting point, comma separated; broadcast when a single value.
    #[arg(long, value_delimiter = ',')]
    x0: Option<Vec<f64>>,
    #[arg(long)]
    horizon: Option<f64>,
    /// Number of uniform steps (exact/euler samplers).
    #[arg(long)]
    steps: Option<usize>,
    /// Walk step (timechange sampler).
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long, value_enum)]
    potential: Option<Potential>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Embed the first K full paths in the artifact.
    #[arg(long)]
    emit_paths: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SimulateConfig {
    sampler: Option<Sampler>,
    beta: Option<f64>,
    dim: Option<usize>,
    x0: Option<Vec<f64>>,
    horizon: Option<f64>,
    steps: Option<usize>,
    dt: Option<f64>,
    paths: Option<usize>,
    model: Option<ModelKind>,
    potential: Option<Potential>,
    eps: Option<f64>,
    seed: Option<u64>,
    emit_paths: Option<usize>,
}

#[derive(Serialize)]
struct ResolvedSimulate {
    sampler: Sampler,
    beta: f64,
    dim: usize,
    x0: Vec<f64>,
    horizon: f64,
    steps: usize,
    dt: f64,
    paths: usize,
    model: ModelKind,
    potential: Potential,
    eps: f64,
    seed: u64,
}

#[derive(Serialize)]
struct SimulateArtifact {
    version: &'static str,
    config: ResolvedSimulate,
    terminal_mean: Vec<f64>,
    terminal_stderr: Vec<f64>,
    terminal_atom_fraction: Vec<f64>,
    mean_occupation: Vec<f64>,
    mean_local_time: Vec<f64>,
    sample_paths: Vec<PathSample>,
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<i32> {
    let file: SimulateConfig = load_config(&args.config)?;
    let dim = args.dim.or(file.dim).unwrap_or(1);
    let mut x0 = args.x0.or(file.x0).unwrap_or_else(|| vec![0.0]);
    if x0.len() == 1 && dim > 1 {
        x0 = vec![x0[0]; dim];
    }
    let cfg = ResolvedSimulate {
        sampler: args.sampler.or(file.sampler).unwrap_or(Sampler::Exact),
        beta: args.beta.or(file.beta).unwrap_or(1.0),
        dim,
        x0,
        horizon: args.horizon.or(file.horizon).unwrap_or(1.0),
        steps: args.steps.or(file.steps).unwrap_or(200),
        dt: args.dt.or(file.dt).unwrap_or(1e-3),
        paths: args.paths.or(file.paths).unwrap_or(1000),
        model: args.model.or(file.model).unwrap_or(ModelKind::Flat),
        potential: args.potential.or(file.potential).unwrap_or(Potential::Quadratic),
        eps: args.eps.or(file.eps).unwrap_or(0.1),
        seed: args.seed.or(file.seed).unwrap_or(0),
    };
    let keep = args.emit_paths.or(file.emit_paths).unwrap_or(0);
    if cfg.x0.len() != cfg.dim {
        bail!("x0 has {} components but dim = {}", cfg.x0.len(), cfg.dim);
    }
    if cfg.sampler == Sampler::Timechange && cfg.dim != 1 {
        bail!("the timechange sampler is one-dimensional");
    }

    let params = StickyParams::new(cfg.beta, cfg.dim)?;
    let model = build_model(cfg.model, cfg.dim, cfg.potential, cfg.eps)?;
    let grid = TimeGrid::uniform(cfg.horizon, cfg.steps)?;

    let n = cfg.dim;
    let mut terminals: Vec<Vec<f64>> = vec![Vec::with_capacity(cfg.paths); n];
    let mut zero_counts = vec![0usize; n];
    let mut occ_sum = vec![0.0f64; n];
    let mut kept: Vec<PathSample> = Vec::new();
    for j in 0..cfg.paths {
        // one independent ChaCha stream per path: reproducible regardless of
        // batching and safe to shard later
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(j as u64 + 1);
        let path = match cfg.sampler {
            Sampler::Exact => sample_exact_grid(&cfg.x0, &grid, &params, &mut rng)?,
            Sampler::Timechange => {
                sample_timechange(cfg.x0[0], cfg.horizon, cfg.dt, &params, &mut rng)?
            }
            Sampler::Euler => {
                sample_euler_distorted(&cfg.x0, &grid, &params, &model, &mut rng)?
            }
        };
        let last = path.states.last().unwrap();
        for i in 0..n {
            terminals[i].push(last[i]);
            if last[i] == 0.0 {
                zero_counts[i] += 1;
            }
            occ_sum[i] += path.occupation(i)?;
        }
        if j < keep {
            kept.push(path);
        }
    }

    let mut mean = Vec::new();
    let mut se = Vec::new();
    for t in &terminals {
        let (m, s) = mean_stderr(t)?;
        mean.push(m);
        se.push(s);
    }
    let paths_f = cfg.paths as f64;
    let artifact = SimulateArtifact {
        version: VERSION,
        terminal_mean: mean,
        terminal_stderr: se,
        terminal_atom_fraction: zero_counts.iter().map(|&c| c as f64 / paths_f).collect(),
        mean_occupation: occ_sum.iter().map(|&o| o / paths_f).collect(),
        mean_local_time: occ_sum.iter().map(|&o| o / paths_f / cfg.beta).collect(),
        sample_paths: kept,
        config: cfg,
    };
    emit_json(&args.output, &artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// girsanov

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Functional {
    /// f = 1; estimates E[Z_t], which must be 1.
    One,
    /// f(x) = exp(-(x_1 + ... + x_n)).
    ExpNegSum,
    /// f(x) = x_1.
    First,
}

impl Functional {
    fn eval(self, x: &[f64]) -> f64 {
        match self {
            Functional::One => 1.0,
            Functional::ExpNegSum => (-x.iter().sum::<f64>()).exp(),
            Functional::First => x[0],
        }
    }
}

#[derive(Args)]
struct GirsanovArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    x0: Option<Vec<f64>>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    #[arg(long, value_enum)]
    potential: Option<Potential>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum)]
    functional: Option<Functional>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GirsanovConfig {
    beta: Option<f64>,
    dim: Option<usize>,
    x0: Option<Vec<f64>>,
    t: Option<f64>,
    paths: Option<usize>,
    steps: Option<usize>,
    model: Option<ModelKind>,
    potential: Option<Potential>,
    eps: Option<f64>,
    functional: Option<Functional>,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct ResolvedGirsanov {
    beta: f64,
    dim: usize,
    x0: Vec<f64>,
    t: f64,
    paths: usize,
    steps: usize,
    model: ModelKind,
    potential: Potential,
    eps: f64,
    functional: Functional,
    seed: u64,
}

#[derive(Serialize)]
struct GirsanovArtifact {
    version: &'static str,
    config: ResolvedGirsanov,
    estimate: f64,
    stderr: f64,
    /// E[Z_t] on the same ensemble size with a shifted stream, and its
    /// z-score against 1; a large |z| flags discretization bias.
    mean_weight: f64,
    mean_weight_z: f64,
}

fn cmd_girsanov(args: GirsanovArgs) -> anyhow::Result<i32> {
    let file: GirsanovConfig = load_config(&args.config)?;
    let dim = args.dim.or(file.dim).unwrap_or(1);
    let mut x0 = args.x0.or(file.x0).unwrap_or_else(|| vec![0.5]);
    if x0.len() == 1 && dim > 1 {
        x0 = vec![x0[0]; dim];
    }
    let cfg = ResolvedGirsanov {
        beta: args.beta.or(file.beta).unwrap_or(1.0),
        dim,
        x0,
        t: args.t.or(file.t).unwrap_or(1.0),
        paths: args.paths.or(file.paths).unwrap_or(2000),
        steps: args.steps.or(file.steps).unwrap_or(200),
        model: args.model.or(file.model).unwrap_or(ModelKind::Gaussian),
        potential: args.potential.or(file.potential).unwrap_or(Potential::Quadratic),
        eps: args.eps.or(file.eps).unwrap_or(0.1),
        functional: args.functional.or(file.functional).unwrap_or(Functional::One),
        seed: args.seed.or(file.seed).unwrap_or(0),
    };
    let params = StickyParams::new(cfg.beta, cfg.dim)?;
    let model = build_model(cfg.model, cfg.dim, cfg.potential, cfg.eps)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let f = cfg.functional;
    let (estimate, stderr) = weighted_expectation(
        |x| f.eval(x),
        cfg.t,
        &cfg.x0,
        &model,
        &params,
        cfg.paths,
        cfg.steps,
        &mut rng,
    )?;
    let mut rng2 = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng2.set_stream(u64::MAX);
    let (mw, mw_se) = weighted_expectation(
        |_| 1.0,
        cfg.t,
        &cfg.x0,
        &model,
        &params,
        cfg.paths,
        cfg.steps,
        &mut rng2,
    )?;
    let artifact = GirsanovArtifact {
        version: VERSION,
        config: cfg,
        estimate,
        stderr,
        mean_weight: mw,
        mean_weight_z: (mw - 1.0) / mw_se,
    };
    emit_json(&args.output, &artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// validate

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ensemble size for the statistical checks.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ValidateConfig {
    beta: Option<f64>,
    seed: Option<u64>,
    samples: Option<usize>,
}

#[derive(Serialize)]
struct ValidateArtifact {
    version: &'static str,
    beta: f64,
    samples: usize,
    report: SuiteReport,
}

fn cmd_validate(args: ValidateArgs) -> anyhow::Result<i32> {
    let file: ValidateConfig = load_config(&args.config)?;
    let beta = args.beta.or(file.beta).unwrap_or(1.0);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let samples = args.samples.or(file.samples).unwrap_or(5000);
    if samples < 100 {
        bail!("samples must be >= 100");
    }
    let params: Params = StickyParams::scalar(beta)?;
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<CheckRecord> = Vec::new();

    // kernel conservativeness across scales
    let mut worst = 0.0f64;
    for &t in &[0.1, 1.0, 10.0] {
        for &x in &[0.0, 0.5, 5.0] {
            let m: f64 = transition_mass(t, x, &params)?;
            worst = worst.max((m - 1.0).abs());
        }
    }
    checks.push(CheckRecord::new("kernel mass = 1", worst, 0.0, 1e-6));

    // symmetry of the mu-density
    let mut asym = 0.0f64;
    for &(x, y) in &[(0.3, 1.5), (0.5, 4.0)] {
        let a: f64 = transition_density(1.0, x, y, &params)?;
        let b: f64 = transition_density(1.0, y, x, &params)?;
        asym = asym.max((a - b).abs() / a.max(1e-300));
    }
    checks.push(CheckRecord::new("density symmetry", asym, 0.0, 1e-12));

    // Chapman-Kolmogorov at one configuration
    let ck: f64 =
        chapman_kolmogorov_residual(0.5, 0.5, 0.0, &params, &[0.0, 0.5, 1.0, 2.0])?;
    checks.push(CheckRecord::new("Chapman-Kolmogorov residual", ck, 0.0, 1e-5));

    // boundary condition of the generator
    checks.push(wentzell_check(&params, &[1e-2, 1e-3, 1e-4])?);
    checks.push(wentzell_null_check(&params, &[1e-2, 1e-3, 1e-4])?);

    // continuity modulus of x -> P_x(X_t <= 1)
    checks.extend(feller_probe(0.5, 1.0, 4.0, &[8, 16, 32], &params)?);

    // atom frequency of the exact sampler against the closed form
    let atom: f64 = transition_atom(1.0, 0.2, &params)?;
    let draws: Vec<f64> = (0..samples)
        .map(|_| sample_transition(1.0, 0.2, &params, &mut rng))
        .collect::<sticky_core::Result<_>>()?;
    checks.push(atom_frequency_check(&draws, atom)?);

    // cross-sampler agreement on the mixed law
    let report = sampler_agreement(
        |r: &mut ChaCha8Rng| {
            sample_transition(0.5, 0.3, &params, r)
        },
        |r: &mut ChaCha8Rng| sample_timechange_terminal(0.3, 0.5, 1e-3, &params, r),
        samples,
        &mut rng,
    )?;
    checks.push(CheckRecord::new(
        "sampler agreement KS p-value",
        report.ks_p,
        0.5,
        0.49,
    ));
    checks.push(CheckRecord::new(
        "sampler agreement atom z",
        report.atom_z,
        0.0,
        3.0,
    ));

    let suite = SuiteReport {
        suite: "validate".into(),
        seed,
        checks,
        runtime_secs: start.elapsed().as_secs_f64(),
    };
    let pass = suite.pass();
    for c in &suite.checks {
        eprintln!(
            "{} {} (statistic {:.6e}, target {:.6e}, tol {:.2e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.statistic,
            c.target,
            c.tolerance
        );
    }
    emit_json(
        &args.output,
        &ValidateArtifact {
            version: VERSION,
            beta,
            samples,
            report: suite,
        },
    )?;
    Ok(if pass { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// wetting

#[derive(Args)]
struct WettingArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of interface heights.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_enum)]
    potential: Option<Potential>,
    #[arg(long)]
    eps: Option<f64>,
    /// Upper corner of the scanned box [0, hi]^n.
    #[arg(long)]
    hi: Option<f64>,
    /// Grid resolution per axis.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct WettingConfig {
    dim: Option<usize>,
    potential: Option<Potential>,
    eps: Option<f64>,
    hi: Option<f64>,
    resolution: Option<usize>,
}

#[derive(Serialize)]
struct WettingArtifact {
    version: &'static str,
    dim: usize,
    potential: Potential,
    eps: f64,
    hi: f64,
    resolution: usize,
    declared_bounds: (f64, f64, f64),
    report: sticky_core::models::ConditionsReport,
}

fn cmd_wetting(args: WettingArgs) -> anyhow::Result<i32> {
    let file: WettingConfig = load_config(&args.config)?;
    let dim = args.dim.or(file.dim).unwrap_or(2);
    let potential = args.potential.or(file.potential).unwrap_or(Potential::Quadratic);
    let eps = args.eps.or(file.eps).unwrap_or(0.1);
    let hi = args.hi.or(file.hi).unwrap_or(8.0);
    let resolution = args.resolution.or(file.resolution).unwrap_or(17);

    let pot = match potential {
        Potential::Quadratic => PairPotential::quadratic(),
        Potential::Soft => PairPotential::soft_convex(eps)?,
    };
    let model: Model = wetting_model(dim, pot)?;
    let bounds = model.bounds.expect("wetting model declares bounds");
    let report = verify_conditions(&model, hi, resolution)?;
    for c in &report.conditions {
        eprintln!(
            "{} {} (margin {:.6e} at {:?})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.margin,
            c.witness
        );
    }
    let pass = report.pass;
    emit_json(
        &args.output,
        &WettingArtifact {
            version: VERSION,
            dim,
            potential,
            eps,
            hi,
            resolution,
            declared_bounds: (bounds.k1, bounds.k2, bounds.k3),
            report,
        },
    )?;
    Ok(if pass { 0 } else { 1 })
}
