//! `invgamma` command-line tool.
//!
//! Exit codes: 0 success, 2 malformed input or invalid flags, 3 a
//! non-positive sample value, 4 estimator failure (or non-convergence with
//! `--strict`), 5 I/O failure.

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use invgamma::harness::curves::{default_variants, linspace};
use invgamma::harness::{
    emit_prior_posterior_curves, format_f64, kl_summary, pairwise_kl_tests, run_bias_experiment,
    run_kl_experiment, write_bias_csv, write_curves_csv, write_records_csv, Parameter,
};
use invgamma::{
    fit, kl_divergence, ConvergenceConfig, Error, Estimator, ExperimentConfig, FitReport, Hyperparams,
    InvGammaParams, PolyShapePrior, ScaleGammaPrior, ShapePriorABC, SufficientStats,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "invgamma",
    version,
    about = "Inverse Gamma estimation, sampling and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a sample read from FILE (or standard input), one value per line.
    Fit(FitArgs),
    /// Draw n values from IG(alpha, beta), one per line.
    Sample(SampleArgs),
    /// KL(p || q) between two Inverse Gamma distributions.
    Kl(KlArgs),
    /// KL accuracy experiment: writes one CSV row per simulation and estimator.
    Benchmark(ExperimentArgs),
    /// Bias experiment: writes the aggregate bias table.
    Bias(BiasArgs),
    /// Prior and posterior log-density curves of the BL1 shape posterior.
    Curves(CurvesArgs),
}

#[derive(Args, Clone)]
struct PriorArgs {
    /// Shape prior a (BL1)
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Shape prior b (BL1)
    #[arg(long, default_value_t = 0.01)]
    b: f64,
    /// Shape prior c (BL1)
    #[arg(long, default_value_t = 0.01)]
    c: f64,
    /// Scale prior shape d (BL1, BL2)
    #[arg(long, default_value_t = 0.01)]
    d: f64,
    /// Scale prior rate e (BL1, BL2)
    #[arg(long, default_value_t = 0.01)]
    e: f64,
    /// Shape prior w0 (BL2)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    w0: f64,
    /// Shape prior w1 (BL2)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    w1: f64,
    /// Shape prior w2 (BL2)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    w2: f64,
    /// Relative tolerance for the iterative estimators
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Iteration cap for the iterative estimators
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

impl PriorArgs {
    fn hyperparams(&self) -> Result<Hyperparams, CliError> {
        Ok(Hyperparams {
            shape: ShapePriorABC::new(self.a, self.b, self.c).map_err(CliError::usage)?,
            scale: ScaleGammaPrior::new(self.d, self.e).map_err(CliError::usage)?,
            poly: PolyShapePrior::new(self.w0, self.w1, self.w2).map_err(CliError::usage)?,
        })
    }

    fn convergence(&self) -> Result<ConvergenceConfig, CliError> {
        ConvergenceConfig::new(self.tol, self.max_iter).map_err(CliError::usage)
    }
}

#[derive(Args)]
struct FitArgs {
    /// Input file; standard input when omitted
    file: Option<PathBuf>,
    #[arg(long, default_value = "ml1")]
    estimator: Estimator,
    /// Treat non-convergence as failure (exit 4)
    #[arg(long)]
    strict: bool,
    /// Emit a JSON object instead of key=value lines
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    prior: PriorArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct KlArgs {
    #[arg(long)]
    p_alpha: f64,
    #[arg(long)]
    p_beta: f64,
    #[arg(long)]
    q_alpha: f64,
    #[arg(long)]
    q_beta: f64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', default_value = "500,2500,5000")]
    sizes: Vec<usize>,
    /// Simulations per sample size
    #[arg(long, default_value_t = 500)]
    sims: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path [default: benchmark.csv or bias.csv]
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    prior: PriorArgs,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig, CliError> {
        let cfg = ExperimentConfig {
            sizes: self.sizes.clone(),
            sims_per_size: self.sims,
            base_seed: self.seed,
            hyperparams: self.prior.hyperparams()?,
            conv: self.prior.convergence()?,
            ..Default::default()
        };
        cfg.validate().map_err(CliError::usage)?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct BiasArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Also write the per-simulation records to this CSV
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(Args)]
struct CurvesArgs {
    /// True shape of the simulated sample
    #[arg(long, default_value_t = 10.0)]
    alpha: f64,
    /// True scale of the simulated sample
    #[arg(long, default_value_t = 25.0)]
    beta: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lower end of the shape grid
    #[arg(long, default_value_t = 0.05)]
    grid_min: f64,
    /// Upper end of the shape grid
    #[arg(long, default_value_t = 30.0)]
    grid_max: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 600)]
    grid_points: usize,
    #[arg(long, default_value = "curves.csv")]
    out: PathBuf,
    /// Scale prior shape d
    #[arg(long, default_value_t = 0.01)]
    d: f64,
    /// Scale prior rate e
    #[arg(long, default_value_t = 0.01)]
    e: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Display) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }

    fn usage(e: impl Display) -> Self {
        Self::new(2, e)
    }

    fn io(path: &Path, e: impl Display) -> Self {
        Self::new(5, format!("{}: {e}", path.display()))
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::new(5, e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Kl(args) => cmd_kl(args),
        Command::Benchmark(args) => cmd_benchmark(args),
        Command::Bias(args) => cmd_bias(args),
        Command::Curves(args) => cmd_curves(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // a closed pipe downstream is not worth a diagnostic
        Err(e) if e.code == 5 && e.message.contains("Broken pipe") => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("invgamma: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

/// Parses newline-delimited positive reals, skipping blank lines.
fn read_sample<R: BufRead>(reader: R) -> Result<Vec<f64>, CliError> {
    let mut xs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let v: f64 = text
            .parse()
            .map_err(|_| CliError::new(2, format!("line {lineno}: cannot parse {text:?} as a number")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::new(
                3,
                format!("line {lineno}: value {text} is not a positive finite number"),
            ));
        }
        xs.push(v);
    }
    Ok(xs)
}

fn fit_output(report: &FitReport, n: usize) -> Vec<(&'static str, String)> {
    let mut fields = vec![
        ("alpha", format_f64(report.params.alpha())),
        ("beta", format_f64(report.params.beta())),
        ("estimator", report.estimator.name().to_string()),
        ("n", n.to_string()),
        ("iterations", report.iterations.to_string()),
        ("converged", report.converged.to_string()),
        ("residual", format_f64(report.residual)),
    ];
    if let Some(post) = &report.posterior {
        fields.push(("posterior_mean", format_f64(post.mean)));
        fields.push(("posterior_precision", format_f64(post.precision)));
    }
    fields
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let hp = args.prior.hyperparams()?;
    let conv = args.prior.convergence()?;
    let xs = match &args.file {
        Some(path) => read_sample(BufReader::new(
            File::open(path).map_err(|e| CliError::io(path, e))?,
        ))?,
        None => read_sample(io::stdin().lock())?,
    };
    let stats = SufficientStats::from_samples(&xs).map_err(|e| CliError::new(4, e))?;
    let report = fit(args.estimator, &stats, &hp, &conv).map_err(|e| CliError::new(4, e))?;
    if args.strict && !report.converged {
        return Err(CliError::new(
            4,
            Error::NonConvergence {
                func: args.estimator.name(),
                iterations: report.iterations,
            },
        ));
    }

    let mut out = io::stdout().lock();
    if args.json {
        let mut obj = serde_json::Map::new();
        obj.insert("alpha".into(), report.params.alpha().into());
        obj.insert("beta".into(), report.params.beta().into());
        obj.insert("estimator".into(), report.estimator.name().into());
        obj.insert("n".into(), stats.n().into());
        obj.insert("iterations".into(), report.iterations.into());
        obj.insert("converged".into(), report.converged.into());
        obj.insert("residual".into(), report.residual.into());
        if let Some(post) = &report.posterior {
            obj.insert("posterior_mean".into(), post.mean.into());
            obj.insert("posterior_precision".into(), post.precision.into());
        }
        writeln!(out, "{}", serde_json::Value::Object(obj))?;
    } else {
        for (k, v) in fit_output(&report, stats.n()) {
            writeln!(out, "{k}={v}")?;
        }
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let p = InvGammaParams::new(args.alpha, args.beta).map_err(CliError::usage)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = BufWriter::new(io::stdout().lock());
    for _ in 0..args.n {
        writeln!(out, "{}", format_f64(p.sample_one(&mut rng)))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_kl(args: KlArgs) -> Result<(), CliError> {
    let p = InvGammaParams::new(args.p_alpha, args.p_beta).map_err(CliError::usage)?;
    let q = InvGammaParams::new(args.q_alpha, args.q_beta).map_err(CliError::usage)?;
    let kl = kl_divergence(&p, &q).map_err(|e| CliError::new(4, e))?;
    println!("{}", format_f64(kl));
    Ok(())
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so a failed run never leaves a truncated CSV behind.
fn write_atomically(
    path: &Path,
    write: impl FnOnce(&mut BufWriter<&File>) -> io::Result<()>,
) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        write(&mut w)
            .and_then(|()| w.flush())
            .map_err(|e| CliError::io(path, e))?;
    }
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn experiment_error(e: Error) -> CliError {
    match e {
        Error::Config(_) => CliError::usage(e),
        other => CliError::new(4, other),
    }
}

fn cmd_benchmark(args: ExperimentArgs) -> Result<(), CliError> {
    let cfg = args.config()?;
    let records = run_kl_experiment(&cfg).map_err(experiment_error)?;
    let path = args.out.unwrap_or_else(|| "benchmark.csv".into());
    write_atomically(&path, |w| write_records_csv(w, &records))?;

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:>6}  {:<4}  {:>12}  {:>12}  {:>9}  {:>5}",
        "N", "est", "median_kl", "mean_kl", "mean_iter", "fails"
    )?;
    for row in kl_summary(&records) {
        writeln!(
            out,
            "{:>6}  {:<4}  {:>12.4e}  {:>12.4e}  {:>9.2}  {:>5}",
            row.n,
            row.estimator.name(),
            row.median_kl,
            row.mean_kl,
            row.mean_iterations,
            row.excluded
        )?;
    }
    writeln!(out)?;
    writeln!(out, "{:>6}  {:<10}  {:>10}", "N", "pair", "p")?;
    for t in pairwise_kl_tests(&records) {
        let p = t
            .test
            .map_or_else(|| "n/a".to_string(), |t| format!("{:.3e}", t.p_two_sided));
        writeln!(
            out,
            "{:>6}  {:<10}  {:>10}",
            t.n,
            format!("{}-{}", t.first.name(), t.second.name()),
            p
        )?;
    }
    writeln!(out, "wrote {} rows to {}", records.len(), path.display())?;
    Ok(())
}

fn cmd_bias(args: BiasArgs) -> Result<(), CliError> {
    let cfg = args.experiment.config()?;
    let report = run_bias_experiment(&cfg).map_err(experiment_error)?;
    let path = args.experiment.out.unwrap_or_else(|| "bias.csv".into());
    write_atomically(&path, |w| write_bias_csv(w, &report.table))?;
    if let Some(path) = &args.records {
        write_atomically(path, |w| write_records_csv(w, &report.records))?;
    }

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:>6}  {:<4}  {:<5}  {:>24}  {:>9}",
        "N", "est", "param", "bias mean ± std", "skewness"
    )?;
    for row in &report.table {
        let param = match row.parameter {
            Parameter::Alpha => "alpha",
            Parameter::Beta => "beta",
        };
        writeln!(
            out,
            "{:>6}  {:<4}  {:<5}  {:>24}  {:>9.3}",
            row.n,
            row.estimator.name(),
            param,
            format!("{:.4} ± {:.4}", row.mean_bias, row.std_bias),
            row.skewness
        )?;
    }
    writeln!(out, "wrote {} rows to {}", report.table.len(), path.display())?;
    Ok(())
}

fn cmd_curves(args: CurvesArgs) -> Result<(), CliError> {
    let truth = InvGammaParams::new(args.alpha, args.beta).map_err(CliError::usage)?;
    let scale = ScaleGammaPrior::new(args.d, args.e).map_err(CliError::usage)?;
    let conv = ConvergenceConfig::new(args.tol, args.max_iter).map_err(CliError::usage)?;
    if !(args.grid_min > 0.0
        && args.grid_min < args.grid_max
        && args.grid_max.is_finite()
        && args.grid_points >= 3)
    {
        return Err(CliError::usage(
            "grid needs 0 < grid-min < grid-max and at least 3 points",
        ));
    }

    let xs = truth.sample(args.n, &mut ChaCha8Rng::seed_from_u64(args.seed));
    let stats = if xs.is_empty() {
        SufficientStats::empty()
    } else {
        SufficientStats::from_samples(&xs).map_err(|e| CliError::new(4, e))?
    };
    let grid = linspace(args.grid_min, args.grid_max, args.grid_points);
    let rows = emit_prior_posterior_curves(&stats, &default_variants(), &scale, &grid, args.alpha, &conv)
        .map_err(|e| CliError::new(4, e))?;
    write_atomically(&args.out, |w| write_curves_csv(w, &rows))?;

    let mut out = io::stdout().lock();
    writeln!(out, "{:<20}  {:>12}  {:>12}", "variant", "argmax", "alpha_hat")?;
    for chunk in rows.chunks(grid.len()) {
        let best = chunk
            .iter()
            .max_by(|a, b| a.log_posterior.total_cmp(&b.log_posterior))
            .expect("grid is nonempty");
        writeln!(
            out,
            "{:<20}  {:>12.4}  {:>12.4}",
            best.variant, best.alpha, best.alpha_hat
        )?;
    }
    writeln!(out, "wrote {} rows to {}", rows.len(), args.out.display())?;
    Ok(())
}
