use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ebthresh::bench::{self, BenchGrid, Method};
use ebthresh::mml::{self, Cutover, EstimatorConfig, ModifiedThreshold, Rule, ScaleBounds, ScalePolicy};
use ebthresh::{io as dataio, signal, Error, ErrorClass, PriorSpec};

#[derive(Parser)]
#[command(name = "ebthresh", version, about = "Empirical Bayes thresholding of sparse sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise a data file (one number per line).
    Threshold(ThresholdArgs),
    /// Run the Monte Carlo comparison of thresholding methods.
    Bench(BenchArgs),
    /// Track the fitted threshold against the best threshold over sparsity levels.
    Demo(DemoArgs),
    /// Error of hard thresholding over a threshold grid, given truth and data files.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    Laplace,
    Cauchy,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Median,
    Mean,
    Hard,
    Soft,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (a directory for `bench` and `demo`); standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Omit the generation-time line so repeated runs give identical files.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct ThresholdArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "laplace")]
    prior: PriorArg,
    /// Laplace scale, or `mml` to fit it with the weight.
    #[arg(long, default_value = "0.5")]
    scale: String,
    #[arg(long, value_enum, default_value = "median")]
    rule: RuleArg,
    /// Switch to a threshold of √(2(1+A) log n) for very sparse signals.
    #[arg(long = "modified-A", value_name = "A")]
    modified_a: Option<f64>,
    /// Apply the switch when t̂ ≥ f·√(2 log n) instead of the default cutover.
    #[arg(long, value_name = "f", requires = "modified_a")]
    cutover_fraction: Option<f64>,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    sd: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Grid configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated method names, e.g. `exponential,cauchy,fdr=0.1`.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also run the very-sparse modification experiment.
    #[arg(long)]
    modified_experiment: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Numbers of nonzero entries.
    #[arg(long, value_delimiter = ',', default_value = "5,20,100,500,2000,10000")]
    levels: Vec<usize>,
    #[arg(long, default_value_t = bench::DEFAULT_MASTER_SEED)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// True means, one per line.
    truth: PathBuf,
    /// Observations, one per line.
    data: PathBuf,
    /// Number of grid points on [0, √(2 log n)].
    #[arg(long, default_value_t = signal::DEFAULT_GRID_POINTS)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Usage => 1,
        ErrorClass::Data => 2,
        ErrorClass::Numerical => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Threshold(a) => cmd_threshold(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Demo(a) => cmd_demo(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ebthresh: {e}");
            ExitCode::from(exit_code(e.class()))
        }
    }
}

fn timestamp_line(out: &OutputArgs) -> Option<String> {
    if out.no_timestamp {
        return None;
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Some(format!("generated_unix_time: {secs}"))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn output_dir(out: &OutputArgs) -> Result<Option<&Path>, Error> {
    if let Some(dir) = out.out.as_deref() {
        fs::create_dir_all(dir)?;
        return Ok(Some(dir));
    }
    Ok(None)
}

fn estimator_config(a: &ThresholdArgs) -> Result<EstimatorConfig, Error> {
    let rule = match a.rule {
        RuleArg::Median => Rule::PosteriorMedian,
        RuleArg::Mean => Rule::PosteriorMean,
        RuleArg::Hard => Rule::Hard,
        RuleArg::Soft => Rule::Soft,
    };
    let (prior, scale) = match (a.prior, a.scale.trim()) {
        (PriorArg::Laplace, "mml") => (PriorSpec::laplace(0.5)?, ScalePolicy::Mml(ScaleBounds::default())),
        (PriorArg::Laplace, s) => {
            let v: f64 = s.parse().map_err(|_| Error::InvalidParameter(format!("--scale must be a number or 'mml', got '{s}'")))?;
            (PriorSpec::laplace(v)?, ScalePolicy::Fixed)
        }
        (PriorArg::Cauchy, "mml") => {
            return Err(Error::InvalidParameter("scale estimation requires the Laplace prior".into()));
        }
        (PriorArg::Cauchy, _) => (PriorSpec::QuasiCauchy, ScalePolicy::Fixed),
    };
    let modified = a.modified_a.map(|exponent| ModifiedThreshold {
        exponent,
        cutover: a.cutover_fraction.map_or(Cutover::SparseBoundary, Cutover::FractionOfUniversal),
    });
    let config = EstimatorConfig { prior, scale, rule, modified, noise_sd: a.sd };
    config.validate()?;
    Ok(config)
}

fn cmd_threshold(a: ThresholdArgs) -> Result<(), Error> {
    let config = estimator_config(&a)?;
    let data = dataio::read_data(&a.input)?;
    if data.len() < 2 {
        return Err(Error::TooFewObservations { needed: 2, got: data.len() });
    }
    let est = mml::ebayes_estimate(&data, &config)?;
    let fit = &est.fit;
    let mut out = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Json => {
            let mut doc = json!({
                "n": data.len(),
                "config": config,
                "w_hat": fit.w_hat.get(),
                "a_hat": fit.a_hat,
                "t_hat": fit.t_hat,
                "zeta_hat": fit.zeta_hat,
                "at_lower_boundary": fit.at_lower_boundary,
                "at_upper_boundary": fit.at_upper_boundary,
                "threshold_applied": est.threshold,
                "modification_applied": est.modification_applied,
                "estimate": est.values,
            });
            if let Some(ts) = timestamp_line(&a.output) {
                doc["generated_unix_time"] = json!(ts.rsplit(' ').next());
            }
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "# ebthresh threshold")?;
            if let Some(ts) = timestamp_line(&a.output) {
                writeln!(out, "# {ts}")?;
            }
            let prior_name = match config.prior {
                PriorSpec::Laplace { .. } => "laplace",
                PriorSpec::QuasiCauchy => "quasi_cauchy",
            };
            writeln!(out, "# n: {}", data.len())?;
            writeln!(out, "# prior: {prior_name}")?;
            writeln!(out, "# noise_sd: {}", config.noise_sd)?;
            writeln!(out, "# w_hat: {}", fit.w_hat.get())?;
            match fit.a_hat.or(config.prior.scale()) {
                Some(s) => writeln!(out, "# a_hat: {s}")?,
                None => writeln!(out, "# a_hat: none")?,
            }
            writeln!(out, "# t_hat: {}", fit.t_hat)?;
            writeln!(out, "# zeta_hat: {}", fit.zeta_hat)?;
            writeln!(out, "# at_lower_boundary: {}", fit.at_lower_boundary)?;
            writeln!(out, "# at_upper_boundary: {}", fit.at_upper_boundary)?;
            writeln!(out, "# threshold_applied: {}", est.threshold)?;
            writeln!(out, "# modification_applied: {}", est.modification_applied)?;
            dataio::write_vector(&est.values, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), Error> {
    let mut grid = BenchGrid::default();
    if let Some(path) = &a.config {
        grid = dataio::parse_grid_config(&fs::read_to_string(path)?, grid)?;
    }
    if let Some(names) = &a.methods {
        grid.methods = names.iter().map(|s| s.parse::<Method>()).collect::<Result<_, _>>()?;
        if grid.baseline.is_some_and(|b| !grid.methods.contains(&b)) {
            grid.baseline = None;
        }
    }
    if let Some(r) = a.reps {
        grid.replications = r;
    }
    if let Some(s) = a.seed {
        grid.master_seed = s;
    }
    grid.validate()?;
    let result = bench::run_benchmark(&grid)?;
    let ineff = if grid.methods.len() >= 2 { Some(bench::inefficiency_table(&result)?) } else { None };
    let modified = if a.modified_experiment {
        Some(bench::modified_estimator_experiment(grid.master_seed, grid.replications)?)
    } else {
        None
    };
    let stamp = timestamp_line(&a.output);
    let dir = output_dir(&a.output)?;

    if a.output.format == Format::Json {
        let mut doc = json!({ "result": result, "inefficiency": ineff, "modified_experiment": modified });
        if let Some(ts) = &stamp {
            doc["generated"] = json!(ts);
        }
        let mut out = open_output(dir.map(|d| d.join("bench.json")).as_deref())?;
        serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
        writeln!(out)?;
        out.flush()?;
        return Ok(());
    }

    let header = |out: &mut dyn Write| -> io::Result<()> {
        if let Some(ts) = &stamp {
            writeln!(out, "# {ts}")?;
        }
        Ok(())
    };
    match dir {
        Some(d) => {
            let mut f = open_output(Some(&d.join("table.csv")))?;
            header(&mut f)?;
            bench::write_table_csv(&result, &mut f)?;
            f.flush()?;
            let mut f = open_output(Some(&d.join("cells.csv")))?;
            header(&mut f)?;
            bench::write_result_csv(&result, &mut f)?;
            f.flush()?;
            if let Some(t) = &ineff {
                let mut f = open_output(Some(&d.join("inefficiency.csv")))?;
                header(&mut f)?;
                bench::write_inefficiency_csv(t, &mut f)?;
                f.flush()?;
            }
            if let Some(m) = &modified {
                let mut f = open_output(Some(&d.join("modified.csv")))?;
                header(&mut f)?;
                write_modified_csv(m, &mut f)?;
                f.flush()?;
            }
        }
        None => {
            let mut out = open_output(None)?;
            header(&mut out)?;
            bench::write_table_csv(&result, &mut out)?;
            if let Some(t) = &ineff {
                writeln!(out)?;
                bench::write_inefficiency_csv(t, &mut out)?;
            }
            if let Some(m) = &modified {
                writeln!(out)?;
                write_modified_csv(m, &mut out)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

fn write_modified_csv(m: &bench::ModifiedComparison, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "k,mu0,unmodified,unmodified_se,modified,modified_se,difference_se")?;
    for c in &m.cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.k, c.mu0, c.unmodified, c.unmodified_se, c.modified, c.modified_se, c.difference_se
        )?;
    }
    Ok(())
}

fn cmd_demo(a: DemoArgs) -> Result<(), Error> {
    let levels = bench::threshold_tracking_sweep(a.n, &a.levels, a.seed)?;
    let stamp = timestamp_line(&a.output);
    let dir = output_dir(&a.output)?;
    if a.output.format == Format::Json {
        let mut doc = json!({ "n": a.n, "seed": a.seed, "levels": levels });
        if let Some(ts) = &stamp {
            doc["generated"] = json!(ts);
        }
        let mut out = open_output(dir.map(|d| d.join("demo.json")).as_deref())?;
        serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
        writeln!(out)?;
        out.flush()?;
        return Ok(());
    }
    let mut summary = open_output(dir.map(|d| d.join("tracking.csv")).as_deref())?;
    if let Some(ts) = &stamp {
        writeln!(summary, "# {ts}")?;
    }
    bench::write_tracking_csv(&levels, &mut summary)?;
    summary.flush()?;
    if let Some(d) = dir {
        for l in &levels {
            let mut f = open_output(Some(&d.join(format!("curve_{}.csv", l.nonzero))))?;
            if let Some(ts) = &stamp {
                writeln!(f, "# {ts}")?;
            }
            writeln!(f, "# nonzero: {}", l.nonzero)?;
            writeln!(f, "# eb_threshold: {}", l.eb_threshold)?;
            writeln!(f, "# oracle_threshold: {}", l.oracle_threshold)?;
            writeln!(f, "t,avg_sq_error")?;
            for (t, e) in &l.curve {
                writeln!(f, "{t},{e}")?;
            }
            f.flush()?;
        }
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), Error> {
    let mu = dataio::read_data(&a.truth)?;
    let x = dataio::read_data(&a.data)?;
    if a.points < 2 {
        return Err(Error::InvalidParameter("need at least two grid points".into()));
    }
    let top = ebthresh::competitors::universal_threshold(x.len())?;
    let m = a.points - 1;
    let grid: Vec<f64> = (0..=m).map(|i| top * i as f64 / m as f64).collect();
    let sweep = signal::oracle_threshold_sweep(&mu, &x, &grid)?;
    let mut out = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &sweep).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            if let Some(ts) = timestamp_line(&a.output) {
                writeln!(out, "# {ts}")?;
            }
            writeln!(out, "# best_t: {}", sweep.best_t)?;
            writeln!(out, "# best_error: {}", sweep.best_error)?;
            writeln!(out, "t,avg_sq_error")?;
            for (t, e) in &sweep.curve {
                writeln!(out, "{t},{e}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
