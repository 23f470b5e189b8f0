use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fran_core::experiments::{cross_validate, run_sweep, FigureId, Mode, Series, SweepSpec, SweptVariable};
use fran_core::montecarlo::Policy;
use fran_core::{Error, Scenario, ScenarioSpec};

const EXIT_ERROR: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CROSSCHECK: u8 = 3;

#[derive(Parser)]
#[command(name = "fran-tradeoff", version, about = "Latency, success probability and rate of cache-enabled two-tier F-RANs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a figure sweep and write `<out>/<figure>.csv`.
    Run {
        /// Scenario file; the reference parameters are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// fig2 .. fig7, custom, or all.
        #[arg(long)]
        figure: String,
        #[arg(long, default_value = "analytic")]
        mode: String,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Comma-separated grid replacing the figure default.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Swept variable of a custom sweep (density_ratio, cached_count, xi, d_front, cluster_radius).
        #[arg(long)]
        sweep: Option<String>,
        /// Cluster radii of the benchmark, comma-separated.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Worker threads; 0 uses every core.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check a scenario file and list every problem found.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare analytic metrics with simulation estimates.
    Crosscheck {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        policy: PolicyArg,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Maxrsrp,
    Mindelay,
}

enum Failure {
    Invalid(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(errs) => Failure::Invalid(errs.to_string()),
            Error::Parse(m) | Error::Sweep(m) => Failure::Invalid(m),
            e => Failure::Other(e.to_string()),
        }
    }
}

fn load(config: Option<&Path>, workers: Option<usize>) -> Result<Scenario, Failure> {
    let mut spec = match config {
        Some(p) => ScenarioSpec::from_file(p)?,
        None => ScenarioSpec::reference(),
    };
    if let Some(w) = workers {
        spec.simulation.workers = w;
    }
    spec.validate().map_err(|e| Failure::Invalid(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            figure,
            mode,
            realizations,
            seed,
            out,
            grid,
            sweep,
            radii,
            workers,
        } => run(RunArgs {
            config,
            figure,
            mode,
            realizations,
            seed,
            out,
            grid,
            sweep,
            radii,
            workers,
        }),
        Command::Validate { config } => validate(&config),
        Command::Crosscheck {
            config,
            policy,
            realizations,
            seed,
            workers,
        } => crosscheck(config.as_deref(), policy, realizations, seed, workers),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(m)) => {
            eprintln!("invalid configuration: {m}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

struct RunArgs {
    config: Option<PathBuf>,
    figure: String,
    mode: String,
    realizations: Option<usize>,
    seed: Option<u64>,
    out: PathBuf,
    grid: Option<Vec<f64>>,
    sweep: Option<String>,
    radii: Option<Vec<f64>>,
    workers: Option<usize>,
}

fn run(a: RunArgs) -> Result<u8, Failure> {
    let base = load(a.config.as_deref(), a.workers)?;
    let mode: Mode = a.mode.parse()?;
    let figures: Vec<FigureId> = if a.figure == "all" {
        FigureId::ALL.to_vec()
    } else {
        vec![a.figure.parse()?]
    };
    std::fs::create_dir_all(&a.out).map_err(|e| Failure::Other(format!("{}: {e}", a.out.display())))?;
    for figure in figures {
        let mut spec = SweepSpec::figure(figure, &base)?;
        spec.mode = mode;
        if let Some(n) = a.realizations {
            spec.realizations = n;
        }
        if let Some(s) = a.seed {
            spec.seed = s;
        }
        if let Some(v) = &a.sweep {
            spec.swept = v.parse::<SweptVariable>()?;
            if a.grid.is_none() && spec.swept != SweptVariable::DensityRatio {
                return Err(Failure::Other(format!("--sweep {v} needs --grid")));
            }
            if spec.swept == SweptVariable::ClusterRadius {
                spec.policies.clear();
                spec.series = Series::None;
            }
        }
        if let Some(g) = &a.grid {
            spec.grid = g.clone();
        }
        if let Some(r) = &a.radii {
            spec.benchmark_radii = r.clone();
        }
        let result = run_sweep(&spec)?;
        let path = a.out.join(format!("{figure}.csv"));
        let bytes = result.to_csv()?;
        std::fs::write(&path, bytes).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
        println!(
            "{figure}: {} rows ({} with errors) -> {}",
            result.rows.len(),
            result.failed_rows(),
            path.display()
        );
    }
    Ok(0)
}

fn validate(config: &Path) -> Result<u8, Failure> {
    let s = load(Some(config), None)?;
    let n = s.network();
    println!(
        "ok: k = {:.6}, p_hit = {:.6}, lambda_R/lambda_F = {}",
        s.k(),
        s.hit_probability(),
        n.density_ratio()
    );
    Ok(0)
}

fn crosscheck(
    config: Option<&Path>,
    policy: PolicyArg,
    realizations: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> Result<u8, Failure> {
    let s = load(config, workers)?;
    let policy = match policy {
        PolicyArg::Maxrsrp => Policy::MaxRsrp,
        PolicyArg::Mindelay => Policy::MinDelay,
    };
    let n = realizations.unwrap_or(s.simulation().realizations);
    let seed = seed.unwrap_or(s.simulation().seed);
    let report = cross_validate(&s, policy, n, seed)?;
    println!("{:<22} {:>12} {:>12} {:>10} {:>7}  verdict", "metric", "analytic", "mc", "std_err", "z");
    for c in &report.checks {
        let verdict = if c.low_power {
            "low power"
        } else if c.pass {
            "pass"
        } else {
            "FAIL"
        };
        println!(
            "{:<22} {:>12.6} {:>12.6} {:>10.2e} {:>7.2}  {verdict}",
            c.metric,
            c.analytic,
            c.estimate,
            c.std_error,
            c.z_score()
        );
    }
    for (m, why) in &report.skipped {
        println!("{m:<22} skipped: {why}");
    }
    if report.passed() {
        println!("cross-check passed ({} realizations)", n);
        Ok(0)
    } else {
        println!("cross-check FAILED");
        Ok(EXIT_CROSSCHECK)
    }
}
