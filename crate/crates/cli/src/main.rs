mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use gaussian_relay::rates::CutSetVariant;
use gaussian_relay::search::{RateReport, SearchConfig};
use gaussian_relay::sweep::{self, Powers, SweepRow};
use gaussian_relay::verify::{self, Suite, VerifyConfig};

use config::FileConfig;

/// Achievable rates of the Gaussian relay channel under DF, CF, their
/// superposition, broadcast over DF, and the cut-set bound.
#[derive(Parser, Debug)]
#[command(name = "gaussian-relay", version)]
struct Cli {
    /// Settings file with `key = value` lines; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimized rates at one relay position.
    Rates {
        /// Normalized source-relay distance, in (0, 1). Default 0.5.
        #[arg(long)]
        d: Option<f64>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Optimized rates over a grid of relay positions, as CSV.
    Sweep {
        /// First distance. Default 0.05.
        #[arg(long)]
        d_min: Option<f64>,
        /// Last distance. Default 0.95.
        #[arg(long)]
        d_max: Option<f64>,
        /// Number of grid points, at least 2. Default 46.
        #[arg(long)]
        steps: Option<usize>,
        /// Output file. Default standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run the verification suite. Exit status 0 only if every check passes.
    Verify {
        /// Which check to run, or `all`. Default all.
        #[arg(long)]
        suite: Option<String>,
        /// Seed for the randomized checks. Default 1.
        #[arg(long)]
        seed: Option<u64>,
        /// Random draws per randomized check. Default 1000.
        #[arg(long)]
        draws: Option<usize>,
        /// Also write the one-line-per-check summary here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// Source power. Default 5.
    #[arg(long)]
    p1: Option<f64>,
    /// Relay power. Default 5.
    #[arg(long)]
    p2: Option<f64>,
    /// Noise power at the relay. Default 1.
    #[arg(long)]
    n1: Option<f64>,
    /// Noise power at the destination. Default 1.
    #[arg(long)]
    n2: Option<f64>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Grid points per search axis, at least 3. Default 101.
    #[arg(long)]
    grid: Option<usize>,
    /// Search convergence tolerance in bits. Default 1e-7.
    #[arg(long)]
    tol: Option<f64>,
    /// Iterations of each one-dimensional refinement. Default 60.
    #[arg(long)]
    refine_iters: Option<usize>,
    /// Use the broadcast cut I(X1; Y2, Y3) without conditioning on X2.
    #[arg(long)]
    cutset_literal: bool,
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Flag, else config file, else default.
fn pick<T>(flag: Option<T>, file: &FileConfig, key: &str, default: T) -> Result<T, Failure>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(v),
        None => Ok(file.get(key).map_err(Failure::Usage)?.unwrap_or(default)),
    }
}

fn powers(args: &ChannelArgs, file: &FileConfig) -> Result<Powers, Failure> {
    let p = Powers {
        p1: pick(args.p1, file, "p1", 5.0)?,
        p2: pick(args.p2, file, "p2", 5.0)?,
        n1: pick(args.n1, file, "n1", 1.0)?,
        n2: pick(args.n2, file, "n2", 1.0)?,
    };
    p.channel(0.5).map_err(usage)?;
    Ok(p)
}

fn search_config(args: &SearchArgs, file: &FileConfig) -> Result<SearchConfig, Failure> {
    let base = SearchConfig::default();
    let literal = args.cutset_literal || pick(None, file, "cutset-literal", false)?;
    let cfg = SearchConfig {
        grid_steps: pick(args.grid, file, "grid", base.grid_steps)?,
        tol: pick(args.tol, file, "tol", base.tol)?,
        refine_iters: pick(args.refine_iters, file, "refine-iters", base.refine_iters)?,
        cutset: if literal {
            CutSetVariant::Literal
        } else {
            CutSetVariant::Conditioned
        },
        ..base
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn print_report(out: &mut impl Write, d: f64, p: &Powers, r: &RateReport) -> io::Result<()> {
    writeln!(
        out,
        "channel  d={d}  P1={}  P2={}  N1={}  N2={}",
        p.p1, p.p2, p.n1, p.n2
    )?;
    writeln!(out, "{:<6} {:<22} argmax", "scheme", "rate (bits/use)")?;
    let sf = &r.arg_sf;
    let rows = [
        ("DF", r.r_df, format!("rho={}", r.arg_df)),
        ("CF", r.r_cf, format!("delta={}", r.arg_cf)),
        (
            "SF",
            r.r_sf,
            format!(
                "alpha={} beta={} gamma={} delta'={}",
                sf.alpha(),
                sf.beta(),
                sf.gamma(),
                sf.delta_prime()
            ),
        ),
        (
            "BDF",
            r.r_bdf,
            format!("theta_u={} theta_2={}", r.arg_bdf.theta_u(), r.arg_bdf.theta_2()),
        ),
        (
            "CS",
            r.r_cs,
            format!(
                "rho={} ({})",
                r.arg_cs,
                match r.cutset {
                    CutSetVariant::Conditioned => "conditioned on X2",
                    CutSetVariant::Literal => "unconditioned",
                }
            ),
        ),
    ];
    for (name, rate, arg) in rows {
        writeln!(out, "{name:<6} {rate:<22} {arg}")?;
    }
    writeln!(out, "SF - max(DF, CF) = {:e}", r.sf_excess)
}

fn warn_excess(d: f64, r: &RateReport, cfg: &SearchConfig) {
    if !r.sf_within_max(cfg.tol) {
        eprintln!(
            "warning: at d={d} R_SF exceeds max(R_DF, R_CF) by {:e} bits",
            r.sf_excess
        );
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::Usage)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Rates { d, channel, search } => {
            let d = pick(d, &file, "d", 0.5)?;
            let p = powers(&channel, &file)?;
            let cfg = search_config(&search, &file)?;
            p.channel(d).map_err(usage)?;
            let (_, r) = sweep::run_point(d, &p, &cfg).map_err(anyhow::Error::from)?;
            warn_excess(d, &r, &cfg);
            let stdout = io::stdout();
            print_report(&mut stdout.lock(), d, &p, &r).context("writing report")?;
            Ok(true)
        }
        Command::Sweep {
            d_min,
            d_max,
            steps,
            out,
            channel,
            search,
        } => {
            let d_min = pick(d_min, &file, "d-min", 0.05)?;
            let d_max = pick(d_max, &file, "d-max", 0.95)?;
            let steps = pick(steps, &file, "steps", 46)?;
            let out = out.or(file.get::<PathBuf>("out").map_err(Failure::Usage)?);
            let p = powers(&channel, &file)?;
            let cfg = search_config(&search, &file)?;
            let grid = sweep::distance_grid(d_min, d_max, steps).map_err(usage)?;
            // Open the destination first so a bad path fails before the work.
            let sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(create(path)?),
                None => Box::new(io::stdout().lock()),
            };
            let results = sweep::run_sweep(&grid, &p, &cfg).map_err(anyhow::Error::from)?;
            for (row, r) in &results {
                warn_excess(row.d, r, &cfg);
            }
            let rows: Vec<SweepRow> = results.into_iter().map(|(row, _)| row).collect();
            sweep::write_csv(sink, &rows)
                .map_err(anyhow::Error::from)
                .context("writing CSV")?;
            Ok(true)
        }
        Command::Verify {
            suite,
            seed,
            draws,
            out,
            search,
        } => {
            let suite: Suite = pick(suite, &file, "suite", "all".to_string())?
                .parse()
                .map_err(usage)?;
            let base = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed: pick(seed, &file, "seed", base.seed)?,
                draws: pick(draws, &file, "draws", base.draws)?,
                search: search_config(&search, &file)?,
                ..base
            };
            if cfg.draws == 0 {
                return Err(Failure::Usage("draws must be at least 1".into()));
            }
            let out = out.or(file.get::<PathBuf>("out").map_err(Failure::Usage)?);
            let mut sink = out.as_deref().map(create).transpose()?;
            let results = verify::run_suite(suite, &cfg);
            let mut stdout = io::stdout().lock();
            let report = verify::human_report(&results);
            stdout.write_all(report.as_bytes()).context("writing report")?;
            for r in &results {
                writeln!(stdout, "{}", r.summary_line()).context("writing summary")?;
                if let Some(f) = sink.as_mut() {
                    writeln!(f, "{}", r.summary_line()).context("writing summary file")?;
                }
            }
            if let Some(mut f) = sink {
                f.flush().context("writing summary file")?;
            }
            Ok(verify::all_passed(&results))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
