use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gwtsallis::config::{epi_q_grid, linspace, parse_grid};
use gwtsallis::grids;
use gwtsallis::measures::f_q;
use gwtsallis::sweep::{
    check_state, run_oracle_certification, run_sweep, sweep_csv_row, CertificationPlan, SampleInfo, ORACLE_CSV_HEADER,
    SWEEP_CSV_HEADER,
};
use gwtsallis::{GwState, SweepConfig};
use log::info;

#[derive(Parser)]
#[command(
    name = "gwtsallis",
    version,
    about = "Entanglement polygon checks for generalized W-class states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every inequality check on one state file.
    Check {
        /// GW state file: `n d` header, then one row of re/im pairs per party.
        state: PathBuf,
        #[command(flatten)]
        opts: SweepArgs,
    },
    /// Check the inequalities on seeded random GW ensembles.
    Sweep {
        #[command(flatten)]
        opts: SweepArgs,
    },
    /// Certify closed-form GW entanglement against the convex-roof search.
    Oracle {
        #[command(flatten)]
        opts: SweepArgs,
        /// Tsallis q values to certify (comma list or `a..b:N`).
        #[arg(long)]
        oracle_q: Option<String>,
        /// Random restarts per roof search.
        #[arg(long)]
        restarts: Option<usize>,
        /// Maximum sweeps per restart.
        #[arg(long)]
        iters: Option<usize>,
        /// Skip the concurrence roof.
        #[arg(long)]
        no_concurrence: bool,
    },
    /// Grid checks of f_q and the beta-power bound; optional f_q table.
    Fq {
        /// Write a `q,x,f_q` table here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// q values for the table (default: 25-point polygon window grid).
        #[arg(long)]
        q_grid: Option<String>,
        /// Number of x points in [0, 1] for the table.
        #[arg(long, default_value_t = 101)]
        x_points: usize,
    },
}

#[derive(Args, Default)]
struct SweepArgs {
    /// `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Comma list, `a..b:N`, or `epi:N`.
    #[arg(long)]
    q_grid: Option<String>,
    #[arg(long)]
    beta_grid: Option<String>,
    /// Output CSV path (stdout when omitted, except for `sweep`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow q outside the proven window; such rows are flagged, never failures.
    #[arg(long)]
    exploratory: bool,
    #[arg(long)]
    tol: Option<f64>,
    /// Party-count range, e.g. `3..6`.
    #[arg(long)]
    n_range: Option<String>,
    /// Local-dimension range, e.g. `2..4`.
    #[arg(long)]
    d_range: Option<String>,
    /// Comma list of check names.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    max_blocks: Option<usize>,
    /// `full` or `all`.
    #[arg(long)]
    partition_subsets: Option<String>,
}

impl SweepArgs {
    fn config(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                SweepConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => SweepConfig::default(),
        };
        let overrides = [
            ("seed", self.seed.map(|v| v.to_string())),
            ("samples", self.samples.map(|v| v.to_string())),
            ("q_grid", self.q_grid.clone()),
            ("beta_grid", self.beta_grid.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("exploratory", self.exploratory.then(|| "true".to_string())),
            ("tol", self.tol.map(|v| v.to_string())),
            ("n_range", self.n_range.clone()),
            ("d_range", self.d_range.clone()),
            ("checks", self.checks.clone()),
            ("max_blocks", self.max_blocks.map(|v| v.to_string())),
            ("partition_subsets", self.partition_subsets.clone()),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                cfg.set(key, &value)
                    .with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// CSV destination: a file when given, stdout otherwise. Summaries go to the
/// other stream so stdout stays machine-readable.
fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn summary_sink(csv_to_stdout: bool) -> Box<dyn Write> {
    if csv_to_stdout {
        Box::new(io::stderr())
    } else {
        Box::new(io::stdout())
    }
}

fn cmd_check(state: &Path, opts: &SweepArgs) -> Result<bool> {
    let cfg = opts.config()?;
    let text = fs::read_to_string(state).with_context(|| format!("reading {}", state.display()))?;
    let g = GwState::parse(&text).with_context(|| format!("parsing {}", state.display()))?;
    info!("checking n={} d={} state from {}", g.n(), g.d(), state.display());
    let (reports, summary) = check_state(&g, &cfg)?;

    let mut out = open_output(cfg.out.as_deref())?;
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    let sample = SampleInfo {
        sample: 0,
        n: g.n(),
        d: g.d(),
    };
    for r in &reports {
        writeln!(out, "{}", sweep_csv_row(sample, r))?;
    }
    out.flush()?;
    writeln!(summary_sink(cfg.out.is_none()), "{summary}")?;
    Ok(!summary.has_violations())
}

fn cmd_sweep(opts: &SweepArgs) -> Result<bool> {
    let cfg = opts.config()?;
    let Some(path) = cfg.out.clone() else {
        bail!("sweep needs --out or `out = ...` in the config");
    };
    info!("sweeping {} samples with seed {}", cfg.samples, cfg.seed);
    let summary = run_sweep(&cfg).with_context(|| format!("writing {}", path.display()))?;
    info!("wrote {}", path.display());
    println!("{summary}");
    Ok(!summary.has_violations())
}

fn cmd_oracle(
    opts: &SweepArgs,
    oracle_q: Option<&str>,
    restarts: Option<usize>,
    iters: Option<usize>,
    no_concurrence: bool,
) -> Result<bool> {
    let mut cfg = opts.config()?;
    if let Some(q) = oracle_q {
        cfg.oracle_q = parse_grid(q)?;
    }
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    if let Some(i) = iters {
        cfg.iters = i;
    }
    cfg.validate()?;
    let plan = CertificationPlan {
        concurrence: !no_concurrence,
        tsallis_q: cfg.oracle_q.clone(),
    };
    info!(
        "certifying {} samples, {} restarts per search",
        cfg.samples, cfg.restarts
    );

    let mut out = open_output(cfg.out.as_deref())?;
    writeln!(out, "{ORACLE_CSV_HEADER}")?;
    let summary = run_oracle_certification(&cfg, &plan, |row| {
        writeln!(out, "{}", row.csv())?;
        Ok(())
    })?;
    out.flush()?;
    writeln!(summary_sink(cfg.out.is_none()), "{summary}")?;
    Ok(summary.failures == 0)
}

fn cmd_fq(out: Option<&Path>, q_grid: Option<&str>, x_points: usize) -> Result<bool> {
    let suite = grids::standard_suite()?;
    let all_passed = suite.iter().all(|c| c.passed());
    if let Some(path) = out {
        let qs = match q_grid {
            Some(text) => parse_grid(text)?,
            None => epi_q_grid(25),
        };
        if x_points < 2 {
            bail!("--x-points must be at least 2");
        }
        let mut w = open_output(Some(path))?;
        writeln!(w, "q,x,f_q")?;
        for &q in &qs {
            for x in linspace(0.0, 1.0, x_points) {
                writeln!(w, "{q},{x},{}", f_q(x, q)?)?;
            }
        }
        w.flush()?;
        info!("wrote {}", path.display());
    }
    for check in &suite {
        println!("{check}");
    }
    Ok(all_passed)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Check { state, opts } => cmd_check(state, opts),
        Command::Sweep { opts } => cmd_sweep(opts),
        Command::Oracle {
            opts,
            oracle_q,
            restarts,
            iters,
            no_concurrence,
        } => cmd_oracle(opts, oracle_q.as_deref(), *restarts, *iters, *no_concurrence),
        Command::Fq { out, q_grid, x_points } => cmd_fq(out.as_deref(), q_grid.as_deref(), *x_points),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
