//! `lpamp`: runs one experiment and writes its results as CSV.
//!
//! Exit codes: 0 success, 2 invalid arguments or config, 3 numerical failure, 4 I/O error.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "lpamp", version, about = "lp-AMP experiments and state-evolution analysis")]
struct Cli {
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Proximal operator of the lp penalty.
    Prox {
        #[command(subcommand)]
        cmd: ProxCmd,
    },
    /// Approximate message passing on a generated or supplied instance.
    Amp {
        #[command(subcommand)]
        cmd: AmpCmd,
    },
    /// State evolution.
    Se {
        #[command(subcommand)]
        cmd: SeCmd,
    },
    /// Phase-transition curves.
    Pt {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Noise-sensitivity curves.
    Noise {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// SURE curves at one AMP iteration.
    Sure {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Monte Carlo AMP against state evolution.
    Mc {
        #[command(subcommand)]
        cmd: McCmd,
    },
}

#[derive(Subcommand)]
enum ProxCmd {
    /// Evaluate η_p, its derivatives and the smoothed operator over a grid.
    Eval(Common),
}

#[derive(Subcommand)]
enum AmpCmd {
    /// Run AMP and print one row per iteration.
    Run(Common),
}

#[derive(Subcommand)]
enum SeCmd {
    /// Iterate the state-evolution map.
    Run(Common),
    /// Locate and classify fixed points.
    FixedPoints(Common),
}

#[derive(Subcommand)]
enum CurveCmd {
    Curve(Common),
}

#[derive(Subcommand)]
enum McCmd {
    Compare(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment config; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for generated instances.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Gauss-Legendre order for state-evolution integrals.
    #[arg(long)]
    quad_order: Option<usize>,
    /// Print the resolved config as JSON instead of running it.
    #[arg(long)]
    print_config: bool,
}

impl Group {
    fn resolve(self) -> (&'static str, Common) {
        match self {
            Group::Prox { cmd: ProxCmd::Eval(c) } => ("prox-eval", c),
            Group::Amp { cmd: AmpCmd::Run(c) } => ("amp-run", c),
            Group::Se { cmd: SeCmd::Run(c) } => ("se-run", c),
            Group::Se { cmd: SeCmd::FixedPoints(c) } => ("se-fixed-points", c),
            Group::Pt { cmd: CurveCmd::Curve(c) } => ("pt-curve", c),
            Group::Noise { cmd: CurveCmd::Curve(c) } => ("noise-curve", c),
            Group::Sure { cmd: CurveCmd::Curve(c) } => ("sure-curve", c),
            Group::Mc { cmd: McCmd::Compare(c) } => ("mc-compare", c),
        }
    }
}

fn build_config(kind: &str, args: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(Experiment::default_for(kind).expect("known kind")),
    };
    if cfg.experiment.kind() != kind {
        return Err(CliError::Config(format!(
            "config kind \"{}\" does not match subcommand \"{kind}\"",
            cfg.experiment.kind()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.set_seed(seed);
    }
    if args.out.is_some() {
        cfg.out.clone_from(&args.out);
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if args.quad_order.is_some() {
        cfg.quad_order = args.quad_order;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(kind: &str, args: &Common) -> Result<(), CliError> {
    let cfg = build_config(kind, args)?;
    if args.print_config {
        println!("{}", cfg.to_json());
        return Ok(());
    }
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    commands::run(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.group.resolve();
    match execute(kind, &args) {
        Ok(()) | Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
