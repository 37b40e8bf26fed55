use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sawtooth_lab::cli::{
    cmd_build_sawtooth, cmd_classify_drift, cmd_constants, cmd_decompose, cmd_estimate_measure,
    cmd_verify_claims, RunConfig,
};

/// Dyadic/Whitney decompositions, sawtooth domains and Monte Carlo
/// elliptic-measure verification for singular drift operators.
#[derive(Parser)]
#[command(name = "sawtooth-lab", version)]
struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Boundary dimension of the ambient ball (2 or 3).
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Finest dyadic generation.
    #[arg(long = "kmax", global = true)]
    k_max: Option<u32>,
    /// Drift family: zero | uniform-small:EPS | cone:AMP:k,j;... | file:PATH.
    #[arg(long, global = true)]
    drift: Option<String>,
    /// ASA smallness threshold ε.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Ampleness target η.
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Declared pointwise drift bound M.
    #[arg(long = "m-bound", global = true)]
    m_bound: Option<f64>,
    /// Monte Carlo walkers per estimate.
    #[arg(long, global = true)]
    walkers: Option<u64>,
    /// Base RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread cap (0 = library default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory root (default: $SAWTOOTH_LAB_OUT or ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the dyadic grid and Whitney refinement; verify grid axioms.
    Decompose,
    /// Run the ASA test over every refined box of the grid.
    ClassifyDrift,
    /// Run the stopping-time construction to an η-ample sawtooth.
    BuildSawtooth,
    /// Estimate the elliptic measure from the configured pole.
    EstimateMeasure {
        /// Pole as "r,theta".
        #[arg(long)]
        pole: Option<String>,
    },
    /// Run the selected claim checks and emit reports and plots.
    VerifyClaims {
        /// Comma-separated subset: bourgain,claim1,holder,criterion,bmo,ainfty.
        #[arg(long)]
        checks: Option<String>,
    },
    /// Print the derived construction constants.
    Constants,
}

fn resolve(cli: &Cli) -> Result<RunConfig, sawtooth_lab::cli::CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_toml_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.dim {
        cfg.dim = v;
    }
    if let Some(v) = cli.k_max {
        cfg.k_max = v;
    }
    if let Some(v) = &cli.drift {
        cfg.drift = v.clone();
    }
    if let Some(v) = cli.eps {
        cfg.eps = v;
    }
    if let Some(v) = cli.eta {
        cfg.eta = v;
    }
    if let Some(v) = cli.m_bound {
        cfg.m_bound = v;
    }
    if let Some(v) = cli.walkers {
        cfg.walkers = v;
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.threads {
        cfg.threads = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = v.clone();
    }
    match &cli.cmd {
        Cmd::EstimateMeasure { pole: Some(p) } => {
            let (r, t) = p.split_once(',').ok_or_else(|| {
                sawtooth_lab::cli::CliError::Input(format!("pole must be r,theta: {p:?}"))
            })?;
            cfg.pole = [
                r.trim().parse().map_err(|e| {
                    sawtooth_lab::cli::CliError::Input(format!("pole radius: {e}"))
                })?,
                t.trim().parse().map_err(|e| {
                    sawtooth_lab::cli::CliError::Input(format!("pole angle: {e}"))
                })?,
            ];
        }
        Cmd::VerifyClaims { checks: Some(c) } => {
            cfg.checks = c.split(',').map(|s| s.trim().to_string()).collect();
        }
        _ => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = resolve(&cli).and_then(|cfg| match &cli.cmd {
        Cmd::Decompose => cmd_decompose(&cfg),
        Cmd::ClassifyDrift => cmd_classify_drift(&cfg),
        Cmd::BuildSawtooth => cmd_build_sawtooth(&cfg),
        Cmd::EstimateMeasure { .. } => cmd_estimate_measure(&cfg),
        Cmd::VerifyClaims { .. } => cmd_verify_claims(&cfg),
        Cmd::Constants => cmd_constants(&cfg),
    });
    match run {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
