//! Command-line driver: boresight optimization, capacity and outage
//! estimates, and figure reproduction as CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rasec::avg_secrecy::{avg_cs_mc, avg_cs_quad, optimize_alpha};
use rasec::config::ExperimentConfig;
use rasec::experiments::{run_figure, Figure, DEFAULT_CAPACITY_SAMPLES, DEFAULT_SOP_SAMPLES};
use rasec::geometry::{alpha_max, boresight_from_alpha, ScenarioWarning};
use rasec::los_solver::{gamma0, solve_near_optimal};
use rasec::outage::sop_mc;
use rasec::specfun::QuadratureSpec;
use rasec::Error;

/// Exit code for unreadable or invalid configuration.
const EXIT_CONFIG: u8 = 2;
/// Exit code for numeric non-convergence.
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rasec",
    version,
    about = "Rotatable-antenna secure link analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Override the config's random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the config's Monte Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Override the config's quadrature and line-search tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Mc,
    Quad,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the fading-averaged secrecy capacity over the adjustment factor.
    Optimize { config: PathBuf },
    /// Closed-form near-optimal boresight from the line-of-sight geometry.
    LosSolve { config: PathBuf },
    /// Average secrecy capacity at a fixed adjustment factor.
    AvgCapacity {
        config: PathBuf,
        /// Adjustment factor to evaluate at.
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Method::Quad)]
        method: Method,
    },
    /// Secrecy outage probability (closed form and simulation) at a target rate.
    Sop {
        config: PathBuf,
        /// Target secrecy rate, bps/Hz.
        #[arg(long)]
        rs: f64,
    },
    /// Reproduce a figure as CSV.
    Figure {
        /// One of: fig2 | fig3 | fig4 | fig5.
        figure: String,
        config: PathBuf,
        /// Output CSV path.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Parse a config and report the resolved scenario and derived quantities.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NonConvergent(_) => EXIT_NUMERIC,
                _ => EXIT_CONFIG,
            })
        }
    }
}

fn load_config(path: &Path, cli: &Cli) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read config '{}': {e}", path.display())))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(seed) = cli.seed {
        cfg.estimator.seed = seed;
    }
    if let Some(samples) = cli.samples {
        cfg.estimator.mc_samples = Some(samples);
    }
    if let Some(tol) = cli.tol {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(Error::Validation(format!("--tol must be > 0, got {tol}")));
        }
        cfg.estimator.quad_abs_tol = tol;
        cfg.estimator.quad_rel_tol = tol;
        cfg.estimator.tol_alpha = tol;
    }
    Ok(cfg)
}

fn quad_spec(cfg: &ExperimentConfig) -> QuadratureSpec {
    QuadratureSpec::default().with_tols(cfg.estimator.quad_abs_tol, cfg.estimator.quad_rel_tol)
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Optimize { config } => {
            let cfg = load_config(config, cli)?;
            let r = optimize_alpha(&cfg.scenario, cfg.estimator.tol_alpha, &quad_spec(&cfg))?;
            println!("alpha_opt        = {:.6}", r.alpha_opt);
            println!("avg_secrecy_capacity = {:.9} bps/Hz", r.value.value);
            println!("iterations       = {}", r.iterations);
            println!("bracket_width    = {:.3e}", r.bracket_width);
            let b = boresight_from_alpha(&cfg.scenario, r.alpha_opt)?;
            println!(
                "deflection_angles = ({:.4}, {:.4}) deg",
                b.angles.theta_z.to_degrees(),
                b.angles.theta_a.to_degrees()
            );
            Ok(())
        }
        Command::LosSolve { config } => {
            let cfg = load_config(config, cli)?;
            let sol = solve_near_optimal(&cfg.scenario)?;
            println!("branch           = {:?}", sol.branch);
            println!("alpha_opt        = {:.6}", sol.alpha_opt);
            println!("alpha_max        = {:.6}", alpha_max(&cfg.scenario)?);
            match sol.gamma0 {
                Some(g) => {
                    println!(
                        "gamma0           = {:.6e} (snr = {:.6e})",
                        g,
                        cfg.scenario.snr()
                    )
                }
                None => println!("gamma0           = undefined (collinear terminals)"),
            }
            println!("cs_los           = {:.9} bps/Hz", sol.capacity);
            if let Ok(b) = boresight_from_alpha(&cfg.scenario, sol.alpha_opt) {
                println!(
                    "deflection_angles = ({:.4}, {:.4}) deg",
                    b.angles.theta_z.to_degrees(),
                    b.angles.theta_a.to_degrees()
                );
            }
            Ok(())
        }
        Command::AvgCapacity {
            config,
            alpha,
            method,
        } => {
            let cfg = load_config(config, cli)?;
            match method {
                Method::Quad => {
                    let est = avg_cs_quad(&cfg.scenario, *alpha, &quad_spec(&cfg))?;
                    println!(
                        "avg_secrecy_capacity = {:.9} bps/Hz (quadrature)",
                        est.value
                    );
                }
                Method::Mc => {
                    let n = cfg.estimator.mc_samples.unwrap_or(DEFAULT_CAPACITY_SAMPLES);
                    let est = avg_cs_mc(&cfg.scenario, *alpha, n, cfg.estimator.seed)?;
                    println!(
                        "avg_secrecy_capacity = {:.9} +/- {:.3e} bps/Hz ({} samples)",
                        est.value, est.std_error, n
                    );
                }
            }
            Ok(())
        }
        Command::Sop { config, rs } => {
            let cfg = load_config(config, cli)?;
            let sol = solve_near_optimal(&cfg.scenario)?;
            let n = cfg.estimator.mc_samples.unwrap_or(DEFAULT_SOP_SAMPLES);
            let point = sop_mc(&cfg.scenario, sol.alpha_opt, *rs, n, cfg.estimator.seed)?;
            println!("alpha (near-optimal) = {:.6}", sol.alpha_opt);
            match point.sop_theory {
                Some(t) => println!("sop_theory       = {:.6e}", t),
                None => println!("sop_theory       = undefined (collinear terminals)"),
            }
            println!(
                "sop_mc           = {:.6e} +/- {:.3e} ({} samples)",
                point.sop_mc, point.ci95_halfwidth, n
            );
            Ok(())
        }
        Command::Figure {
            figure,
            config,
            output,
        } => {
            let cfg = load_config(config, cli)?;
            let fig: Figure = figure.parse()?;
            let csv = run_figure(fig, &cfg)?;
            std::fs::write(output, csv).map_err(|e| {
                Error::Validation(format!("cannot write '{}': {e}", output.display()))
            })?;
            println!("wrote {}", output.display());
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = load_config(config, cli)?;
            print!("{}", cfg.resolved_text());
            println!("# derived");
            println!("# alpha_max = {:.6}", alpha_max(&cfg.scenario)?);
            println!("# snr = {:.6e}", cfg.scenario.snr());
            match gamma0(&cfg.scenario) {
                Ok(g) => println!("# gamma0 = {:.6e}", g),
                Err(_) => println!("# gamma0 = undefined (collinear terminals)"),
            }
            for w in &cfg.warnings {
                match w {
                    ScenarioWarning::EavesdropperBehindBoresightFamily => println!(
                        "# warning: eavesdropper sits behind every boresight with alpha >= 1; \
                         its gain clamps to zero and the adjustment range collapses to alpha = 1"
                    ),
                }
            }
            println!("# ok");
            Ok(())
        }
    }
}
