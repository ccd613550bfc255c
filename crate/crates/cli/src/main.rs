//! `entlat`: ensemble scans of a disordered qubit lattice from the command
//! line.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entlat_core::ensemble::{scan_grid, ScanResult};
use entlat_core::selftest;

use config::{ConfigError, Settings};

#[derive(Parser)]
#[command(name = "entlat", version, about = "Entanglement dynamics of disordered qubit lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an ensemble scan described by a configuration file.
    Run(Box<RunArgs>),
    /// Run the oracle suite and report pass/fail per check.
    Verify {
        /// Run the oracle suite (also the default).
        #[arg(long = "self-test")]
        self_test: bool,
        /// Largest lattice used by the suite.
        #[arg(long = "n-cap", default_value_t = 10)]
        n_cap: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

enum Failure {
    Config(ConfigError),
    Runtime(String),
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let file = match &args.config {
        Some(path) => Some(config::load(path).map_err(Failure::Config)?),
        None => None,
    };
    let plan = config::resolve(file, args.settings, std::env::var("ENTLAT_WORKERS").ok()).map_err(Failure::Config)?;
    log::info!(
        "preset {}: n {:?}, gamma {:?}, {} J values, N_r {:?}",
        plan.preset,
        plan.n_values,
        plan.gammas,
        plan.j_values.len(),
        plan.n_realizations
    );

    let mut merged: Option<ScanResult> = None;
    for (&n, &nr) in plan.n_values.iter().zip(&plan.n_realizations) {
        let mut c = plan.base.clone();
        c.params.n = n;
        c.params.cols = n / c.params.rows;
        c.n_realizations = nr;
        let part = scan_grid(&c, &[n], &plan.gammas, &plan.j_values).map_err(|e| Failure::Runtime(e.to_string()))?;
        log::info!("n = {n}: {} points in {:.1} s", part.points.len(), part.wall_time_s);
        match merged.as_mut() {
            None => merged = Some(part),
            Some(m) => {
                m.points.extend(part.points);
                m.wall_time_s += part.wall_time_s;
            }
        }
    }
    let mut scan = merged.ok_or_else(|| Failure::Runtime("nothing to run".into()))?;
    scan.base = plan.base.clone();
    scan.tc_mode = plan.tc_mode;
    scan.attach_standard_fits(&plan.windows);

    let io = |e: std::io::Error| Failure::Runtime(format!("{}: {e}", plan.out.display()));
    scan.write_dir(&plan.out).map_err(|e| Failure::Runtime(format!("{}: {e}", plan.out.display())))?;
    let echo = toml::to_string(&plan.echo()).map_err(|e| Failure::Runtime(e.to_string()))?;
    std::fs::write(plan.out.join("config.toml"), echo).map_err(io)?;

    println!("{:>10} {:>3} {:>5} {:>10} {:>10} {:>12} stable", "J", "n", "gamma", "C_inf", "stderr", "t_c");
    for p in &scan.points {
        let tc = p.t_c(scan.tc_mode).map_or("-".to_string(), |t| format!("{t:.4e}"));
        let stable = p.result.stable().map_or("-", |s| if s { "yes" } else { "no" });
        println!(
            "{:>10.3e} {:>3} {:>5} {:>10.4} {:>10.4} {:>12} {stable}",
            p.j, p.n, p.gamma, p.result.c_inf, p.result.c_inf_stderr, tc
        );
    }
    for (name, fit) in &scan.fits {
        let params: Vec<String> =
            fit.parameters.iter().map(|q| format!("{} = {:.4e} ± {:.1e}", q.name, q.value, q.stderr)).collect();
        println!("fit {name}: {}", params.join(", "));
    }
    println!("wrote {}", plan.out.display());
    Ok(())
}

fn verify(n_cap: usize) -> ExitCode {
    let checks = selftest::run(n_cap);
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { n_cap, .. } => verify(n_cap),
        Command::Run(args) => match run(*args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(Failure::Config(e)) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
            Err(Failure::Runtime(e)) => {
                eprintln!("error: run failed: {e}");
                ExitCode::from(1)
            }
        },
    }
}
