use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weakest_link::cli::{self, RunConfig};
use weakest_link::game::{check_nash, StrategyProfile};
use weakest_link::topology::{self, Scenario};

#[derive(Parser)]
#[command(
    name = "weakest-link",
    version,
    about = "Cooperative packet forwarding simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset experiment or a single configured run.
    Simulate(SimulateArgs),
    /// Check whether a uniform forwarding profile is a Nash equilibrium.
    CheckNash(NashArgs),
    /// Validate a config file and the scenario it generates.
    Validate(ValidateArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["preset", "config"])))]
struct SimulateArgs {
    /// One of: ring-fig2, random-fig3, ring-table1, random-table2, ring-table3, random-table4.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the run seed of every run.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of steps of every run.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write each generated scenario as `<prefix>-scenario.toml`.
    #[arg(long)]
    save_scenario: bool,
}

#[derive(Args)]
struct NashArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    grid: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Profile probability; defaults to `learn.init_alpha`.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["config", "scenario"])))]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// A scenario file written by `simulate --save-scenario`.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Simulate(args) => simulate(args),
        Command::CheckNash(args) => nash(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn simulate(args: SimulateArgs) -> CmdResult {
    let mut configs: Vec<RunConfig> = match (&args.preset, &args.config) {
        (Some(name), _) => cli::expand_preset(name).map_err(|e| e.to_string())?,
        (None, Some(path)) => vec![cli::parse_config(path).map_err(|e| e.to_string())?],
        (None, None) => unreachable!("clap requires a source"),
    };
    for c in &mut configs {
        if let Some(seed) = args.seed {
            c.seed = seed;
        }
        if let Some(steps) = args.steps {
            c.steps = steps;
        }
    }
    let mut failed = false;
    for (config, result) in configs.iter().zip(cli::run_experiment(
        &configs,
        &args.out,
        args.jobs,
        args.save_scenario,
    )) {
        match result {
            Ok(report) => {
                let last = report.series.last().expect("nonempty series");
                let fpd = last
                    .fwd_per_dlv
                    .map(|r| format!("{r:.3}"))
                    .unwrap_or_else(|| "n/a".to_string());
                println!(
                    "{:<40} {:<26} alpha={:.4} pdr={:.4} fwd/dlv={} eff={:.4}",
                    config.output,
                    config.strategy.label(),
                    last.avg_alpha,
                    last.cum_pdr,
                    fpd,
                    last.avg_efficiency
                );
            }
            Err(e) => {
                eprintln!("error: run '{}': {e}", config.output);
                failed = true;
            }
        }
    }
    Ok(if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn nash(args: NashArgs) -> CmdResult {
    let config = cli::parse_config(&args.config).map_err(|e| e.to_string())?;
    let scenario = config.scenario.build().map_err(|e| e.to_string())?;
    let params = config.game_params().map_err(|e| e.to_string())?;
    let alpha = args.alpha.unwrap_or(config.init_alpha);
    let profile = StrategyProfile::uniform(scenario.num_nodes, alpha).map_err(|e| e.to_string())?;
    let report =
        check_nash(&scenario, &profile, &params, args.grid, args.tol).map_err(|e| e.to_string())?;
    if report.is_nash {
        println!("alpha={alpha}: Nash equilibrium on grid step {}", args.grid);
        return Ok(ExitCode::SUCCESS);
    }
    println!(
        "alpha={alpha}: not a Nash equilibrium, {} node(s) can improve",
        report.best_deviations.len()
    );
    for (node, dev) in &report.best_deviations {
        println!("  node {node}: deviate to {} gains {}", dev.alpha, dev.gain);
    }
    Ok(ExitCode::from(2))
}

fn validate(args: ValidateArgs) -> CmdResult {
    let scenario: Scenario = match (&args.config, &args.scenario) {
        (Some(path), _) => {
            let config = cli::parse_config(path).map_err(|e| e.to_string())?;
            config.scenario.build().map_err(|e| e.to_string())?
        }
        (None, Some(path)) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Scenario::from_text(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => unreachable!("clap requires an input"),
    };
    let violations = topology::validate(&scenario);
    if violations.is_empty() {
        println!(
            "ok: {} nodes, {} routes, mean forwarders {:.3}",
            scenario.num_nodes,
            scenario.routes.len(),
            scenario.mean_forwarders()
        );
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        println!("{v}");
    }
    Ok(ExitCode::FAILURE)
}
