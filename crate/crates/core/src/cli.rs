//! Run configuration, experiment presets and file outputs.
//!
//! Config files are flat `key = value` lines with dotted section keys:
//!
//! ```text
//! scenario.kind = "ring"        # ring | random
//! scenario.nodes = 25
//! scenario.hops = 6             # ring only
//! scenario.pairs = 1000         # random only
//! scenario.min_forwarders = 3   # random only
//! scenario.max_forwarders = 6   # random only
//! scenario.seed = 42            # random only
//! game.F = 3.0                  # forwarding cost
//! game.g = 1.0                  # gain per successful transmission
//! learn.lambda = 0.01
//! learn.epsilon = 0.05
//! learn.T = 3                   # punishment duration in steps
//! learn.init_alpha = 0.0
//! learn.exempt_banking = false
//! learn.per_route_signal = true
//! run.strategy = "weakest-link" # weakest-link | han-style | pandana-style
//! run.steps = 2000
//! run.seed = 1
//! run.output = "run"            # output file prefix
//! ```
//!
//! Every key is optional and defaults to the values shown, except that
//! `scenario.nodes` defaults to 100 for random scenarios. Unknown keys are
//! rejected.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::baselines::StrategyKind;
use crate::engine::{self, LearningConfig};
use crate::game::GameParams;
use crate::metrics::MetricsSeries;
use crate::topology::{self, ForwarderCounts, Scenario, ScenarioKind};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown preset '{0}' (expected one of: {list})", list = PRESET_NAMES.join(", "))]
    UnknownPreset(String),
    #[error(transparent)]
    Model(#[from] crate::error::Error),
}

fn io_error(path: &Path, source: std::io::Error) -> ConfigError {
    ConfigError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioSpec {
    Ring {
        nodes: usize,
        hops: usize,
    },
    Random {
        nodes: usize,
        pairs: usize,
        min_forwarders: usize,
        max_forwarders: usize,
        seed: u64,
    },
}

impl ScenarioSpec {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            ScenarioSpec::Ring { .. } => ScenarioKind::Ring,
            ScenarioSpec::Random { .. } => ScenarioKind::Random,
        }
    }

    pub fn build(&self) -> crate::Result<Scenario> {
        match *self {
            ScenarioSpec::Ring { nodes, hops } => topology::generate_ring(nodes, hops),
            ScenarioSpec::Random {
                nodes,
                pairs,
                min_forwarders,
                max_forwarders,
                seed,
            } => topology::generate_random(
                nodes,
                pairs,
                &ForwarderCounts::Uniform {
                    min: min_forwarders,
                    max: max_forwarders,
                },
                seed,
            ),
        }
    }

    fn ring_default() -> Self {
        ScenarioSpec::Ring { nodes: 25, hops: 6 }
    }

    fn random_default() -> Self {
        ScenarioSpec::Random {
            nodes: 100,
            pairs: 1000,
            min_forwarders: 3,
            max_forwarders: 6,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    pub forwarding_cost: f64,
    pub gain_increment: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub punishment_steps: u32,
    pub init_alpha: f64,
    pub exempt_banking: bool,
    pub per_route_signal: bool,
    pub strategy: StrategyKind,
    pub steps: u64,
    pub seed: u64,
    pub output: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: ScenarioSpec::ring_default(),
            forwarding_cost: 3.0,
            gain_increment: 1.0,
            lambda: 0.01,
            epsilon: 0.05,
            punishment_steps: 3,
            init_alpha: 0.0,
            exempt_banking: false,
            per_route_signal: true,
            strategy: StrategyKind::WeakestLink,
            steps: 2000,
            seed: 1,
            output: "run".to_string(),
        }
    }
}

impl RunConfig {
    pub fn game_params(&self) -> crate::Result<GameParams<f64>> {
        GameParams::linear(self.forwarding_cost, self.gain_increment)
    }

    pub fn learning(&self) -> LearningConfig<f64> {
        LearningConfig {
            lambda: self.lambda,
            epsilon: self.epsilon,
            punishment_steps: self.punishment_steps,
            init_alpha: self.init_alpha,
            exempt_banking: self.exempt_banking,
            per_route_signal: self.per_route_signal,
        }
    }

    /// Every violated constraint, empty when the config is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !(self.forwarding_cost >= 0.0 && self.forwarding_cost.is_finite()) {
            v.push(format!("game.F must be >= 0, got {}", self.forwarding_cost));
        }
        if !(self.gain_increment > 0.0 && self.gain_increment.is_finite()) {
            v.push(format!("game.g must be > 0, got {}", self.gain_increment));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            v.push(format!("learn.lambda must be >= 0, got {}", self.lambda));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            v.push(format!(
                "learn.epsilon must lie in (0, 1], got {}",
                self.epsilon
            ));
        }
        if !unit(self.init_alpha) {
            v.push(format!(
                "learn.init_alpha must lie in [0, 1], got {}",
                self.init_alpha
            ));
        }
        if self.punishment_steps < 1 {
            v.push("learn.T must be >= 1".to_string());
        }
        if self.steps < 1 {
            v.push("run.steps must be >= 1".to_string());
        }
        if self.output.is_empty() || self.output.contains(['/', '\\']) {
            v.push(format!(
                "run.output must be a plain file prefix, got '{}'",
                self.output
            ));
        }
        match self.scenario {
            ScenarioSpec::Ring { nodes, hops } => {
                if hops < 1 {
                    v.push("scenario.hops must be >= 1".to_string());
                }
                if nodes <= hops {
                    v.push(format!(
                        "scenario.nodes ({nodes}) must exceed scenario.hops ({hops})"
                    ));
                }
            }
            ScenarioSpec::Random {
                nodes,
                min_forwarders,
                max_forwarders,
                ..
            } => {
                if nodes < 3 {
                    v.push(format!("scenario.nodes must be >= 3, got {nodes}"));
                }
                if min_forwarders > max_forwarders {
                    v.push(format!(
                        "scenario.min_forwarders ({min_forwarders}) exceeds scenario.max_forwarders ({max_forwarders})"
                    ));
                }
                if max_forwarders + 2 > nodes {
                    v.push(format!(
                        "routes with {max_forwarders} forwarders need at least {} nodes",
                        max_forwarders + 2
                    ));
                }
            }
        }
        v
    }

    /// Renders the config in the file format accepted by [`parse_config`].
    pub fn emit(&self) -> String {
        let mut out = String::new();
        match self.scenario {
            ScenarioSpec::Ring { nodes, hops } => {
                let _ = writeln!(out, "scenario.kind = \"ring\"");
                let _ = writeln!(out, "scenario.nodes = {nodes}");
                let _ = writeln!(out, "scenario.hops = {hops}");
            }
            ScenarioSpec::Random {
                nodes,
                pairs,
                min_forwarders,
                max_forwarders,
                seed,
            } => {
                let _ = writeln!(out, "scenario.kind = \"random\"");
                let _ = writeln!(out, "scenario.nodes = {nodes}");
                let _ = writeln!(out, "scenario.pairs = {pairs}");
                let _ = writeln!(out, "scenario.min_forwarders = {min_forwarders}");
                let _ = writeln!(out, "scenario.max_forwarders = {max_forwarders}");
                let _ = writeln!(out, "scenario.seed = {seed}");
            }
        }
        let _ = writeln!(out, "game.F = {:?}", self.forwarding_cost);
        let _ = writeln!(out, "game.g = {:?}", self.gain_increment);
        let _ = writeln!(out, "learn.lambda = {:?}", self.lambda);
        let _ = writeln!(out, "learn.epsilon = {:?}", self.epsilon);
        let _ = writeln!(out, "learn.T = {}", self.punishment_steps);
        let _ = writeln!(out, "learn.init_alpha = {:?}", self.init_alpha);
        let _ = writeln!(out, "learn.exempt_banking = {}", self.exempt_banking);
        let _ = writeln!(out, "learn.per_route_signal = {}", self.per_route_signal);
        let _ = writeln!(out, "run.strategy = \"{}\"", self.strategy);
        let _ = writeln!(out, "run.steps = {}", self.steps);
        let _ = writeln!(out, "run.seed = {}", self.seed);
        let _ = writeln!(out, "run.output = \"{}\"", self.output);
        out
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    scenario: RawScenario,
    #[serde(default)]
    game: RawGame,
    #[serde(default)]
    learn: RawLearn,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: Option<ScenarioKind>,
    nodes: Option<usize>,
    hops: Option<usize>,
    pairs: Option<usize>,
    min_forwarders: Option<usize>,
    max_forwarders: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    #[serde(rename = "F")]
    forwarding_cost: Option<f64>,
    #[serde(rename = "g")]
    gain_increment: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLearn {
    lambda: Option<f64>,
    epsilon: Option<f64>,
    #[serde(rename = "T")]
    punishment_steps: Option<u32>,
    init_alpha: Option<f64>,
    exempt_banking: Option<bool>,
    per_route_signal: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    strategy: Option<StrategyKind>,
    steps: Option<u64>,
    seed: Option<u64>,
    output: Option<String>,
}

/// Parses and validates config text. `origin` names the source in errors.
pub fn parse_config_str(text: &str, origin: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        origin: origin.to_string(),
        message: e.to_string().trim_end().to_string(),
    })?;
    let defaults = RunConfig::default();

    let mut errors = Vec::new();
    let s = raw.scenario;
    let kind = s.kind.unwrap_or(ScenarioKind::Ring);
    let scenario = match kind {
        ScenarioKind::Ring => {
            for (key, set) in [
                ("pairs", s.pairs.is_some()),
                ("min_forwarders", s.min_forwarders.is_some()),
                ("max_forwarders", s.max_forwarders.is_some()),
                ("seed", s.seed.is_some()),
            ] {
                if set {
                    errors.push(format!("scenario.{key} does not apply to ring scenarios"));
                }
            }
            let ScenarioSpec::Ring { nodes, hops } = ScenarioSpec::ring_default() else {
                unreachable!()
            };
            ScenarioSpec::Ring {
                nodes: s.nodes.unwrap_or(nodes),
                hops: s.hops.unwrap_or(hops),
            }
        }
        ScenarioKind::Random => {
            if s.hops.is_some() {
                errors.push("scenario.hops does not apply to random scenarios".to_string());
            }
            let ScenarioSpec::Random {
                nodes,
                pairs,
                min_forwarders,
                max_forwarders,
                seed,
            } = ScenarioSpec::random_default()
            else {
                unreachable!()
            };
            ScenarioSpec::Random {
                nodes: s.nodes.unwrap_or(nodes),
                pairs: s.pairs.unwrap_or(pairs),
                min_forwarders: s.min_forwarders.unwrap_or(min_forwarders),
                max_forwarders: s.max_forwarders.unwrap_or(max_forwarders),
                seed: s.seed.unwrap_or(seed),
            }
        }
    };

    let config = RunConfig {
        scenario,
        forwarding_cost: raw.game.forwarding_cost.unwrap_or(defaults.forwarding_cost),
        gain_increment: raw.game.gain_increment.unwrap_or(defaults.gain_increment),
        lambda: raw.learn.lambda.unwrap_or(defaults.lambda),
        epsilon: raw.learn.epsilon.unwrap_or(defaults.epsilon),
        punishment_steps: raw
            .learn
            .punishment_steps
            .unwrap_or(defaults.punishment_steps),
        init_alpha: raw.learn.init_alpha.unwrap_or(defaults.init_alpha),
        exempt_banking: raw.learn.exempt_banking.unwrap_or(defaults.exempt_banking),
        per_route_signal: raw
            .learn
            .per_route_signal
            .unwrap_or(defaults.per_route_signal),
        strategy: raw.run.strategy.unwrap_or(defaults.strategy),
        steps: raw.run.steps.unwrap_or(defaults.steps),
        seed: raw.run.seed.unwrap_or(defaults.seed),
        output: raw.run.output.unwrap_or(defaults.output),
    };
    errors.extend(config.violations());
    if errors.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Validation(errors))
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_config_str(&text, &path.display().to_string())
}

pub const PRESET_NAMES: [&str; 6] = [
    "ring-fig2",
    "random-fig3",
    "ring-table1",
    "random-table2",
    "ring-table3",
    "random-table4",
];

/// Recovery step used for the stylized nondecreasing baseline in presets.
pub const PANDANA_STYLE_EPSILON: f64 = 0.005;
/// Recovery step used for the stylized global-punishment baseline in presets.
pub const HAN_STYLE_EPSILON: f64 = 0.05;

/// Expands a named preset into its runs.
pub fn expand_preset(name: &str) -> Result<Vec<RunConfig>, ConfigError> {
    let (scenario, init_alpha, with_han) = match name {
        "ring-fig2" | "ring-table1" => (ScenarioSpec::ring_default(), 0.0, true),
        "random-fig3" | "random-table2" => (ScenarioSpec::random_default(), 0.0, true),
        "ring-table3" => (ScenarioSpec::ring_default(), 0.5, false),
        "random-table4" => (ScenarioSpec::random_default(), 0.5, false),
        _ => return Err(ConfigError::UnknownPreset(name.to_string())),
    };
    let base = RunConfig {
        scenario,
        init_alpha,
        ..RunConfig::default()
    };
    let mut runs: Vec<RunConfig> = [0.01, 0.05]
        .into_iter()
        .map(|epsilon| RunConfig {
            epsilon,
            output: format!("{name}-weakest-link-eps{epsilon}"),
            ..base.clone()
        })
        .collect();
    runs.push(RunConfig {
        strategy: StrategyKind::PandanaStyle,
        epsilon: PANDANA_STYLE_EPSILON,
        output: format!("{name}-pandana-style"),
        ..base.clone()
    });
    if with_han {
        runs.push(RunConfig {
            strategy: StrategyKind::HanStyle,
            epsilon: HAN_STYLE_EPSILON,
            output: format!("{name}-han-style"),
            ..base
        });
    }
    Ok(runs)
}

pub const SERIES_HEADER: &str = "step,avg_alpha,cum_pdr,fwd_per_dlv,avg_efficiency";

pub fn series_csv(series: &MetricsSeries<f64>) -> String {
    let mut out = String::with_capacity(series.per_step.len() * 48);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for m in &series.per_step {
        let _ = write!(out, "{},{},{},", m.step, m.avg_alpha, m.cum_pdr);
        if let Some(r) = m.fwd_per_dlv {
            let _ = write!(out, "{r}");
        }
        let _ = writeln!(out, ",{}", m.avg_efficiency);
    }
    out
}

pub const SUMMARY_HEADER: &str = "label,strategy,stylized,scenario.kind,scenario.nodes,scenario.hops,scenario.pairs,scenario.min_forwarders,scenario.max_forwarders,scenario.seed,mean_forwarders,game.F,game.g,learn.lambda,learn.epsilon,learn.T,learn.init_alpha,learn.exempt_banking,learn.per_route_signal,run.steps,run.seed,avg_alpha,cum_pdr,fwd_per_dlv,avg_efficiency,generated,delivered,forwards";

pub fn summary_csv(config: &RunConfig, scenario: &Scenario, series: &MetricsSeries<f64>) -> String {
    let blank = String::new;
    let (nodes, hops, pairs, min_f, max_f, sseed) = match config.scenario {
        ScenarioSpec::Ring { nodes, hops } => (
            nodes.to_string(),
            hops.to_string(),
            blank(),
            blank(),
            blank(),
            blank(),
        ),
        ScenarioSpec::Random {
            nodes,
            pairs,
            min_forwarders,
            max_forwarders,
            seed,
        } => (
            nodes.to_string(),
            blank(),
            pairs.to_string(),
            min_forwarders.to_string(),
            max_forwarders.to_string(),
            seed.to_string(),
        ),
    };
    let last = series.last().expect("a run has at least one step");
    let fields = [
        config.strategy.label().to_string(),
        config.strategy.to_string(),
        config.strategy.is_stylized().to_string(),
        config.scenario.kind().to_string(),
        nodes,
        hops,
        pairs,
        min_f,
        max_f,
        sseed,
        scenario.mean_forwarders().to_string(),
        config.forwarding_cost.to_string(),
        config.gain_increment.to_string(),
        config.lambda.to_string(),
        config.epsilon.to_string(),
        config.punishment_steps.to_string(),
        config.init_alpha.to_string(),
        config.exempt_banking.to_string(),
        config.per_route_signal.to_string(),
        config.steps.to_string(),
        config.seed.to_string(),
        last.avg_alpha.to_string(),
        last.cum_pdr.to_string(),
        last.fwd_per_dlv.map(|r| r.to_string()).unwrap_or_default(),
        last.avg_efficiency.to_string(),
        series.totals.generated.to_string(),
        series.totals.delivered.to_string(),
        series.totals.forwards.to_string(),
    ];
    format!("{SUMMARY_HEADER}\n{}\n", fields.join(","))
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub config: RunConfig,
    pub series: MetricsSeries<f64>,
    pub mean_forwarders: f64,
    pub series_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Simulates one config without touching the filesystem.
pub fn simulate(config: &RunConfig) -> Result<(Scenario, MetricsSeries<f64>), ConfigError> {
    let violations = config.violations();
    if !violations.is_empty() {
        return Err(ConfigError::Validation(violations));
    }
    let scenario = config.scenario.build()?;
    let series = engine::run(
        &scenario,
        &config.game_params()?,
        &config.learning(),
        config.steps,
        config.seed,
        config.strategy,
    )?;
    Ok((scenario, series))
}

fn execute(
    config: &RunConfig,
    out_dir: &Path,
    save_scenario: bool,
) -> Result<RunReport, ConfigError> {
    let (scenario, series) = simulate(config)?;
    let series_path = out_dir.join(format!("{}-series.csv", config.output));
    let summary_path = out_dir.join(format!("{}-summary.csv", config.output));
    fs::write(&series_path, series_csv(&series)).map_err(|e| io_error(&series_path, e))?;
    fs::write(&summary_path, summary_csv(config, &scenario, &series))
        .map_err(|e| io_error(&summary_path, e))?;
    if save_scenario {
        let path = out_dir.join(format!("{}-scenario.toml", config.output));
        fs::write(&path, scenario.to_text()).map_err(|e| io_error(&path, e))?;
    }
    Ok(RunReport {
        config: config.clone(),
        mean_forwarders: scenario.mean_forwarders(),
        series,
        series_path,
        summary_path,
    })
}

/// Runs every config on `jobs` worker threads, writing one series and one
/// summary file per run into `out_dir`. Results come back in input order;
/// outputs do not depend on `jobs`.
pub fn run_experiment(
    configs: &[RunConfig],
    out_dir: &Path,
    jobs: usize,
    save_scenario: bool,
) -> Vec<Result<RunReport, ConfigError>> {
    if let Err(e) = fs::create_dir_all(out_dir) {
        let msg = e.to_string();
        return configs
            .iter()
            .map(|_| Err(io_error(out_dir, std::io::Error::other(msg.clone()))))
            .collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        configs
            .par_iter()
            .map(|c| execute(c, out_dir, save_scenario))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_from_empty_file() {
        let c = parse_config_str("", "empty").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.steps, 2000);
        assert_eq!(c.forwarding_cost, 3.0);
        assert_eq!(c.lambda, 0.01);
        assert_eq!(c.punishment_steps, 3);
    }

    #[test]
    fn dotted_keys_parse() {
        let text = "scenario.kind = \"random\"\nscenario.pairs = 50\ngame.F = 2.5\nlearn.T = 4\nrun.strategy = \"han-style\"\n";
        let c = parse_config_str(text, "t").unwrap();
        assert_eq!(
            c.scenario,
            ScenarioSpec::Random {
                nodes: 100,
                pairs: 50,
                min_forwarders: 3,
                max_forwarders: 6,
                seed: 42
            }
        );
        assert_eq!(c.forwarding_cost, 2.5);
        assert_eq!(c.punishment_steps, 4);
        assert_eq!(c.strategy, StrategyKind::HanStyle);
    }

    #[test]
    fn unknown_key_is_rejected_with_location() {
        let err = parse_config_str("run.steps = 10\nlearn.gamma = 2\n", "cfg.toml").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, ConfigError::Parse { .. }));
        assert!(msg.contains("cfg.toml"), "{msg}");
        assert!(msg.contains("gamma"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn validation_lists_every_violation() {
        let text = "learn.epsilon = 0.0\nlearn.init_alpha = 1.5\nrun.steps = 0\ngame.F = -1.0\n";
        let ConfigError::Validation(v) = parse_config_str(text, "t").unwrap_err() else {
            panic!("expected validation error");
        };
        assert_eq!(v.len(), 4, "{v:?}");
    }

    #[test]
    fn ring_rejects_random_keys() {
        let err = parse_config_str("scenario.pairs = 3\n", "t").unwrap_err();
        assert!(matches!(err, ConfigError::Validation(_)));
    }

    #[test]
    fn emit_round_trips() {
        for preset in PRESET_NAMES {
            for c in expand_preset(preset).unwrap() {
                assert_eq!(parse_config_str(&c.emit(), "emitted").unwrap(), c);
            }
        }
    }

    #[test]
    fn ring_table1_preset() {
        let runs = expand_preset("ring-table1").unwrap();
        assert_eq!(runs.len(), 4);
        let kinds: Vec<_> = runs.iter().map(|r| (r.strategy, r.epsilon)).collect();
        assert_eq!(
            kinds,
            vec![
                (StrategyKind::WeakestLink, 0.01),
                (StrategyKind::WeakestLink, 0.05),
                (StrategyKind::PandanaStyle, PANDANA_STYLE_EPSILON),
                (StrategyKind::HanStyle, HAN_STYLE_EPSILON),
            ]
        );
        for r in &runs {
            assert_eq!(r.scenario, ScenarioSpec::Ring { nodes: 25, hops: 6 });
            assert_eq!(r.init_alpha, 0.0);
            assert_eq!(
                (r.forwarding_cost, r.punishment_steps, r.lambda),
                (3.0, 3, 0.01)
            );
            assert_eq!(r.steps, 2000);
        }
    }

    #[test]
    fn ring_table3_preset() {
        let runs = expand_preset("ring-table3").unwrap();
        assert_eq!(runs.len(), 3);
        assert!(runs.iter().all(|r| r.init_alpha == 0.5));
        assert!(runs.iter().all(|r| r.strategy != StrategyKind::HanStyle));
    }

    #[test]
    fn random_presets_use_full_scale() {
        for name in ["random-fig3", "random-table2", "random-table4"] {
            for r in expand_preset(name).unwrap() {
                let ScenarioSpec::Random { nodes, pairs, .. } = r.scenario else {
                    panic!("{name} is not random");
                };
                assert_eq!((nodes, pairs), (100, 1000));
            }
        }
        assert!(expand_preset("ring-fig9").is_err());
    }

    #[test]
    fn series_csv_shape() {
        let c = RunConfig {
            steps: 1,
            ..RunConfig::default()
        };
        let (_, series) = simulate(&c).unwrap();
        let csv = series_csv(&series);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SERIES_HEADER);
        let row: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(row.len(), 5);
        assert_eq!((row[0], row[2], row[3], row[4]), ("1", "0", "", "0"));
        assert!((row[1].parse::<f64>().unwrap() - 0.05).abs() < 1e-12);
        assert!(!csv.contains('\r'));
    }
}
