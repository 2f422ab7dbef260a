//! Repeated-game simulator for cooperation enforcement in multi-hop packet
//! forwarding.
//!
//! Nodes along a route build a chain of successful forwards; a chain that
//! stops at position `n` pays `C[n]` to every node it reached, forwarding
//! costs `F` per hop. Predecessors punish unannounced refusals by blocking
//! the offender for `T` steps, and each node adapts its forwarding
//! probability from the utility it realizes.
//!
//! The analytic model in [`game`] is generic over any [`Scalar`] (including
//! exact rationals); the simulator in [`engine`] over any [`Real`]. The
//! aliases below fix the scalar to `f64`.

pub mod baselines;
pub mod cli;
pub mod engine;
pub mod error;
pub mod game;
pub mod metrics;
pub mod scalar;
pub mod topology;

pub use baselines::StrategyKind;
pub use error::{Error, Result};
pub use scalar::{Real, Scalar};
pub use topology::{generate_random, generate_ring, validate, NodeId, Route, Scenario};

pub type GameParams = game::GameParams<f64>;
pub type GainSchedule = game::GainSchedule<f64>;
pub type StrategyProfile = game::StrategyProfile<f64>;
pub type NashReport = game::NashReport<f64>;
pub type NodeState = engine::NodeState<f64>;
pub type LearningConfig = engine::LearningConfig<f64>;
pub type Simulation<'a> = engine::Simulation<'a, f64>;
pub type MetricsSeries = metrics::MetricsSeries<f64>;
pub type StepMetrics = metrics::StepMetrics<f64>;

pub type GameParams32 = game::GameParams<f32>;
pub type LearningConfig32 = engine::LearningConfig<f32>;
pub type Simulation32<'a> = engine::Simulation<'a, f32>;
pub type MetricsSeries32 = metrics::MetricsSeries<f32>;
