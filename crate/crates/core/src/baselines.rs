//! Stylized comparison strategies.
//!
//! `HanStyle` and `PandanaStyle` encode only one behavioral trait each of the
//! schemes they are named after: punishing every neighbor on any detected
//! defection, and never lowering the forwarding probability. They are not
//! reimplementations of those schemes and every report labels them as
//! stylized.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{NodeState, PunishmentRegistry};
use crate::error::{invalid, Error};
use crate::scalar::Real;
use crate::topology::NodeId;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    #[default]
    WeakestLink,
    HanStyle,
    PandanaStyle,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [
        StrategyKind::WeakestLink,
        StrategyKind::HanStyle,
        StrategyKind::PandanaStyle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::WeakestLink => "weakest-link",
            StrategyKind::HanStyle => "han-style",
            StrategyKind::PandanaStyle => "pandana-style",
        }
    }

    /// Human-readable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            StrategyKind::WeakestLink => "Weakest Link",
            StrategyKind::HanStyle => "Han-style (stylized)",
            StrategyKind::PandanaStyle => "Pandana-style (stylized)",
        }
    }

    pub fn is_stylized(self) -> bool {
        self != StrategyKind::WeakestLink
    }

    /// Whether a punisher tells its predecessor that its drops are
    /// disciplinary. Unannounced punishment drops look like defections.
    pub fn announces_punishment(self) -> bool {
        self != StrategyKind::HanStyle
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown strategy '{s}'")))
    }
}

/// Global punishment: `punisher` blocks every one of its successors.
/// Returns the entries created or refreshed.
pub fn han_style_punish(
    punisher: NodeId,
    successors: &[NodeId],
    registry: &mut PunishmentRegistry,
) -> Vec<(NodeId, NodeId)> {
    successors
        .iter()
        .map(|&s| {
            registry.punish(punisher, s);
            (punisher, s)
        })
        .collect()
}

/// Utility-proportional update with no recovery step: being punished does
/// not pull the probability back up.
pub fn han_style_update<T: Real>(state: &mut NodeState<T>, step: u64) {
    state.expire(step);
    state.alpha = (state.alpha + state.lambda * state.utility_change()).clamp_unit();
    state.roll_utility();
}

/// Nondecreasing update: positive utility changes raise the probability,
/// losses are ignored, punishment triggers the recovery step.
pub fn pandana_style_update<T: Real>(state: &mut NodeState<T>, step: u64) {
    state.expire(step);
    let next = if state.is_punished(step) {
        state.alpha + state.epsilon
    } else {
        state.alpha + state.lambda * state.utility_change().max(T::zero())
    };
    state.alpha = next.clamp_unit();
    state.roll_utility();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(alpha: f64, last: f64, current: f64) -> NodeState<f64> {
        let mut s = NodeState::new(alpha, 0.01, 0.05);
        s.last_utility = last;
        s.current_utility = current;
        s
    }

    #[test]
    fn pandana_ignores_losses() {
        let mut s = state(0.5, 10.0, 5.0);
        pandana_style_update(&mut s, 1);
        assert_eq!(s.alpha, 0.5);
        assert_eq!(s.last_utility, 5.0);
        assert_eq!(s.current_utility, 0.0);
    }

    #[test]
    fn pandana_follows_gains() {
        let mut s = state(0.5, 0.0, 2.0);
        pandana_style_update(&mut s, 1);
        assert!((s.alpha - 0.52).abs() < 1e-12);
    }

    #[test]
    fn pandana_recovers_under_punishment() {
        let mut s = state(0.5, 10.0, 0.0);
        s.punished_until.insert(NodeId(3), 5);
        pandana_style_update(&mut s, 2);
        assert!((s.alpha - 0.55).abs() < 1e-12);
    }

    #[test]
    fn han_update_ignores_punishment() {
        let mut s = state(0.5, 10.0, 5.0);
        s.punished_until.insert(NodeId(3), 5);
        han_style_update(&mut s, 2);
        assert!((s.alpha - 0.45).abs() < 1e-12);
        assert!(s.is_punished(2));
    }

    #[test]
    fn han_blocks_every_successor() {
        let mut registry = PunishmentRegistry::new(3).unwrap();
        let succ = [NodeId(1), NodeId(4), NodeId(9)];
        let created = han_style_punish(NodeId(0), &succ, &mut registry);
        assert_eq!(created.len(), 3);
        for s in succ {
            assert!(registry.is_active(NodeId(0), s));
        }
    }

    #[test]
    fn strategy_names_parse() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert!("tit-for-tat".parse::<StrategyKind>().is_err());
        assert!(StrategyKind::HanStyle.label().contains("stylized"));
    }
}
