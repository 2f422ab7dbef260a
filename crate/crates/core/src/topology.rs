//! Network scenarios: ring and random route sets, plus structural validation.
//!
//! Routes are the only structure the game needs. A scenario carries no
//! geometry, just the node count and the ordered node sequences packets
//! travel along.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered node sequence, source first and destination last.
///
/// Construction does not enforce the route invariants so that malformed
/// input can be represented and reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Route {
    nodes: Vec<NodeId>,
}

impl Route {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Route { nodes }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Route::new(indices.into_iter().map(NodeId).collect())
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of hops, i.e. the destination's chain position.
    pub fn hop_count(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn destination(&self) -> NodeId {
        self.nodes[self.nodes.len() - 1]
    }

    /// Nodes strictly between source and destination.
    pub fn intermediates(&self) -> &[NodeId] {
        if self.nodes.len() <= 2 {
            &[]
        } else {
            &self.nodes[1..self.nodes.len() - 1]
        }
    }

    pub fn forwarder_count(&self) -> usize {
        self.intermediates().len()
    }

    pub fn position_of(&self, node: NodeId) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Ring,
    Random,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioKind::Ring => f.write_str("ring"),
            ScenarioKind::Random => f.write_str("random"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub num_nodes: usize,
    pub routes: Vec<Route>,
}

impl Scenario {
    /// For every node, the `(route index, chain position)` pairs it occupies.
    pub fn memberships(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.num_nodes];
        for (r, route) in self.routes.iter().enumerate() {
            for (pos, node) in route.nodes().iter().enumerate() {
                if let Some(slot) = out.get_mut(node.index()) {
                    slot.push((r, pos));
                }
            }
        }
        out
    }

    /// Nodes that appear on at least one route.
    pub fn active_nodes(&self) -> Vec<bool> {
        let mut active = vec![false; self.num_nodes];
        for node in self.routes.iter().flat_map(|r| r.nodes()) {
            if let Some(flag) = active.get_mut(node.index()) {
                *flag = true;
            }
        }
        active
    }

    pub fn mean_forwarders(&self) -> f64 {
        if self.routes.is_empty() {
            return 0.0;
        }
        let total: usize = self.routes.iter().map(Route::forwarder_count).sum();
        total as f64 / self.routes.len() as f64
    }

    /// Serializes to the key-value scenario file format.
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("scenario serialization is infallible")
    }

    pub fn from_text(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Ring of `num_nodes` nodes where node `i` sends to `i + hops (mod num_nodes)`.
pub fn generate_ring(num_nodes: usize, hops: usize) -> Result<Scenario> {
    if hops < 1 {
        return Err(invalid("ring hop count must be at least 1"));
    }
    if num_nodes <= hops {
        return Err(invalid(format!(
            "ring needs more than {hops} nodes for {hops}-hop routes, got {num_nodes}"
        )));
    }
    let routes = (0..num_nodes)
        .map(|src| Route::from_indices((0..=hops).map(|k| (src + k) % num_nodes)))
        .collect();
    Ok(Scenario {
        kind: ScenarioKind::Ring,
        num_nodes,
        routes,
    })
}

/// Distribution of the number of forwarders on a synthesized route.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ForwarderCounts {
    /// Uniform over the inclusive range `min..=max`.
    Uniform {
        min: usize,
        max: usize,
    },
    Fixed(usize),
}

impl ForwarderCounts {
    pub fn max(&self) -> usize {
        match *self {
            ForwarderCounts::Uniform { max, .. } => max,
            ForwarderCounts::Fixed(k) => k,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ForwarderCounts::Uniform { min, max } => (min + max) as f64 / 2.0,
            ForwarderCounts::Fixed(k) => k as f64,
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match *self {
            ForwarderCounts::Uniform { min, max } => rng.random_range(min..=max),
            ForwarderCounts::Fixed(k) => k,
        }
    }
}

impl Default for ForwarderCounts {
    fn default() -> Self {
        ForwarderCounts::Uniform { min: 3, max: 6 }
    }
}

/// Random route set: each route is a uniformly drawn sequence of distinct
/// nodes whose forwarder count comes from `forwarder_counts`.
pub fn generate_random(
    num_nodes: usize,
    num_pairs: usize,
    forwarder_counts: &ForwarderCounts,
    seed: u64,
) -> Result<Scenario> {
    if num_nodes < 3 {
        return Err(invalid(format!(
            "random scenario needs at least 3 nodes, got {num_nodes}"
        )));
    }
    if let ForwarderCounts::Uniform { min, max } = *forwarder_counts {
        if min > max {
            return Err(invalid(format!("empty forwarder range {min}..={max}")));
        }
    }
    let longest = forwarder_counts.max() + 2;
    if longest > num_nodes {
        return Err(invalid(format!(
            "routes of {longest} nodes cannot be drawn from {num_nodes} nodes"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<NodeId> = (0..num_nodes).map(NodeId).collect();
    let routes = (0..num_pairs)
        .map(|_| {
            let len = forwarder_counts.sample(&mut rng) + 2;
            let (picked, _) = pool.partial_shuffle(&mut rng, len);
            Route::new(picked.to_vec())
        })
        .collect();
    Ok(Scenario {
        kind: ScenarioKind::Random,
        num_nodes,
        routes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Fewer than two nodes, so no hop.
    TooShort {
        route: usize,
    },
    DuplicateNode {
        route: usize,
        node: NodeId,
    },
    UnknownNode {
        route: usize,
        node: NodeId,
    },
    /// A ring node does not have exactly one source, one destination and
    /// `hops - 1` intermediate roles.
    RingRoles {
        node: NodeId,
        sources: usize,
        destinations: usize,
        intermediates: usize,
    },
    /// Ring routes must all have the same hop count.
    RingHopMismatch {
        route: usize,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooShort { route } => write!(f, "route {route} has no hop"),
            Violation::DuplicateNode { route, node } => {
                write!(f, "route {route} visits node {node} more than once")
            }
            Violation::UnknownNode { route, node } => {
                write!(f, "route {route} references unknown node {node}")
            }
            Violation::RingRoles {
                node,
                sources,
                destinations,
                intermediates,
            } => write!(
                f,
                "ring node {node} has roles (source {sources}, destination {destinations}, intermediate {intermediates})"
            ),
            Violation::RingHopMismatch {
                route,
                expected,
                found,
            } => write!(f, "ring route {route} has {found} hops, expected {expected}"),
        }
    }
}

/// Checks every route and scenario invariant, returning one record per breach.
pub fn validate(scenario: &Scenario) -> Vec<Violation> {
    let mut violations = Vec::new();
    for (r, route) in scenario.routes.iter().enumerate() {
        if route.nodes().len() < 2 {
            violations.push(Violation::TooShort { route: r });
        }
        let mut seen = HashSet::new();
        for &node in route.nodes() {
            if node.index() >= scenario.num_nodes {
                violations.push(Violation::UnknownNode { route: r, node });
            } else if !seen.insert(node) {
                violations.push(Violation::DuplicateNode { route: r, node });
            }
        }
    }

    if scenario.kind == ScenarioKind::Ring && violations.is_empty() {
        let hops = scenario.routes.first().map_or(0, Route::hop_count);
        for (r, route) in scenario.routes.iter().enumerate() {
            if route.hop_count() != hops {
                violations.push(Violation::RingHopMismatch {
                    route: r,
                    expected: hops,
                    found: route.hop_count(),
                });
            }
        }
        let mut roles = vec![(0usize, 0usize, 0usize); scenario.num_nodes];
        for route in &scenario.routes {
            roles[route.source().index()].0 += 1;
            roles[route.destination().index()].1 += 1;
            for node in route.intermediates() {
                roles[node.index()].2 += 1;
            }
        }
        for (i, &(sources, destinations, intermediates)) in roles.iter().enumerate() {
            if (sources, destinations, intermediates) != (1, 1, hops.saturating_sub(1)) {
                violations.push(Violation::RingRoles {
                    node: NodeId(i),
                    sources,
                    destinations,
                    intermediates,
                });
            }
        }
    }
    violations
}
