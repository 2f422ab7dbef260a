//! Analytic chain-gain game: gain schedule, expected route utility by
//! backward induction, per-node aggregation and a grid Nash check.

use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Route, Scenario};

/// Currency earned by a chain that reached position `n`, i.e. after `n - 1`
/// successful transmissions.
#[derive(Clone, Debug, PartialEq)]
pub enum GainSchedule<T> {
    /// `C[n] = increment * (n - 1)`.
    Linear { increment: T },
    /// Explicit values `C[1], C[2], ...`; positions past the end repeat the
    /// last entry.
    Table(Vec<T>),
}

impl<T: Scalar> GainSchedule<T> {
    pub fn linear(increment: T) -> Result<Self> {
        if increment <= T::zero() {
            return Err(invalid(format!(
                "gain increment must be positive, got {increment:?}"
            )));
        }
        Ok(GainSchedule::Linear { increment })
    }

    pub fn table(values: Vec<T>) -> Result<Self> {
        match values.first() {
            None => return Err(invalid("gain table is empty")),
            Some(first) if *first != T::zero() => {
                return Err(invalid("gain table must start with C[1] = 0"))
            }
            _ => {}
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("gain table must be nondecreasing"));
        }
        Ok(GainSchedule::Table(values))
    }

    pub fn gain(&self, n: usize) -> Result<T> {
        if n < 1 {
            return Err(invalid("chain position must be at least 1"));
        }
        Ok(self.gain_unchecked(n))
    }

    /// Like [`gain`](Self::gain) but maps the empty chain (`n = 0`, a packet
    /// stopped at its source) to zero.
    pub fn chain_value(&self, n: usize) -> T {
        if n == 0 {
            T::zero()
        } else {
            self.gain_unchecked(n)
        }
    }

    fn gain_unchecked(&self, n: usize) -> T {
        match self {
            GainSchedule::Linear { increment } => *increment * T::from_count(n - 1),
            GainSchedule::Table(values) => values[(n - 1).min(values.len() - 1)],
        }
    }
}

impl<T: Scalar> Default for GainSchedule<T> {
    fn default() -> Self {
        GainSchedule::Linear {
            increment: T::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameParams<T> {
    pub forwarding_cost: T,
    pub gain: GainSchedule<T>,
}

impl<T: Scalar> GameParams<T> {
    pub fn new(forwarding_cost: T, gain: GainSchedule<T>) -> Result<Self> {
        if forwarding_cost < T::zero() {
            return Err(invalid(format!(
                "forwarding cost must be nonnegative, got {forwarding_cost:?}"
            )));
        }
        Ok(GameParams {
            forwarding_cost,
            gain,
        })
    }

    /// Linear schedule with increment `g` and forwarding cost `f`.
    pub fn linear(f: T, g: T) -> Result<Self> {
        Self::new(f, GainSchedule::linear(g)?)
    }
}

/// Forwarding probability of every node, indexed by [`NodeId`].
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyProfile<T> {
    alpha: Vec<T>,
}

impl<T: Scalar> StrategyProfile<T> {
    pub fn new(alpha: Vec<T>) -> Result<Self> {
        if let Some((i, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| **a < T::zero() || **a > T::one())
        {
            return Err(invalid(format!(
                "alpha of node {i} is {a:?}, outside [0, 1]"
            )));
        }
        Ok(StrategyProfile { alpha })
    }

    pub fn uniform(num_nodes: usize, alpha: T) -> Result<Self> {
        Self::new(vec![alpha; num_nodes])
    }

    pub fn alpha(&self, node: NodeId) -> T {
        self.alpha[node.index()]
    }

    /// Probability of banking instead of forwarding.
    pub fn beta(&self, node: NodeId) -> T {
        T::one() - self.alpha(node)
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.alpha
    }

    /// Copy with one node's probability replaced.
    pub fn with_deviation(&self, node: NodeId, alpha: T) -> Self {
        let mut next = self.clone();
        next.alpha[node.index()] = alpha;
        next
    }
}

/// Expected utility at every chain position `0..=N` of `route`.
///
/// Evaluated backward from the destination: `U(N) = C[N]`,
/// `U(n) = (1 - a) C[n] + a (U(n + 1) - F)` for the holder at position `n`,
/// and the source inherits `U(1)` since it always transmits.
pub fn utility_ladder<T: Scalar>(
    route: &Route,
    profile: &StrategyProfile<T>,
    params: &GameParams<T>,
) -> Vec<T> {
    let hops = route.hop_count();
    let mut ladder = vec![T::zero(); hops + 1];
    if hops == 0 {
        return ladder;
    }
    ladder[hops] = params.gain.chain_value(hops);
    for n in (1..hops).rev() {
        let alpha = profile.alpha(route.nodes()[n]);
        let bank = params.gain.chain_value(n);
        ladder[n] = (T::one() - alpha) * bank + alpha * (ladder[n + 1] - params.forwarding_cost);
    }
    ladder[0] = ladder[1];
    ladder
}

pub fn route_utility<T: Scalar>(
    route: &Route,
    position: usize,
    profile: &StrategyProfile<T>,
    params: &GameParams<T>,
) -> Result<T> {
    if position > route.hop_count() {
        return Err(invalid(format!(
            "position {position} is outside route of {} hops",
            route.hop_count()
        )));
    }
    Ok(utility_ladder(route, profile, params)[position])
}

/// Sum of the node's route utilities over every route it belongs to.
pub fn total_utility<T: Scalar>(
    node: NodeId,
    scenario: &Scenario,
    profile: &StrategyProfile<T>,
    params: &GameParams<T>,
) -> T {
    scenario
        .routes
        .iter()
        .filter_map(|route| {
            route
                .position_of(node)
                .map(|pos| utility_ladder(route, profile, params)[pos])
        })
        .fold(T::zero(), |acc, u| acc + u)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Deviation<T> {
    pub alpha: T,
    /// Utility improvement over the profile's own strategy.
    pub gain: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NashReport<T> {
    pub is_nash: bool,
    /// Best improving unilateral deviation, for nodes that have one.
    pub best_deviations: BTreeMap<NodeId, Deviation<T>>,
}

/// Deviation grid `0, step, 2 step, ...` closed with the endpoint 1.
pub fn deviation_grid<T: Scalar>(step: T) -> Result<Vec<T>> {
    if step <= T::zero() || step > T::lit(0.5) {
        return Err(invalid(format!(
            "grid step must lie in (0, 0.5], got {step:?}"
        )));
    }
    let mut grid = Vec::new();
    let mut k = 0usize;
    loop {
        let point = step * T::from_count(k);
        if point >= T::one() {
            break;
        }
        grid.push(point);
        k += 1;
    }
    grid.push(T::one());
    Ok(grid)
}

/// Scans unilateral deviations of every node on a probability grid.
pub fn check_nash<T: Scalar>(
    scenario: &Scenario,
    profile: &StrategyProfile<T>,
    params: &GameParams<T>,
    grid_step: T,
    tolerance: T,
) -> Result<NashReport<T>> {
    if tolerance < T::zero() {
        return Err(invalid("tolerance must be nonnegative"));
    }
    let grid = deviation_grid(grid_step)?;
    let memberships = scenario.memberships();

    let node_utility = |node: NodeId, profile: &StrategyProfile<T>| {
        memberships[node.index()]
            .iter()
            .map(|&(r, pos)| utility_ladder(&scenario.routes[r], profile, params)[pos])
            .fold(T::zero(), |acc, u| acc + u)
    };

    let mut best_deviations = BTreeMap::new();
    for (i, routes) in memberships.iter().enumerate() {
        if routes.is_empty() {
            continue;
        }
        let node = NodeId(i);
        let baseline = node_utility(node, profile);
        let mut best: Option<Deviation<T>> = None;
        for &alpha in &grid {
            let gain = node_utility(node, &profile.with_deviation(node, alpha)) - baseline;
            if gain > tolerance && best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(Deviation { alpha, gain });
            }
        }
        if let Some(dev) = best {
            best_deviations.insert(node, dev);
        }
    }
    Ok(NashReport {
        is_nash: best_deviations.is_empty(),
        best_deviations,
    })
}
