//! Repeated-game engine.
//!
//! Every step sends one packet along every route. Holders forward or bank,
//! chains are settled in currency, predecessors punish unannounced drops,
//! and every node adapts its forwarding probability from the utility it
//! realized during the step.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::{han_style_punish, han_style_update, pandana_style_update, StrategyKind};
use crate::error::{invalid, Result};
use crate::game::GameParams;
use crate::metrics::{
    average_alpha, forwards_per_delivered, packet_delivery_rate, transmission_efficiency,
    EfficiencyLedger, MetricsSeries, StepMetrics, Totals,
};
use crate::scalar::Real;
use crate::topology::{validate, NodeId, Route, Scenario};

#[derive(Clone, Debug, PartialEq)]
pub struct NodeState<T> {
    pub alpha: T,
    /// Utility realized during the previous step.
    pub last_utility: T,
    /// Utility accumulated during the current step.
    pub current_utility: T,
    pub lambda: T,
    pub epsilon: T,
    /// Divisor applied to utility changes, so that the learning signal is
    /// the change in utility per route the node belongs to. 1 for the raw
    /// total.
    pub signal_scale: T,
    /// Punisher to the last step in which it blocks this node.
    pub punished_until: BTreeMap<NodeId, u64>,
}

impl<T: Real> NodeState<T> {
    pub fn new(alpha: T, lambda: T, epsilon: T) -> Self {
        NodeState {
            alpha,
            last_utility: T::zero(),
            current_utility: T::zero(),
            lambda,
            epsilon,
            signal_scale: T::one(),
            punished_until: BTreeMap::new(),
        }
    }

    /// Scaled utility change since the previous step.
    pub fn utility_change(&self) -> T {
        (self.current_utility - self.last_utility) / self.signal_scale
    }

    /// Drops punishments that no longer block anything after `step`.
    pub fn expire(&mut self, step: u64) {
        self.punished_until.retain(|_, until| *until > step);
    }

    pub fn is_punished(&self, step: u64) -> bool {
        self.punished_until.values().any(|&until| until > step)
    }

    pub(crate) fn roll_utility(&mut self) {
        self.last_utility = self.current_utility;
        self.current_utility = T::zero();
    }
}

/// Active `(punisher, punished)` overrides with their remaining steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunishmentRegistry {
    duration: u32,
    active: BTreeMap<(NodeId, NodeId), u32>,
}

impl PunishmentRegistry {
    pub fn new(duration: u32) -> Result<Self> {
        if duration < 1 {
            return Err(invalid("punishment duration must be at least one step"));
        }
        Ok(PunishmentRegistry {
            duration,
            active: BTreeMap::new(),
        })
    }

    pub fn duration(&self) -> u32 {
        self.duration
    }

    /// Starts or refreshes a punishment for the full duration.
    pub fn punish(&mut self, punisher: NodeId, punished: NodeId) {
        self.active.insert((punisher, punished), self.duration);
    }

    pub fn is_active(&self, punisher: NodeId, punished: NodeId) -> bool {
        self.active.contains_key(&(punisher, punished))
    }

    pub fn remaining(&self, punisher: NodeId, punished: NodeId) -> Option<u32> {
        self.active.get(&(punisher, punished)).copied()
    }

    /// Consumes one step of every punishment, removing exhausted ones.
    pub fn tick(&mut self) {
        self.active.retain(|_, remaining| {
            *remaining -= 1;
            *remaining > 0
        });
    }

    pub fn entries(&self) -> impl Iterator<Item = ((NodeId, NodeId), u32)> + '_ {
        self.active.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopRole {
    Source,
    Intermediate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Forward,
    /// Voluntary refusal: the holder banks the chain.
    Bank,
    /// Refusal forced by an active punishment of the next hop.
    PunishmentDrop,
}

impl Decision {
    pub fn forwards(self) -> bool {
        self == Decision::Forward
    }
}

/// Whether the chain holder passes the packet on to `next_hop`.
///
/// An intermediate consumes exactly one uniform draw; sources and punishers
/// consume none.
pub fn decide_forward<T: Real, R: rand::Rng + ?Sized>(
    node: NodeId,
    role: HopRole,
    next_hop: NodeId,
    state: &NodeState<T>,
    registry: &PunishmentRegistry,
    rng: &mut R,
) -> Decision {
    if registry.is_active(node, next_hop) {
        return Decision::PunishmentDrop;
    }
    match role {
        HopRole::Source => Decision::Forward,
        HopRole::Intermediate => {
            if T::sample_unit(rng) < state.alpha {
                Decision::Forward
            } else {
                Decision::Bank
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Refusal {
    pub holder: NodeId,
    pub next_hop: NodeId,
    /// The node that handed the packet to `holder`; `None` at the source.
    pub predecessor: Option<NodeId>,
    pub punitive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketOutcome {
    /// Index of the route in its scenario.
    pub route: usize,
    /// Chain position where the packet stopped; the hop count if delivered.
    pub break_position: usize,
    pub delivered: bool,
    /// Intermediates that forwarded, in route order.
    pub forwards: Vec<NodeId>,
    pub refusal: Option<Refusal>,
}

impl PacketOutcome {
    pub fn punishment_drop(&self) -> Option<(NodeId, NodeId)> {
        self.refusal
            .filter(|r| r.punitive)
            .map(|r| (r.holder, r.next_hop))
    }

    /// Whether the source actually transmitted.
    pub fn source_transmitted(&self) -> bool {
        self.break_position > 0
    }
}

/// Walks the route from the source until a holder refuses or the packet
/// reaches the destination.
pub fn transmit_packet<T: Real, R: rand::Rng + ?Sized>(
    route_index: usize,
    route: &Route,
    states: &[NodeState<T>],
    registry: &PunishmentRegistry,
    rng: &mut R,
) -> PacketOutcome {
    let nodes = route.nodes();
    let hops = route.hop_count();
    let mut forwards = Vec::with_capacity(hops.saturating_sub(1));
    for pos in 0..hops {
        let holder = nodes[pos];
        let next_hop = nodes[pos + 1];
        let role = if pos == 0 {
            HopRole::Source
        } else {
            HopRole::Intermediate
        };
        let decision = decide_forward(
            holder,
            role,
            next_hop,
            &states[holder.index()],
            registry,
            rng,
        );
        if !decision.forwards() {
            return PacketOutcome {
                route: route_index,
                break_position: pos,
                delivered: false,
                forwards,
                refusal: Some(Refusal {
                    holder,
                    next_hop,
                    predecessor: pos.checked_sub(1).map(|p| nodes[p]),
                    punitive: decision == Decision::PunishmentDrop,
                }),
            };
        }
        if role == HopRole::Intermediate {
            forwards.push(holder);
        }
    }
    PacketOutcome {
        route: route_index,
        break_position: hops,
        delivered: true,
        forwards,
        refusal: None,
    }
}

/// Currency deltas for one packet: the chain value `C[b]` to every node at
/// positions `0..=b`, and the forwarding cost to every forwarder.
pub fn settle_rewards<T: Real>(
    outcome: &PacketOutcome,
    route: &Route,
    params: &GameParams<T>,
) -> Vec<(NodeId, T)> {
    let b = outcome.break_position;
    let reward = params.gain.chain_value(b);
    let mut deltas: Vec<(NodeId, T)> = route.nodes()[..=b].iter().map(|&n| (n, reward)).collect();
    deltas.extend(
        outcome
            .forwards
            .iter()
            .map(|&n| (n, -params.forwarding_cost)),
    );
    deltas
}

/// How a strategy reacts to observed refusals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PunishmentPolicy {
    /// Punish every successor of the observer rather than just the offender.
    pub global: bool,
    /// Punishers notify their predecessor, which then does not retaliate.
    pub announce: bool,
    /// Voluntary banking is never punished.
    pub exempt_banking: bool,
}

impl PunishmentPolicy {
    pub fn for_strategy(kind: StrategyKind, exempt_banking: bool) -> Self {
        PunishmentPolicy {
            global: kind == StrategyKind::HanStyle,
            announce: kind.announces_punishment(),
            exempt_banking,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepEvents {
    pub step: u64,
    pub outcomes: Vec<PacketOutcome>,
    /// `(punisher, punished)` entries created or refreshed this step.
    pub new_punishments: Vec<(NodeId, NodeId)>,
    /// `(notifier, notified)`: a punisher announcing its drop upstream.
    pub notifications: Vec<(NodeId, NodeId)>,
}

/// Predecessors observe their successors' refusals and punish the
/// unannounced ones. Fills `new_punishments` and `notifications` in `events`.
pub fn detect_and_punish(
    events: &mut StepEvents,
    registry: &mut PunishmentRegistry,
    policy: PunishmentPolicy,
    successors: &[Vec<NodeId>],
) {
    let mut offenders: Vec<(NodeId, NodeId)> = Vec::new();
    for refusal in events.outcomes.iter().filter_map(|o| o.refusal) {
        let Some(observer) = refusal.predecessor else {
            continue;
        };
        if refusal.punitive && policy.announce {
            events.notifications.push((refusal.holder, observer));
        } else if refusal.punitive || !policy.exempt_banking {
            offenders.push((observer, refusal.holder));
        }
    }
    offenders.sort_unstable();
    offenders.dedup();

    let mut created = Vec::new();
    if policy.global {
        let mut observers: Vec<NodeId> = offenders.iter().map(|&(a, _)| a).collect();
        observers.dedup();
        for observer in observers {
            created.extend(han_style_punish(
                observer,
                &successors[observer.index()],
                registry,
            ));
        }
    } else {
        for &(observer, offender) in &offenders {
            registry.punish(observer, offender);
            created.push((observer, offender));
        }
    }
    created.sort_unstable();
    created.dedup();
    events.new_punishments = created;
    events.notifications.sort_unstable();
    events.notifications.dedup();
}

/// Self-learning update. A punished node raises its probability by its
/// recovery step; otherwise the probability moves by `lambda` times the
/// change in realized utility.
pub fn apply_learning_update<T: Real>(state: &mut NodeState<T>, step: u64) {
    state.expire(step);
    let next = if state.is_punished(step) {
        state.alpha + state.epsilon
    } else {
        state.alpha + state.lambda * state.utility_change()
    };
    state.alpha = next.clamp_unit();
    state.roll_utility();
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearningConfig<T> {
    /// Sensitivity of the forwarding probability to utility changes.
    pub lambda: T,
    /// Recovery step applied while punished.
    pub epsilon: T,
    pub punishment_steps: u32,
    pub init_alpha: T,
    /// Never punish voluntary banking.
    pub exempt_banking: bool,
    /// Learn from utility per route membership instead of the raw total.
    pub per_route_signal: bool,
}

impl<T: Real> LearningConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.lambda < T::zero() {
            return Err(invalid("lambda must be nonnegative"));
        }
        if self.epsilon <= T::zero() || self.epsilon > T::one() {
            return Err(invalid("epsilon must lie in (0, 1]"));
        }
        if self.init_alpha < T::zero() || self.init_alpha > T::one() {
            return Err(invalid("initial alpha must lie in [0, 1]"));
        }
        if self.punishment_steps < 1 {
            return Err(invalid("punishment duration must be at least one step"));
        }
        Ok(())
    }
}

impl<T: Real> Default for LearningConfig<T> {
    fn default() -> Self {
        LearningConfig {
            lambda: T::lit(0.01),
            epsilon: T::lit(0.05),
            punishment_steps: 3,
            init_alpha: T::zero(),
            exempt_banking: false,
            per_route_signal: true,
        }
    }
}

/// Stepwise simulation over one scenario and one random stream.
pub struct Simulation<'a, T: Real> {
    scenario: &'a Scenario,
    params: GameParams<T>,
    strategy: StrategyKind,
    policy: PunishmentPolicy,
    rng: ChaCha8Rng,
    states: Vec<NodeState<T>>,
    registry: PunishmentRegistry,
    successors: Vec<Vec<NodeId>>,
    active: Vec<bool>,
    step: u64,
    totals: Totals,
    ledger: EfficiencyLedger,
}

impl<'a, T: Real> Simulation<'a, T> {
    pub fn new(
        scenario: &'a Scenario,
        params: GameParams<T>,
        learning: &LearningConfig<T>,
        strategy: StrategyKind,
        seed: u64,
    ) -> Result<Self> {
        learning.validate()?;
        if let Some(v) = validate(scenario).first() {
            return Err(invalid(format!("invalid scenario: {v}")));
        }
        let mut successors = vec![Vec::new(); scenario.num_nodes];
        for route in &scenario.routes {
            for pair in route.nodes().windows(2) {
                successors[pair[0].index()].push(pair[1]);
            }
        }
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }
        let mut states = vec![
            NodeState::new(learning.init_alpha, learning.lambda, learning.epsilon);
            scenario.num_nodes
        ];
        if learning.per_route_signal {
            for (state, routes) in states.iter_mut().zip(scenario.memberships()) {
                state.signal_scale = T::from_count(routes.len().max(1));
            }
        }
        Ok(Simulation {
            scenario,
            params,
            strategy,
            policy: PunishmentPolicy::for_strategy(strategy, learning.exempt_banking),
            rng: ChaCha8Rng::seed_from_u64(seed),
            states,
            registry: PunishmentRegistry::new(learning.punishment_steps)?,
            successors,
            active: scenario.active_nodes(),
            step: 0,
            totals: Totals::default(),
            ledger: EfficiencyLedger::new(scenario.num_nodes),
        })
    }

    pub fn states(&self) -> &[NodeState<T>] {
        &self.states
    }

    pub fn registry(&self) -> &PunishmentRegistry {
        &self.registry
    }

    pub fn totals(&self) -> Totals {
        self.totals
    }

    pub fn ledger(&self) -> &EfficiencyLedger {
        &self.ledger
    }

    /// Steps completed so far.
    pub fn step_index(&self) -> u64 {
        self.step
    }

    /// Mean forwarding probability over nodes that belong to some route.
    pub fn average_alpha(&self) -> T {
        average_alpha(
            self.states
                .iter()
                .zip(&self.active)
                .filter(|(_, &a)| a)
                .map(|(s, _)| s.alpha),
        )
    }

    /// Cumulative metrics as of the last completed step.
    pub fn snapshot(&self) -> StepMetrics<T> {
        StepMetrics {
            step: self.step,
            avg_alpha: self.average_alpha(),
            cum_pdr: packet_delivery_rate(&self.totals),
            fwd_per_dlv: forwards_per_delivered(&self.totals),
            avg_efficiency: transmission_efficiency::<T>(&self.ledger).average,
        }
    }

    /// Runs one step and reports what happened.
    pub fn step(&mut self) -> StepEvents {
        self.step += 1;
        let step = self.step;

        let mut events = StepEvents {
            step,
            ..StepEvents::default()
        };
        for (r, route) in self.scenario.routes.iter().enumerate() {
            let outcome = transmit_packet(r, route, &self.states, &self.registry, &mut self.rng);
            for (node, delta) in settle_rewards(&outcome, route, &self.params) {
                let state = &mut self.states[node.index()];
                state.current_utility = state.current_utility + delta;
            }
            self.record(&outcome, route);
            events.outcomes.push(outcome);
        }

        self.registry.tick();
        detect_and_punish(
            &mut events,
            &mut self.registry,
            self.policy,
            &self.successors,
        );
        let until = step + u64::from(self.registry.duration());
        for &(punisher, punished) in &events.new_punishments {
            self.states[punished.index()]
                .punished_until
                .insert(punisher, until);
        }

        for state in &mut self.states {
            match self.strategy {
                StrategyKind::WeakestLink => apply_learning_update(state, step),
                StrategyKind::HanStyle => han_style_update(state, step),
                StrategyKind::PandanaStyle => pandana_style_update(state, step),
            }
        }
        events
    }

    fn record(&mut self, outcome: &PacketOutcome, route: &Route) {
        self.totals.generated += 1;
        self.totals.forwards += outcome.forwards.len() as u64;
        if outcome.delivered {
            self.totals.delivered += 1;
        }
        let source = &mut self.ledger.nodes[route.source().index()];
        if outcome.source_transmitted() {
            source.own_tx += 1;
            if outcome.delivered {
                source.own_delivered_tx += 1;
            }
        }
        for node in &outcome.forwards {
            self.ledger.nodes[node.index()].forwards += 1;
        }
    }

    /// Runs `steps` further steps, recording the cumulative metrics after each.
    pub fn run(mut self, steps: u64) -> MetricsSeries<T> {
        let mut per_step = Vec::with_capacity(steps as usize);
        for _ in 0..steps {
            self.step();
            per_step.push(self.snapshot());
        }
        MetricsSeries {
            per_step,
            totals: self.totals,
            ledger: self.ledger,
        }
    }
}

/// Runs a full repeated game from scratch.
pub fn run<T: Real>(
    scenario: &Scenario,
    params: &GameParams<T>,
    learning: &LearningConfig<T>,
    steps: u64,
    seed: u64,
    strategy: StrategyKind,
) -> Result<MetricsSeries<T>> {
    if steps < 1 {
        return Err(invalid("a run needs at least one step"));
    }
    let sim = Simulation::new(scenario, params.clone(), learning, strategy, seed)?;
    Ok(sim.run(steps))
}
