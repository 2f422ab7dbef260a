//! Evaluation measurements: delivery rate, forwarding overhead, transmission
//! efficiency and mean forwarding probability.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Totals {
    pub generated: u64,
    pub delivered: u64,
    pub forwards: u64,
}

/// Per-node transmission counts under a unit-power model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NodeTransmissions {
    /// Packets the node sent as a source.
    pub own_tx: u64,
    /// Subset of `own_tx` that reached the destination.
    pub own_delivered_tx: u64,
    pub forwards: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EfficiencyLedger {
    pub nodes: Vec<NodeTransmissions>,
}

impl EfficiencyLedger {
    pub fn new(num_nodes: usize) -> Self {
        EfficiencyLedger {
            nodes: vec![NodeTransmissions::default(); num_nodes],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepMetrics<T> {
    pub step: u64,
    pub avg_alpha: T,
    pub cum_pdr: T,
    /// Absent until the first delivery.
    pub fwd_per_dlv: Option<T>,
    pub avg_efficiency: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsSeries<T> {
    pub per_step: Vec<StepMetrics<T>>,
    pub totals: Totals,
    pub ledger: EfficiencyLedger,
}

impl<T> MetricsSeries<T> {
    pub fn last(&self) -> Option<&StepMetrics<T>> {
        self.per_step.last()
    }
}

impl<T: Scalar> MetricsSeries<T> {
    /// First step whose mean forwarding probability reaches `threshold`.
    pub fn steps_to_alpha(&self, threshold: T) -> Option<u64> {
        self.per_step
            .iter()
            .find(|m| m.avg_alpha >= threshold)
            .map(|m| m.step)
    }
}

pub fn packet_delivery_rate<T: Scalar>(totals: &Totals) -> T {
    if totals.generated == 0 {
        return T::zero();
    }
    T::from_count(totals.delivered as usize) / T::from_count(totals.generated as usize)
}

pub fn forwards_per_delivered<T: Scalar>(totals: &Totals) -> Option<T> {
    (totals.delivered > 0)
        .then(|| T::from_count(totals.forwards as usize) / T::from_count(totals.delivered as usize))
}

/// Successful own transmissions over all transmissions, with unit power
/// per transmission. A node with no transmissions scores 0.
pub fn node_efficiency<T: Scalar>(tx: &NodeTransmissions) -> T {
    let spent = tx.own_tx + tx.forwards;
    if spent == 0 {
        T::zero()
    } else {
        T::from_count(tx.own_delivered_tx as usize) / T::from_count(spent as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Efficiency<T> {
    pub per_node: Vec<T>,
    /// Mean over nodes that transmitted at least once.
    pub average: T,
}

pub fn transmission_efficiency<T: Scalar>(ledger: &EfficiencyLedger) -> Efficiency<T> {
    let per_node: Vec<T> = ledger.nodes.iter().map(node_efficiency).collect();
    let mut sum = T::zero();
    let mut count = 0usize;
    for (tx, eff) in ledger.nodes.iter().zip(&per_node) {
        if tx.own_tx + tx.forwards > 0 {
            sum = sum + *eff;
            count += 1;
        }
    }
    let average = if count == 0 {
        T::zero()
    } else {
        sum / T::from_count(count)
    };
    Efficiency { per_node, average }
}

/// Mean of the given forwarding probabilities; 0 for an empty input.
pub fn average_alpha<T: Scalar, I: IntoIterator<Item = T>>(alphas: I) -> T {
    let (sum, count) = alphas
        .into_iter()
        .fold((T::zero(), 0usize), |(s, c), a| (s + a, c + 1));
    if count == 0 {
        T::zero()
    } else {
        sum / T::from_count(count)
    }
}
