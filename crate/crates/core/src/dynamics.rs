//! Dynamics clauses over time-ordered traces: the AAS trajectory and its
//! step deltas, a Lipschitz-style bound on those deltas, per-channel cost
//! traces with time-spread entropy and L1 trajectory distance, and the
//! appetition update driving a recall toward a fixed internal target.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{aas, contribution, entropy_bits, Channel, Epsilon, KernelError, Snapshot};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("a trace needs at least one snapshot")]
    EmptyTrace,
    #[error("snapshot {index} does not carry the same channels as snapshot 0")]
    InconsistentChannels { index: usize },
    #[error(
        "channel {name:?} changes weight or redundancy at step {index}; only recalls may vary"
    )]
    NonStaticMass { name: String, index: usize },
    #[error("need at least 2 time points, got {0}")]
    TooShort(usize),
    #[error("unknown channel {0:?}")]
    UnknownChannel(String),
    #[error("cost values must be non-negative, got {0}")]
    NegativeCost(f64),
    #[error("cost sequences differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("at least one update step is required")]
    NoSteps,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A time-ordered sequence of snapshots over one fixed channel set. Only the
/// recall scores may vary across time; weights and redundancies are pinned at
/// their step-0 values so per-channel effective masses are well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    snapshots: Vec<Snapshot>,
}

impl Trace {
    pub fn new(snapshots: Vec<Snapshot>) -> Result<Self, DynamicsError> {
        let first = snapshots.first().ok_or(DynamicsError::EmptyTrace)?;
        let names: Vec<&String> = first.names().collect();
        for (index, snap) in snapshots.iter().enumerate().skip(1) {
            if snap.len() != first.len() || !snap.names().eq(names.iter().copied()) {
                return Err(DynamicsError::InconsistentChannels { index });
            }
            for (name, ch) in snap.iter() {
                let base = first.get(name).expect("names already checked");
                if ch.weight() != base.weight() || ch.redundancy() != base.redundancy() {
                    return Err(DynamicsError::NonStaticMass {
                        name: name.clone(),
                        index,
                    });
                }
            }
        }
        Ok(Trace { snapshots })
    }

    /// Builds a trace from fixed channel definitions and one recall row per
    /// time step.
    pub fn from_schedule(
        definitions: &[(String, f64, f64)],
        recalls: &[Vec<f64>],
    ) -> Result<Self, DynamicsError> {
        let mut snapshots = Vec::with_capacity(recalls.len());
        for (t, row) in recalls.iter().enumerate() {
            if row.len() != definitions.len() {
                return Err(DynamicsError::InconsistentChannels { index: t });
            }
            let mut snap = Snapshot::new(t);
            for ((name, w, r), x) in definitions.iter().zip(row) {
                snap.insert(name.clone(), Channel::new(*w, *r, *x)?)?;
            }
            snapshots.push(snap);
        }
        Trace::new(snapshots)
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn first(&self) -> &Snapshot {
        &self.snapshots[0]
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &String> {
        self.snapshots[0].names()
    }

    /// Recall column of one channel across time.
    pub fn recalls_of(&self, name: &str) -> Result<Vec<f64>, DynamicsError> {
        if !self.snapshots[0].contains(name) {
            return Err(DynamicsError::UnknownChannel(name.to_string()));
        }
        Ok(self
            .snapshots
            .iter()
            .map(|s| s.get(name).expect("consistent channels").recall())
            .collect())
    }
}

/// One channel's penalty story: per-step costs, their total and the entropy
/// of the induced time distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostTrace {
    pub channel_name: String,
    pub costs: Vec<f64>,
    pub total: f64,
    pub time_entropy: f64,
}

impl CostTrace {
    pub fn from_costs(channel_name: String, costs: Vec<f64>) -> Result<Self, DynamicsError> {
        let (time_entropy, total) = time_spread_entropy(&costs)?;
        Ok(CostTrace {
            channel_name,
            costs,
            total,
            time_entropy,
        })
    }
}

/// Record of one appetition run: the visited states, their single-channel
/// AAS values, the step sizes and the per-step penalty drops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppetitionRun {
    pub states: Vec<f64>,
    pub aas_values: Vec<f64>,
    pub step_sizes: Vec<f64>,
    pub penalty_drops: Vec<f64>,
    pub target: f64,
    pub rate: f64,
}

/// AAS value of every snapshot in order.
pub fn aas_trajectory(trace: &Trace, eps: Epsilon) -> Vec<f64> {
    trace.snapshots().iter().map(|s| aas(s, eps)).collect()
}

/// Forward differences of a trajectory and the largest absolute step.
pub fn step_deltas(trajectory: &[f64]) -> Result<(Vec<f64>, f64), DynamicsError> {
    if trajectory.len() < 2 {
        return Err(DynamicsError::TooShort(trajectory.len()));
    }
    let deltas: Vec<f64> = trajectory.windows(2).map(|w| w[1] - w[0]).collect();
    let max_abs = deltas.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    Ok((deltas, max_abs))
}

/// Upper bound on any single-step AAS change, from the kernel's slope
/// ceiling `1 / ((x + eps) * ln 2) <= 1 / (eps * ln 2)` per unit mass:
///
/// ```text
/// bound = max_t (sum_i alpha_i) * max_i |x_{i,t+1} - x_{i,t}| / (eps * ln 2)
/// ```
///
/// Always dominates the observed `max |delta AAS|` of the same trace.
pub fn lipschitz_bound(trace: &Trace, eps: Epsilon) -> Result<f64, DynamicsError> {
    if trace.len() < 2 {
        return Err(DynamicsError::TooShort(trace.len()));
    }
    let total_mass = trace.first().total_mass();
    let scale = total_mass / (eps.value() * std::f64::consts::LN_2);
    let mut bound = 0.0_f64;
    for pair in trace.snapshots().windows(2) {
        let mut max_dx = 0.0_f64;
        for (name, ch) in pair[0].iter() {
            let next = pair[1].get(name).expect("consistent channels");
            max_dx = max_dx.max((next.recall() - ch.recall()).abs());
        }
        bound = bound.max(scale * max_dx);
    }
    Ok(bound)
}

/// Per-step contribution of one channel. Depends only on that channel's own
/// recall column, never on the rest of the trace.
pub fn channel_contribution_series(
    trace: &Trace,
    channel: &str,
    eps: Epsilon,
) -> Result<Vec<f64>, DynamicsError> {
    trace
        .snapshots()
        .iter()
        .map(|snap| {
            let ch = snap
                .get(channel)
                .ok_or_else(|| DynamicsError::UnknownChannel(channel.to_string()))?;
            Ok(contribution(ch, eps))
        })
        .collect()
}

/// Entropy in bits of the normalized time distribution of a cost sequence,
/// together with the total cost. A zero total yields zero entropy.
pub fn time_spread_entropy(costs: &[f64]) -> Result<(f64, f64), DynamicsError> {
    for &c in costs {
        if c < 0.0 || c.is_nan() {
            return Err(DynamicsError::NegativeCost(c));
        }
    }
    let total: f64 = costs.iter().sum();
    if total <= 0.0 {
        return Ok((0.0, total));
    }
    let shares: Vec<f64> = costs.iter().map(|c| c / total).collect();
    Ok((entropy_bits(shares.iter()), total))
}

/// L1 distance between two equal-length cost sequences.
pub fn trajectory_distance(costs_i: &[f64], costs_j: &[f64]) -> Result<f64, DynamicsError> {
    if costs_i.len() != costs_j.len() {
        return Err(DynamicsError::LengthMismatch(costs_i.len(), costs_j.len()));
    }
    Ok(costs_i
        .iter()
        .zip(costs_j)
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// Runs the convex-combination update `x_{t+1} = (1 - rate) * x_t +
/// rate * target` for `steps` steps on a single unit-weight channel.
pub fn appetition(
    x0: f64,
    target: f64,
    rate: f64,
    steps: usize,
    eps: Epsilon,
) -> Result<AppetitionRun, DynamicsError> {
    for (name, value) in [("x0", x0), ("target", target), ("rate", rate)] {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(DynamicsError::OutOfRange { name, value });
        }
    }
    if steps == 0 {
        return Err(DynamicsError::NoSteps);
    }
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0);
    for _ in 0..steps {
        let x = states.last().copied().expect("non-empty");
        states.push((1.0 - rate) * x + rate * target);
    }
    let aas_values: Vec<f64> = states
        .iter()
        .map(|&x| {
            let snap = Snapshot::from_channels(0, [("X".to_string(), Channel::unit(x)?)])?;
            Ok::<f64, DynamicsError>(aas(&snap, eps))
        })
        .collect::<Result<_, _>>()?;
    let step_sizes = states.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let penalty_drops = aas_values.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(AppetitionRun {
        states,
        aas_values,
        step_sizes,
        penalty_drops,
        target,
        rate,
    })
}
