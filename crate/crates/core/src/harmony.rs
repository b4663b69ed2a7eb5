//! Harmony and reason penalties layered on the base score: a
//! non-contradiction (PC) tax on jointly held contradictory channels, a
//! sufficient-reason (PSR) tax on recalls exceeding their support, a
//! soul/body tax on mismatched dual views, and a goal/action tax on update
//! directions that disagree with their targets.
//!
//! All four are non-negative and simply add to the base AAS of the same
//! snapshot. Channels referenced by a spec but absent from the snapshot are
//! skipped; callers that want hard failures instead should cross-check
//! references up front.

use indexmap::IndexMap;
use thiserror::Error;

use crate::kernel::{phi, Epsilon, Snapshot};

#[derive(Debug, Error, PartialEq)]
pub enum HarmonyError {
    #[error("a contradiction pair must name two distinct channels, got {0:?} twice")]
    SelfContradiction(String),
    #[error("contradiction weight must be finite and >= 0, got {0}")]
    InvalidPairWeight(f64),
    #[error("contradiction tolerance must be finite and >= 0, got {0}")]
    InvalidTolerance(f64),
    #[error("support smoothing must be finite and > 0, got {0}")]
    InvalidSmoothing(f64),
    #[error("support coefficient for {name:?} must be finite, got {value}")]
    NonFiniteCoefficient { name: String, value: f64 },
    #[error("previous recall for {name:?} must lie in [0, 1], got {value}")]
    InvalidPreviousRecall { name: String, value: f64 },
    #[error("{kind} value for {name:?} must lie in [0, 1], got {value}")]
    InvalidGoalValue {
        kind: &'static str,
        name: String,
        value: f64,
    },
}

/// One unordered contradictory pair with its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionPair {
    pub first: String,
    pub second: String,
    pub weight: f64,
}

impl ContradictionPair {
    pub fn new<S: Into<String>>(first: S, second: S, weight: f64) -> Result<Self, HarmonyError> {
        let first = first.into();
        let second = second.into();
        if first == second {
            return Err(HarmonyError::SelfContradiction(first));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(HarmonyError::InvalidPairWeight(weight));
        }
        Ok(ContradictionPair {
            first,
            second,
            weight,
        })
    }
}

/// Contradictory pairs plus the tolerance below which joint support is free.
#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionSpec {
    pub pairs: Vec<ContradictionPair>,
    pub tolerance: f64,
}

impl ContradictionSpec {
    pub fn new(tolerance: f64, pairs: Vec<ContradictionPair>) -> Result<Self, HarmonyError> {
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(HarmonyError::InvalidTolerance(tolerance));
        }
        Ok(ContradictionSpec { pairs, tolerance })
    }
}

/// Linear support model: each channel is explained by a self edge against
/// its previous recall plus weighted cross edges from current recalls.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportModel {
    pub self_coefficients: IndexMap<String, f64>,
    pub in_edges: IndexMap<String, Vec<(String, f64)>>,
    pub previous_recalls: IndexMap<String, f64>,
    pub smoothing: f64,
}

impl SupportModel {
    pub const DEFAULT_SMOOTHING: f64 = 1e-6;

    pub fn new(
        self_coefficients: IndexMap<String, f64>,
        in_edges: IndexMap<String, Vec<(String, f64)>>,
        previous_recalls: IndexMap<String, f64>,
        smoothing: f64,
    ) -> Result<Self, HarmonyError> {
        if !smoothing.is_finite() || smoothing <= 0.0 {
            return Err(HarmonyError::InvalidSmoothing(smoothing));
        }
        for (name, value) in &self_coefficients {
            if !value.is_finite() {
                return Err(HarmonyError::NonFiniteCoefficient {
                    name: name.clone(),
                    value: *value,
                });
            }
        }
        for (target, edges) in &in_edges {
            for (_, coefficient) in edges {
                if !coefficient.is_finite() {
                    return Err(HarmonyError::NonFiniteCoefficient {
                        name: target.clone(),
                        value: *coefficient,
                    });
                }
            }
        }
        for (name, value) in &previous_recalls {
            if !value.is_finite() || !(0.0..=1.0).contains(value) {
                return Err(HarmonyError::InvalidPreviousRecall {
                    name: name.clone(),
                    value: *value,
                });
            }
        }
        Ok(SupportModel {
            self_coefficients,
            in_edges,
            previous_recalls,
            smoothing,
        })
    }
}

/// Two parallel snapshots over the same content plus the pairing from body
/// channels to their soul counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct DualView {
    pub soul: Snapshot,
    pub body: Snapshot,
    pub pairing: IndexMap<String, String>,
}

/// Target recalls and realised next-step recalls, both in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalSpec {
    pub targets: IndexMap<String, f64>,
    pub next_recalls: IndexMap<String, f64>,
}

impl GoalSpec {
    pub fn new(
        targets: IndexMap<String, f64>,
        next_recalls: IndexMap<String, f64>,
    ) -> Result<Self, HarmonyError> {
        for (kind, map) in [("target", &targets), ("next recall", &next_recalls)] {
            for (name, value) in map {
                if !value.is_finite() || !(0.0..=1.0).contains(value) {
                    return Err(HarmonyError::InvalidGoalValue {
                        kind,
                        name: name.clone(),
                        value: *value,
                    });
                }
            }
        }
        Ok(GoalSpec {
            targets,
            next_recalls,
        })
    }
}

/// Non-contradiction penalty: each pair held jointly above the tolerance is
/// taxed by `gamma * phi(1 - overlap)`, where the overlap is
/// `max(0, min(x_i, x_j) - tolerance)`. Pairs with a missing channel or zero
/// weight contribute nothing.
pub fn pc_penalty(snapshot: &Snapshot, spec: &ContradictionSpec, eps: Epsilon) -> f64 {
    let mut total = 0.0;
    for pair in &spec.pairs {
        let (Some(a), Some(b)) = (snapshot.get(&pair.first), snapshot.get(&pair.second)) else {
            continue;
        };
        let overlap = (a.recall().min(b.recall()) - spec.tolerance).max(0.0);
        if pair.weight > 0.0 {
            total += pair.weight * phi(1.0 - overlap, eps.value());
        }
    }
    total
}

/// Sufficient-reason penalty: each channel whose recall exceeds its linear
/// support `r_i = a_i0 * x_prev_i + sum_j a_ij * x_j` pays
/// `alpha_i * phi(s_i)` on the clamped support ratio `s_i = (r_i + d) /
/// (x_i + d)`. Channels with no stored previous recall fall back to their
/// current recall; a zero-recall channel counts as fully supported.
pub fn psr_penalty(snapshot: &Snapshot, model: &SupportModel, eps: Epsilon) -> f64 {
    let mut total = 0.0;
    for (name, ch) in snapshot.iter() {
        let x = ch.recall();
        let previous = model.previous_recalls.get(name).copied().unwrap_or(x);
        let mut support = model.self_coefficients.get(name).copied().unwrap_or(0.0) * previous;
        if let Some(edges) = model.in_edges.get(name) {
            for (source, coefficient) in edges {
                if let Some(source_ch) = snapshot.get(source) {
                    support += coefficient * source_ch.recall();
                }
            }
        }
        let ratio = if x > 0.0 {
            (support + model.smoothing) / (x + model.smoothing)
        } else {
            1.0
        };
        total += ch.effective_mass() * phi(ratio.clamp(0.0, 1.0), eps.value());
    }
    total
}

/// Soul/body harmony penalty: each paired view is taxed by
/// `min(alpha_soul, alpha_body) * phi(1 - |x_soul - x_body|)`. Unpaired or
/// massless pairs contribute nothing; identical views cost zero.
pub fn soul_body_harmony(view: &DualView, eps: Epsilon) -> f64 {
    let mut total = 0.0;
    for (body_name, soul_name) in &view.pairing {
        let (Some(soul), Some(body)) = (view.soul.get(soul_name), view.body.get(body_name)) else {
            continue;
        };
        let agreement = (1.0 - (soul.recall() - body.recall()).abs()).clamp(0.0, 1.0);
        let mass = soul.effective_mass().min(body.effective_mass());
        if mass > 0.0 {
            total += mass * phi(agreement, eps.value());
        }
    }
    total
}

fn sign(value: f64) -> f64 {
    if value > 0.0 {
        1.0
    } else if value < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Goal/action alignment penalty: compares the sign of the gap to the target
/// with the sign of the realised update. Agreement (including "already there,
/// did not move") is free; orthogonal moves cost `alpha * phi(0.5)`; opposed
/// moves cost `alpha * phi(0)`. Channels without both a target and a next
/// recall are skipped.
pub fn goal_action_harmony(snapshot: &Snapshot, goals: &GoalSpec, eps: Epsilon) -> f64 {
    let mut total = 0.0;
    for (name, ch) in snapshot.iter() {
        let (Some(target), Some(next)) = (goals.targets.get(name), goals.next_recalls.get(name))
        else {
            continue;
        };
        let goal_direction = sign(target - ch.recall());
        let actual_direction = sign(next - ch.recall());
        let alignment = (1.0 - 0.5 * (goal_direction - actual_direction).abs()).clamp(0.0, 1.0);
        total += ch.effective_mass() * phi(alignment, eps.value());
    }
    total
}
