//! Ontology clauses: geometric-decay ageing plus the three structural
//! invariance checks — refinement, ghost suppression and clone
//! deduplication. Each check evaluates both sides of an equivalence with the
//! kernel and reports whether the scores agree.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{aas, Channel, Epsilon, KernelError, Snapshot};

#[derive(Debug, Error, PartialEq)]
pub enum OntologyError {
    #[error("split fractions must be positive, got {0}")]
    NonPositiveFraction(f64),
    #[error("split fractions must sum to 1, got {0}")]
    FractionSum(f64),
    #[error("ghost channel must have zero effective mass, got alpha = {0}")]
    NotAGhost(f64),
    #[error("initial recall must lie in (0, 1], got {0}")]
    InvalidInitialRecall(f64),
    #[error("decay factor must lie in (0, 1], got {0}")]
    InvalidDecay(f64),
    #[error("at least one ageing step is required")]
    NoSteps,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Which structural equivalence a check result refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OntologyCheck {
    Refinement,
    Ghost,
    Dedup,
}

/// Outcome of one ontology check: the two scores and whether they agree
/// under the closeness test (rel_tol = abs_tol = 1e-9).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OntologyCheckResult {
    pub check: OntologyCheck,
    pub holds: bool,
    pub lhs_score: f64,
    pub rhs_score: f64,
}

const REL_TOL: f64 = 1e-9;
const ABS_TOL: f64 = 1e-9;

fn is_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= f64::max(REL_TOL * f64::max(a.abs(), b.abs()), ABS_TOL)
}

fn result(check: OntologyCheck, lhs: f64, rhs: f64) -> OntologyCheckResult {
    OntologyCheckResult {
        check,
        holds: is_close(lhs, rhs),
        lhs_score: lhs,
        rhs_score: rhs,
    }
}

/// Geometric ageing setup: recalls evolve as `x_t = x_0 * decay^t` on
/// unit-weight, zero-redundancy channels.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayScenario {
    initial_recalls: Vec<f64>,
    decay: f64,
    steps: usize,
}

impl DecayScenario {
    pub fn new(initial_recalls: Vec<f64>, decay: f64, steps: usize) -> Result<Self, OntologyError> {
        for &x in &initial_recalls {
            if !x.is_finite() || x <= 0.0 || x > 1.0 {
                return Err(OntologyError::InvalidInitialRecall(x));
            }
        }
        if !decay.is_finite() || decay <= 0.0 || decay > 1.0 {
            return Err(OntologyError::InvalidDecay(decay));
        }
        if steps == 0 {
            return Err(OntologyError::NoSteps);
        }
        Ok(DecayScenario {
            initial_recalls,
            decay,
            steps,
        })
    }

    pub fn initial_recalls(&self) -> &[f64] {
        &self.initial_recalls
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// AAS trajectory of a decaying system, one entry per step.
pub fn simulate_geometric_aging(scenario: &DecayScenario, eps: Epsilon) -> Vec<f64> {
    (0..scenario.steps)
        .map(|t| {
            let factor = scenario.decay.powi(t as i32);
            let snapshot = Snapshot::from_channels(
                t,
                scenario.initial_recalls.iter().enumerate().map(|(i, x)| {
                    let ch = Channel::unit(x * factor).expect("recall stays in (0, 1]");
                    (format!("ch{i}"), ch)
                }),
            )
            .expect("generated names are unique");
            aas(&snapshot, eps)
        })
        .collect()
}

/// Splitting one channel into sub-channels whose weights sum to the original
/// must leave the score unchanged.
pub fn check_refinement(
    channel: &Channel,
    split_fractions: &[f64],
    eps: Epsilon,
) -> Result<OntologyCheckResult, OntologyError> {
    for &f in split_fractions {
        if !f.is_finite() || f <= 0.0 {
            return Err(OntologyError::NonPositiveFraction(f));
        }
    }
    let sum: f64 = split_fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(OntologyError::FractionSum(sum));
    }
    let single = Snapshot::from_channels(0, [("whole".to_string(), *channel)])?;
    let split = Snapshot::from_channels(
        0,
        split_fractions.iter().enumerate().map(|(i, f)| {
            let part = Channel::new(channel.weight() * f, channel.redundancy(), channel.recall())
                .expect("scaled weight stays valid");
            (format!("part{i}"), part)
        }),
    )?;
    Ok(result(
        OntologyCheck::Refinement,
        aas(&single, eps),
        aas(&split, eps),
    ))
}

/// Adding a channel with zero effective mass must leave the score unchanged.
pub fn check_ghost(
    base: &Snapshot,
    ghost: &Channel,
    eps: Epsilon,
) -> Result<OntologyCheckResult, OntologyError> {
    let alpha = ghost.effective_mass();
    if alpha != 0.0 {
        return Err(OntologyError::NotAGhost(alpha));
    }
    let before = aas(base, eps);
    let mut with_ghost = base.clone();
    let mut name = "ghost".to_string();
    while with_ghost.contains(&name) {
        name.push('_');
    }
    with_ghost.insert(name, *ghost)?;
    Ok(result(OntologyCheck::Ghost, before, aas(&with_ghost, eps)))
}

/// Two indiscernible clones must score the same as one merged channel with
/// their combined weight.
pub fn check_dedup(channel: &Channel, eps: Epsilon) -> Result<OntologyCheckResult, OntologyError> {
    let clones = Snapshot::from_channels(
        0,
        [
            ("clone0".to_string(), *channel),
            ("clone1".to_string(), *channel),
        ],
    )?;
    let merged_channel = Channel::new(
        channel.weight() * 2.0,
        channel.redundancy(),
        channel.recall(),
    )?;
    let merged = Snapshot::from_channels(0, [("merged".to_string(), merged_channel)])?;
    Ok(result(
        OntologyCheck::Dedup,
        aas(&clones, eps),
        aas(&merged, eps),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps() -> Epsilon {
        Epsilon::default()
    }

    fn demo_channel() -> Channel {
        Channel::new(1.0, 0.2, 0.8).unwrap()
    }

    #[test]
    fn aging_matches_reference_trajectories() {
        let young = DecayScenario::new(vec![0.90, 0.85], 0.98, 5).unwrap();
        let old = DecayScenario::new(vec![0.90, 0.85], 0.90, 5).unwrap();
        let young_traj = simulate_geometric_aging(&young, eps());
        let old_traj = simulate_geometric_aging(&old, eps());
        assert!((young_traj[0] - 0.3861).abs() < 1e-3);
        assert!((young_traj[4] - 0.6189).abs() < 1e-3);
        assert!((old_traj[0] - 0.3861).abs() < 1e-3);
        assert!((old_traj[1] - 0.6897).abs() < 1e-3);
        assert!((old_traj[4] - 1.6004).abs() < 1e-3);
    }

    #[test]
    fn no_decay_means_constant_trajectory() {
        let scenario = DecayScenario::new(vec![0.9, 0.85], 1.0, 4).unwrap();
        let traj = simulate_geometric_aging(&scenario, eps());
        assert!(traj.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn decay_scenario_validates_inputs() {
        assert!(DecayScenario::new(vec![0.0], 0.9, 3).is_err());
        assert!(DecayScenario::new(vec![1.1], 0.9, 3).is_err());
        assert!(DecayScenario::new(vec![0.5], 0.0, 3).is_err());
        assert!(DecayScenario::new(vec![0.5], 1.5, 3).is_err());
        assert!(DecayScenario::new(vec![0.5], 0.9, 0).is_err());
    }

    #[test]
    fn refinement_matches_reference_split() {
        let res = check_refinement(&demo_channel(), &[0.4, 0.6], eps()).unwrap();
        assert!(res.holds);
        assert!((res.lhs_score - 0.2573).abs() < 1e-3);
        assert!((res.rhs_score - 0.2573).abs() < 1e-3);
    }

    #[test]
    fn refinement_with_identity_split_holds() {
        let res = check_refinement(&demo_channel(), &[1.0], eps()).unwrap();
        assert!(res.holds);
        assert_eq!(res.lhs_score, res.rhs_score);
    }

    #[test]
    fn refinement_holds_for_three_way_split() {
        let ch = Channel::new(2.0, 0.5, 0.3).unwrap();
        let res = check_refinement(&ch, &[0.25, 0.25, 0.5], eps()).unwrap();
        assert!(res.holds);
        // Both sides evaluate to alpha * phi(0.3); frozen from direct arithmetic.
        assert!((res.lhs_score - 1.7336065820762914).abs() < 1e-12);
    }

    #[test]
    fn refinement_rejects_bad_fractions() {
        assert_eq!(
            check_refinement(&demo_channel(), &[0.4, 0.5], eps()).unwrap_err(),
            OntologyError::FractionSum(0.9)
        );
        assert!(matches!(
            check_refinement(&demo_channel(), &[1.2, -0.2], eps()).unwrap_err(),
            OntologyError::NonPositiveFraction(_)
        ));
    }

    #[test]
    fn ghost_matches_reference_value() {
        let base = Snapshot::from_channels(0, [("base".to_string(), demo_channel())]).unwrap();
        let ghost = Channel::new(0.0, 0.0, 0.9).unwrap();
        let res = check_ghost(&base, &ghost, eps()).unwrap();
        assert!(res.holds);
        assert!((res.lhs_score - 0.2573).abs() < 1e-3);
        assert_eq!(res.lhs_score, res.rhs_score);
    }

    #[test]
    fn fully_redundant_channel_is_also_a_ghost() {
        let base = Snapshot::from_channels(0, [("base".to_string(), demo_channel())]).unwrap();
        let ghost = Channel::new(2.0, 1.0, 0.1).unwrap();
        assert!(check_ghost(&base, &ghost, eps()).unwrap().holds);
    }

    #[test]
    fn ghost_on_empty_base_holds() {
        let ghost = Channel::new(0.0, 0.0, 0.5).unwrap();
        let res = check_ghost(&Snapshot::new(0), &ghost, eps()).unwrap();
        assert!(res.holds);
        assert_eq!(res.lhs_score, 0.0);
    }

    #[test]
    fn ghost_with_positive_mass_is_rejected() {
        let base = Snapshot::new(0);
        let not_ghost = Channel::new(0.5, 0.5, 0.5).unwrap();
        assert!(matches!(
            check_ghost(&base, &not_ghost, eps()).unwrap_err(),
            OntologyError::NotAGhost(_)
        ));
    }

    #[test]
    fn ghost_name_collision_is_avoided() {
        let mut base = Snapshot::new(0);
        base.insert("ghost", demo_channel()).unwrap();
        let ghost = Channel::new(0.0, 0.0, 0.9).unwrap();
        assert!(check_ghost(&base, &ghost, eps()).unwrap().holds);
    }

    #[test]
    fn dedup_matches_reference_value() {
        let res = check_dedup(&demo_channel(), eps()).unwrap();
        assert!(res.holds);
        assert!((res.lhs_score - 0.5145).abs() < 1e-3);
        assert!((res.rhs_score - 0.5145).abs() < 1e-3);
    }

    #[test]
    fn dedup_of_weightless_channel_holds() {
        let ch = Channel::new(0.0, 0.0, 0.4).unwrap();
        let res = check_dedup(&ch, eps()).unwrap();
        assert!(res.holds);
        assert_eq!(res.lhs_score, 0.0);
    }

    #[test]
    fn dedup_holds_without_redundancy() {
        let ch = Channel::new(0.7, 0.0, 0.4).unwrap();
        let res = check_dedup(&ch, eps()).unwrap();
        assert!(res.holds);
        // 2 * 0.7 * phi(0.4), frozen from direct arithmetic.
        assert!((res.lhs_score - 1.8476749653335023).abs() < 1e-12);
    }
}
