//! Representation/consciousness diagnostics, evaluated step by step over a
//! trace of unit-weight channels: apperception level, the two dizziness
//! flags, an exponentially forgotten memory trace, sequential coherence and
//! the KL-based reason score.
//!
//! The walk is a sequential fold: each step sees the penalty vector, its
//! positive increments over the previous step, and a memory trace updated as
//! `M <- lambda * M + dPhi`. The memory normalizes into a prior `q` (uniform
//! while total memory mass is zero), coherence is the inner product of the
//! current shares with `q`, and the reason score compares the shares against
//! both `q` and a fixed rational prior.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::Trace;
use crate::kernel::{entropy_bits, phi, Epsilon};

#[derive(Debug, Error, PartialEq)]
pub enum ConsciousnessError {
    #[error("rational prior has {prior} entries but the trace has {channels} channels")]
    PriorLengthMismatch { prior: usize, channels: usize },
    #[error("rational prior entries must be positive, got {0}")]
    NonPositivePrior(f64),
    #[error("saliency threshold tau must be > 0, got {0}")]
    InvalidTau(f64),
    #[error("sharpness threshold must be > 0, got {0}")]
    InvalidSharpness(f64),
    #[error("forgetting factor must lie in [0, 1], got {0}")]
    InvalidForgetting(f64),
    #[error("tiny floor must be > 0, got {0}")]
    InvalidTiny(f64),
    #[error("channel {0:?} must have unit effective mass for consciousness diagnostics")]
    NonUnitChannel(String),
}

/// Thresholds and priors for the consciousness walk.
///
/// `delta_sharpness` is the minimum penalty increase that counts as a salient
/// new direction; it is unrelated to the decay factor of the ageing clauses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsciousnessConfig {
    pub tau: f64,
    pub delta_sharpness: f64,
    pub forgetting: f64,
    pub rational_prior: Vec<f64>,
    pub tiny: f64,
}

impl ConsciousnessConfig {
    pub const DEFAULT_TAU: f64 = 0.05;
    pub const DEFAULT_SHARPNESS: f64 = 0.02;
    pub const DEFAULT_FORGETTING: f64 = 0.7;
    pub const DEFAULT_TINY: f64 = 1e-9;

    /// Default thresholds with the given rational prior.
    pub fn with_prior(rational_prior: Vec<f64>) -> Self {
        ConsciousnessConfig {
            tau: Self::DEFAULT_TAU,
            delta_sharpness: Self::DEFAULT_SHARPNESS,
            forgetting: Self::DEFAULT_FORGETTING,
            rational_prior,
            tiny: Self::DEFAULT_TINY,
        }
    }

    fn validate(&self, channels: usize) -> Result<(), ConsciousnessError> {
        if !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(ConsciousnessError::InvalidTau(self.tau));
        }
        if !self.delta_sharpness.is_finite() || self.delta_sharpness <= 0.0 {
            return Err(ConsciousnessError::InvalidSharpness(self.delta_sharpness));
        }
        if !self.forgetting.is_finite() || !(0.0..=1.0).contains(&self.forgetting) {
            return Err(ConsciousnessError::InvalidForgetting(self.forgetting));
        }
        if !self.tiny.is_finite() || self.tiny <= 0.0 {
            return Err(ConsciousnessError::InvalidTiny(self.tiny));
        }
        for &r in &self.rational_prior {
            if !r.is_finite() || r <= 0.0 {
                return Err(ConsciousnessError::NonPositivePrior(r));
            }
        }
        if self.rational_prior.len() != channels {
            return Err(ConsciousnessError::PriorLengthMismatch {
                prior: self.rational_prior.len(),
                channels,
            });
        }
        Ok(())
    }
}

/// Mutable state threaded through the walk.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsciousnessState {
    pub memory: Vec<f64>,
    pub previous_penalties: Option<Vec<f64>>,
}

impl ConsciousnessState {
    pub fn new(channels: usize) -> Self {
        ConsciousnessState {
            memory: vec![0.0; channels],
            previous_penalties: None,
        }
    }
}

/// Everything measured at one time step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsciousnessRecord {
    pub time_index: usize,
    pub penalties: Vec<f64>,
    pub total: f64,
    pub shares: Vec<f64>,
    pub dominance: f64,
    pub entropy: f64,
    pub kappa: f64,
    pub apperception_level: f64,
    pub tau_dizzy: bool,
    pub delta_dizzy: bool,
    pub memory_prior: Vec<f64>,
    pub coherence: f64,
    pub reason: f64,
}

/// `KL(p || q) - KL(p || r)` in bits. Zero-probability terms of `p` are
/// skipped and denominators are floored at `tiny`; the floor is part of the
/// definition, not a numerical afterthought.
pub fn reason_score(
    shares: &[f64],
    memory_prior: &[f64],
    rational_prior: &[f64],
    tiny: f64,
) -> f64 {
    kl_bits(shares, memory_prior, tiny) - kl_bits(shares, rational_prior, tiny)
}

fn kl_bits(p: &[f64], q: &[f64], tiny: f64) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| pi * (pi / qi.max(tiny)).log2())
        .sum()
}

/// The two pathology flags for one step. `tau_dizzy`: the system is active
/// but no single penalty reaches the saliency threshold. `delta_dizzy`: the
/// system is active but no penalty rose by at least the sharpness threshold.
pub fn dizziness_flags(
    penalties: &[f64],
    positive_increments: &[f64],
    config: &ConsciousnessConfig,
) -> (bool, bool) {
    let total: f64 = penalties.iter().sum();
    let salient: f64 = penalties.iter().filter(|c| **c >= config.tau).sum();
    let tau_dizzy = total > 0.0 && salient == 0.0;
    let max_increment = positive_increments.iter().fold(0.0_f64, |m, d| m.max(*d));
    let delta_dizzy = total > 0.0 && max_increment < config.delta_sharpness;
    (tau_dizzy, delta_dizzy)
}

/// Walks the trace in order, threading the memory state, and emits one
/// record per step. All channels must carry unit effective mass. At step 0
/// there is no previous penalty vector, so all increments are zero and the
/// delta flag fires whenever the system is active at all.
pub fn run_consciousness(
    trace: &Trace,
    config: &ConsciousnessConfig,
    eps: Epsilon,
) -> Result<Vec<ConsciousnessRecord>, ConsciousnessError> {
    let channel_count = trace.first().len();
    config.validate(channel_count)?;
    for (name, ch) in trace.first().iter() {
        if ch.effective_mass() != 1.0 {
            return Err(ConsciousnessError::NonUnitChannel(name.clone()));
        }
    }
    let prior_sum: f64 = config.rational_prior.iter().sum();
    let rational: Vec<f64> = config
        .rational_prior
        .iter()
        .map(|r| r / prior_sum)
        .collect();

    let mut state = ConsciousnessState::new(channel_count);
    let mut records = Vec::with_capacity(trace.len());
    for (t, snapshot) in trace.snapshots().iter().enumerate() {
        let penalties: Vec<f64> = snapshot
            .iter()
            .map(|(_, ch)| phi(ch.recall(), eps.value()))
            .collect();
        let increments: Vec<f64> = match &state.previous_penalties {
            None => vec![0.0; channel_count],
            Some(prev) => penalties
                .iter()
                .zip(prev)
                .map(|(now, before)| (now - before).max(0.0))
                .collect(),
        };
        state.previous_penalties = Some(penalties.clone());

        let total: f64 = penalties.iter().sum();
        let (shares, dominance, entropy, kappa, apperception_level) = if total > 0.0 {
            let shares: Vec<f64> = penalties.iter().map(|c| c / total).collect();
            let active = shares.iter().filter(|p| **p > 0.0).count();
            let entropy = entropy_bits(shares.iter());
            let dominance = shares.iter().fold(0.0_f64, |m, p| m.max(*p));
            let kappa = if active > 1 {
                (entropy / (active as f64).log2()).clamp(0.0, 1.0)
            } else {
                0.0
            };
            (shares, dominance, entropy, kappa, (1.0 - kappa) * dominance)
        } else {
            (vec![0.0; channel_count], 0.0, 0.0, 0.0, 0.0)
        };

        let (tau_dizzy, delta_dizzy) = dizziness_flags(&penalties, &increments, config);

        for (m, d) in state.memory.iter_mut().zip(&increments) {
            *m = config.forgetting * *m + d;
        }
        let memory_mass: f64 = state.memory.iter().sum();
        let memory_prior: Vec<f64> = if memory_mass > 0.0 {
            state.memory.iter().map(|m| m / memory_mass).collect()
        } else {
            vec![1.0 / channel_count as f64; channel_count]
        };

        let coherence = if total > 0.0 {
            shares.iter().zip(&memory_prior).map(|(p, q)| p * q).sum()
        } else {
            0.0
        };
        let reason = if total > 0.0 {
            reason_score(&shares, &memory_prior, &rational, config.tiny)
        } else {
            0.0
        };

        records.push(ConsciousnessRecord {
            time_index: t,
            penalties,
            total,
            shares,
            dominance,
            entropy,
            kappa,
            apperception_level,
            tau_dizzy,
            delta_dizzy,
            memory_prior,
            coherence,
            reason,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Trace;

    pub(crate) fn demo_trace() -> Trace {
        let defs = vec![
            ("m0".to_string(), 1.0, 0.0),
            ("m1".to_string(), 1.0, 0.0),
            ("m2".to_string(), 1.0, 0.0),
        ];
        let rows = vec![
            vec![0.80, 0.82, 0.79],
            vec![0.40, 0.90, 0.88],
            vec![0.83, 0.81, 0.80],
            vec![0.97, 0.96, 0.95],
            vec![0.89, 0.50, 0.87],
            vec![0.86, 0.84, 0.85],
        ];
        Trace::from_schedule(&defs, &rows).unwrap()
    }

    pub(crate) fn demo_config() -> ConsciousnessConfig {
        ConsciousnessConfig::with_prior(vec![0.6, 0.3, 0.1])
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-3
    }

    #[test]
    fn walk_matches_reference_first_two_steps() {
        let records = run_consciousness(&demo_trace(), &demo_config(), Epsilon::default()).unwrap();
        assert_eq!(records.len(), 6);

        let r0 = &records[0];
        assert!(close(r0.total, 0.9472));
        assert!(close(r0.dominance, 0.3586));
        assert!(close(r0.entropy, 1.5813));
        assert!(close(r0.apperception_level, 0.0008));
        assert!(!r0.tau_dizzy);
        assert!(r0.delta_dizzy);
        assert!(close(r0.coherence, 0.3333));
        assert!(close(r0.reason, -0.3809));

        let r1 = &records[1];
        assert!(close(r1.total, 1.6558));
        assert!(close(r1.dominance, 0.7970));
        assert!(close(r1.entropy, 0.9294));
        assert!(close(r1.apperception_level, 0.3297));
        assert!(!r1.tau_dizzy);
        assert!(!r1.delta_dizzy);
        assert!(close(r1.coherence, 0.7970));
        assert!(close(r1.reason, 4.9517));
    }

    #[test]
    fn delta_dizzy_fires_only_at_steps_zero_and_three() {
        let records = run_consciousness(&demo_trace(), &demo_config(), Epsilon::default()).unwrap();
        let delta_pattern: Vec<bool> = records.iter().map(|r| r.delta_dizzy).collect();
        assert_eq!(delta_pattern, vec![true, false, false, true, false, false]);
        assert!(records.iter().all(|r| !r.tau_dizzy));
    }

    #[test]
    fn uniform_recalls_give_flat_diagnostics() {
        let defs = vec![
            ("a".to_string(), 1.0, 0.0),
            ("b".to_string(), 1.0, 0.0),
            ("c".to_string(), 1.0, 0.0),
        ];
        let rows = vec![vec![0.6, 0.6, 0.6], vec![0.6, 0.6, 0.6]];
        let trace = Trace::from_schedule(&defs, &rows).unwrap();
        let config = ConsciousnessConfig::with_prior(vec![1.0, 1.0, 1.0]);
        let records = run_consciousness(&trace, &config, Epsilon::default()).unwrap();
        for r in &records {
            assert!((r.dominance - 1.0 / 3.0).abs() < 1e-12);
            assert!((r.kappa - 1.0).abs() < 1e-12);
            assert_eq!(r.apperception_level, 0.0);
            assert!((r.coherence - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn flags_on_hand_worked_inputs() {
        let config = demo_config();
        // active but nothing salient, nothing rising
        let (tau, delta) = dizziness_flags(&[0.32, 0.29, 0.34], &[0.0, 0.0, 0.0], &config);
        assert!(!tau);
        assert!(delta);
        // silent system raises neither flag
        let (tau, delta) = dizziness_flags(&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &config);
        assert!(!tau);
        assert!(!delta);
        // sub-threshold penalties with one sharp rise
        let (tau, delta) = dizziness_flags(&[0.04, 0.03], &[0.5, 0.0], &config);
        assert!(tau);
        assert!(!delta);
    }

    #[test]
    fn reason_score_is_zero_for_identical_distributions() {
        let p = [0.5, 0.3, 0.2];
        assert_eq!(reason_score(&p, &p, &p, 1e-9), 0.0);
    }

    #[test]
    fn reason_score_matches_hand_evaluation() {
        // KL(p||q) = log2(2) = 1; KL(p||r) = log2(1/0.9); frozen difference.
        let got = reason_score(&[1.0, 0.0], &[0.5, 0.5], &[0.9, 0.1], 1e-9);
        assert!((got - 0.84799690655495).abs() < 1e-12);
    }

    #[test]
    fn reason_score_floors_denominators_at_tiny() {
        let tiny = 1e-9;
        let a = reason_score(&[0.7, 0.3], &[1.0, 0.0], &[0.5, 0.5], tiny);
        let b = reason_score(&[0.7, 0.3], &[1.0, tiny], &[0.5, 0.5], tiny);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_increments_keep_memory_empty_and_prior_uniform() {
        // recalls only improve, so every increment clamps to zero and the
        // memory trace never accumulates mass
        let defs = vec![("a".to_string(), 1.0, 0.0), ("b".to_string(), 1.0, 0.0)];
        let rows = vec![vec![0.5, 0.4], vec![0.6, 0.5], vec![0.7, 0.6]];
        let trace = Trace::from_schedule(&defs, &rows).unwrap();
        let config = ConsciousnessConfig::with_prior(vec![0.5, 0.5]);
        let records = run_consciousness(&trace, &config, Epsilon::default()).unwrap();
        for r in &records {
            assert_eq!(r.memory_prior, vec![0.5, 0.5]);
        }
    }

    #[test]
    fn memory_prior_is_invariant_under_pure_decay() {
        // one penalty spike builds memory; afterwards recalls only improve,
        // so the memory just scales by the forgetting factor and its
        // normalization q stays fixed
        let defs = vec![("a".to_string(), 1.0, 0.0), ("b".to_string(), 1.0, 0.0)];
        let rows = vec![
            vec![0.9, 0.9],
            vec![0.4, 0.7],
            vec![0.5, 0.8],
            vec![0.6, 0.9],
        ];
        let trace = Trace::from_schedule(&defs, &rows).unwrap();
        let config = ConsciousnessConfig::with_prior(vec![0.5, 0.5]);
        let records = run_consciousness(&trace, &config, Epsilon::default()).unwrap();
        let q1 = records[1].memory_prior.clone();
        assert_ne!(q1, vec![0.5, 0.5]);
        for r in &records[2..] {
            for (a, b) in r.memory_prior.iter().zip(&q1) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prior_length_mismatch_is_rejected() {
        let config = ConsciousnessConfig::with_prior(vec![0.5, 0.5]);
        assert_eq!(
            run_consciousness(&demo_trace(), &config, Epsilon::default()).unwrap_err(),
            ConsciousnessError::PriorLengthMismatch {
                prior: 2,
                channels: 3
            }
        );
    }

    #[test]
    fn non_unit_channels_are_rejected() {
        let defs = vec![("a".to_string(), 2.0, 0.0)];
        let trace = Trace::from_schedule(&defs, &[vec![0.5]]).unwrap();
        let config = ConsciousnessConfig::with_prior(vec![1.0]);
        assert_eq!(
            run_consciousness(&trace, &config, Epsilon::default()).unwrap_err(),
            ConsciousnessError::NonUnitChannel("a".into())
        );
    }

    #[test]
    fn config_validation_catches_bad_thresholds() {
        let mut config = demo_config();
        config.tau = 0.0;
        assert!(run_consciousness(&demo_trace(), &config, Epsilon::default()).is_err());
        let mut config = demo_config();
        config.forgetting = 1.1;
        assert!(run_consciousness(&demo_trace(), &config, Epsilon::default()).is_err());
        let mut config = demo_config();
        config.rational_prior = vec![0.6, 0.0, 0.4];
        assert!(run_consciousness(&demo_trace(), &config, Epsilon::default()).is_err());
    }
}
