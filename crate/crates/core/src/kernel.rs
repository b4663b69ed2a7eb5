//! The Artificial Age Score (AAS) kernel.
//!
//! A memory snapshot is a set of named channels, each carrying a structural
//! weight `w`, a redundancy factor `R` and a recall quality `x`. The kernel
//! charges every channel a smoothed-surprisal penalty
//!
//! ```text
//! phi_eps(x) = log2((1 + eps) / (x + eps))
//! ```
//!
//! weighted by its effective mass `alpha = w * (1 - R)`, and the score of a
//! snapshot is the sum of those contributions:
//!
//! ```text
//! AAS = sum_i alpha_i * phi_eps(x_i)
//! ```
//!
//! Perfect recall costs nothing, degraded recall costs more, and fully
//! redundant or weightless channels cost nothing at all. All logarithms are
//! base 2, so scores and entropies are in bits. Every clause bundle in this
//! crate is built on these four primitives.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while constructing kernel inputs.
#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("epsilon must be finite and > 0, got {0}")]
    InvalidEpsilon(f64),
    #[error("recall must be finite, got {0}")]
    NonFiniteRecall(f64),
    #[error("weight must be finite and >= 0, got {0}")]
    InvalidWeight(f64),
    #[error("redundancy must be in [0, 1], got {0}")]
    InvalidRedundancy(f64),
    #[error("duplicate channel name {0:?}")]
    DuplicateChannel(String),
}

/// Smoothing constant for the penalty kernel. Strictly positive; defaults to
/// `1e-3` everywhere unless explicitly overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self, KernelError> {
        if !value.is_finite() || value <= 0.0 {
            return Err(KernelError::InvalidEpsilon(value));
        }
        Ok(Epsilon(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon(1e-3)
    }
}

/// One memory channel: weight `w >= 0`, redundancy `R` in `[0, 1]` and recall
/// quality `x` in `[0, 1]`. Recall is clamped into `[0, 1]` on construction;
/// weight and redundancy out of range are rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    weight: f64,
    redundancy: f64,
    recall: f64,
}

impl Channel {
    pub fn new(weight: f64, redundancy: f64, recall: f64) -> Result<Self, KernelError> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(KernelError::InvalidWeight(weight));
        }
        if !redundancy.is_finite() || !(0.0..=1.0).contains(&redundancy) {
            return Err(KernelError::InvalidRedundancy(redundancy));
        }
        if !recall.is_finite() {
            return Err(KernelError::NonFiniteRecall(recall));
        }
        Ok(Channel {
            weight,
            redundancy,
            recall: recall.clamp(0.0, 1.0),
        })
    }

    /// Unit-weight, zero-redundancy channel; the shape used by most demos.
    pub fn unit(recall: f64) -> Result<Self, KernelError> {
        Channel::new(1.0, 0.0, recall)
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn redundancy(&self) -> f64 {
        self.redundancy
    }

    pub fn recall(&self) -> f64 {
        self.recall
    }

    /// Effective mass `alpha = w * (1 - R)`; derived, never stored.
    pub fn effective_mass(&self) -> f64 {
        self.weight * (1.0 - self.redundancy)
    }

    /// Copy of this channel with a different recall value.
    pub fn with_recall(&self, recall: f64) -> Result<Self, KernelError> {
        Channel::new(self.weight, self.redundancy, recall)
    }
}

/// A named set of channels at one time index. Iteration follows insertion
/// order so every derived statistic and printed report is reproducible.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Snapshot {
    channels: IndexMap<String, Channel>,
    time_index: usize,
}

impl Snapshot {
    pub fn new(time_index: usize) -> Self {
        Snapshot {
            channels: IndexMap::new(),
            time_index,
        }
    }

    pub fn from_channels<I, S>(time_index: usize, channels: I) -> Result<Self, KernelError>
    where
        I: IntoIterator<Item = (S, Channel)>,
        S: Into<String>,
    {
        let mut snapshot = Snapshot::new(time_index);
        for (name, channel) in channels {
            snapshot.insert(name, channel)?;
        }
        Ok(snapshot)
    }

    /// Adds a channel; names must be unique within the snapshot.
    pub fn insert<S: Into<String>>(
        &mut self,
        name: S,
        channel: Channel,
    ) -> Result<(), KernelError> {
        let name = name.into();
        if self.channels.contains_key(&name) {
            return Err(KernelError::DuplicateChannel(name));
        }
        self.channels.insert(name, channel);
        Ok(())
    }

    pub fn time_index(&self) -> usize {
        self.time_index
    }

    pub fn get(&self, name: &str) -> Option<&Channel> {
        self.channels.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.channels.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Channel)> {
        self.channels.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.channels.keys()
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Total effective mass `sum_i alpha_i`.
    pub fn total_mass(&self) -> f64 {
        self.channels.values().map(Channel::effective_mass).sum()
    }
}

/// Per-channel contributions `c_i = alpha_i * phi_eps(x_i)` together with
/// their total `S`, the active count `m`, the share distribution `p` and its
/// Shannon entropy `H` in bits.
///
/// When the total is zero the statistics degenerate: `m = 0`, `H = 0` and
/// every share is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributionStats {
    pub contributions: IndexMap<String, f64>,
    pub total: f64,
    pub active_count: usize,
    pub entropy: f64,
    pub shares: IndexMap<String, f64>,
}

/// The penalty kernel on an already-clamped recall value.
pub(crate) fn phi(recall: f64, eps: f64) -> f64 {
    let x = recall.clamp(0.0, 1.0);
    ((1.0 + eps) / (x + eps)).log2()
}

/// Smoothed surprisal `phi_eps(x) = log2((1 + eps) / (x + eps))`, in bits.
///
/// Recall is clamped into `[0, 1]` first, so `penalty(0.0, eps)` is the
/// finite ceiling `log2((1 + eps) / eps)` and `penalty(1.0, eps)` is exactly
/// zero. Strictly decreasing and convex on `[0, 1]`.
pub fn penalty(recall: f64, eps: Epsilon) -> Result<f64, KernelError> {
    if !recall.is_finite() {
        return Err(KernelError::NonFiniteRecall(recall));
    }
    Ok(phi(recall, eps.value()))
}

/// A channel's contribution `alpha * phi_eps(x)`.
pub fn contribution(channel: &Channel, eps: Epsilon) -> f64 {
    channel.effective_mass() * phi(channel.recall(), eps.value())
}

/// The Artificial Age Score of a snapshot: `sum_i alpha_i * phi_eps(x_i)`.
///
/// Zero exactly when every channel has zero effective mass or perfect recall;
/// an empty snapshot scores zero.
pub fn aas(snapshot: &Snapshot, eps: Epsilon) -> f64 {
    snapshot.iter().map(|(_, ch)| contribution(ch, eps)).sum()
}

/// Shannon entropy in bits of a share slice, with the `0 * log2(0) = 0`
/// convention.
pub(crate) fn entropy_bits<'a, I: IntoIterator<Item = &'a f64>>(shares: I) -> f64 {
    let h: f64 = shares
        .into_iter()
        .filter(|p| **p > 0.0)
        .map(|p| -(p * p.log2()))
        .sum();
    // a lone unit share sums to -0.0; report plain zero
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

/// Contribution statistics of a snapshot: contributions, total, active count,
/// shares and share entropy.
pub fn contribution_stats(snapshot: &Snapshot, eps: Epsilon) -> ContributionStats {
    let contributions: IndexMap<String, f64> = snapshot
        .iter()
        .map(|(name, ch)| (name.clone(), contribution(ch, eps)))
        .collect();
    let total: f64 = contributions.values().sum();
    if total <= 0.0 {
        let shares = contributions.keys().map(|n| (n.clone(), 0.0)).collect();
        return ContributionStats {
            contributions,
            total,
            active_count: 0,
            entropy: 0.0,
            shares,
        };
    }
    let shares: IndexMap<String, f64> = contributions
        .iter()
        .map(|(n, c)| (n.clone(), c / total))
        .collect();
    let active_count = contributions.values().filter(|c| **c > 0.0).count();
    let entropy = entropy_bits(shares.values());
    ContributionStats {
        contributions,
        total,
        active_count,
        entropy,
        shares,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    fn snapshot(channels: &[(&str, Channel)]) -> Snapshot {
        Snapshot::from_channels(0, channels.iter().map(|(n, c)| (n.to_string(), *c))).unwrap()
    }

    #[test]
    fn penalty_at_perfect_recall_is_zero() {
        let e = Epsilon::default();
        assert_eq!(penalty(1.0, e).unwrap(), 0.0);
    }

    #[test]
    fn penalty_matches_reference_values() {
        let e = Epsilon::default();
        // Frozen from direct evaluation of log2((1 + 1e-3) / (x + 1e-3)).
        assert!((penalty(0.8, e).unwrap() - 0.3215678264272831).abs() < 1e-12);
        assert!((penalty(0.0, e).unwrap() - 9.967226258835993).abs() < 1e-12);
        assert!((penalty(0.2, e).unwrap() - 2.3161745676570646).abs() < 1e-12);
    }

    #[test]
    fn penalty_clamps_out_of_range_recall() {
        let e = Epsilon::default();
        assert_eq!(penalty(1.5, e).unwrap(), penalty(1.0, e).unwrap());
        assert_eq!(penalty(-0.25, e).unwrap(), penalty(0.0, e).unwrap());
    }

    #[test]
    fn penalty_rejects_non_finite_recall() {
        let e = Epsilon::default();
        assert!(matches!(
            penalty(f64::NAN, e).unwrap_err(),
            KernelError::NonFiniteRecall(v) if v.is_nan()
        ));
        assert!(penalty(f64::INFINITY, e).is_err());
    }

    #[test]
    fn epsilon_must_be_positive_and_finite() {
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(-1e-3).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
        assert_eq!(Epsilon::default().value(), 1e-3);
    }

    #[test]
    fn effective_mass_discounts_redundancy() {
        assert!((Channel::new(1.0, 0.2, 0.5).unwrap().effective_mass() - 0.8).abs() < EPS);
        assert_eq!(Channel::new(0.0, 0.0, 0.5).unwrap().effective_mass(), 0.0);
        assert_eq!(Channel::new(0.5, 1.0, 0.5).unwrap().effective_mass(), 0.0);
    }

    #[test]
    fn channel_construction_validates_ranges() {
        assert!(Channel::new(-1.0, 0.0, 0.5).is_err());
        assert!(Channel::new(1.0, 1.5, 0.5).is_err());
        assert!(Channel::new(1.0, -0.1, 0.5).is_err());
        assert!(Channel::new(1.0, 0.0, f64::NAN).is_err());
        // recall clamps rather than errors
        assert_eq!(Channel::new(1.0, 0.0, 2.0).unwrap().recall(), 1.0);
        assert_eq!(Channel::new(1.0, 0.0, -0.5).unwrap().recall(), 0.0);
    }

    #[test]
    fn snapshot_rejects_duplicate_names() {
        let mut snap = Snapshot::new(0);
        snap.insert("a", Channel::unit(0.5).unwrap()).unwrap();
        assert_eq!(
            snap.insert("a", Channel::unit(0.6).unwrap()).unwrap_err(),
            KernelError::DuplicateChannel("a".into())
        );
    }

    #[test]
    fn aas_of_empty_snapshot_is_zero() {
        assert_eq!(aas(&Snapshot::new(0), Epsilon::default()), 0.0);
    }

    #[test]
    fn aas_matches_reference_pair() {
        let snap = snapshot(&[
            ("A", Channel::unit(0.8).unwrap()),
            ("notA", Channel::unit(0.6).unwrap()),
        ]);
        assert!((aas(&snap, Epsilon::default()) - 1.0576).abs() < 1e-3);
    }

    #[test]
    fn aas_matches_reference_quad() {
        let snap = snapshot(&[
            ("C1", Channel::unit(0.9).unwrap()),
            ("C2", Channel::unit(0.7).unwrap()),
            ("C3", Channel::unit(0.6).unwrap()),
            ("C4", Channel::unit(0.4).unwrap()),
        ]);
        assert!((aas(&snap, Epsilon::default()) - 2.7216).abs() < 1e-3);
    }

    #[test]
    fn stats_match_reference_trio() {
        let snap = snapshot(&[
            ("m0", Channel::unit(0.80).unwrap()),
            ("m1", Channel::unit(0.82).unwrap()),
            ("m2", Channel::unit(0.79).unwrap()),
        ]);
        let stats = contribution_stats(&snap, Epsilon::default());
        assert!((stats.total - 0.9472).abs() < 1e-3);
        assert!((stats.entropy - 1.5813).abs() < 1e-3);
        assert_eq!(stats.active_count, 3);
    }

    #[test]
    fn stats_match_reference_leaves() {
        let snap = snapshot(&[
            ("N1", Channel::new(0.25, 0.0, 0.5).unwrap()),
            ("N2", Channel::new(0.25, 0.0, 0.7).unwrap()),
            ("N3", Channel::new(0.25, 0.0, 0.9).unwrap()),
            ("N4", Channel::new(0.25, 0.0, 0.7).unwrap()),
        ]);
        let stats = contribution_stats(&snap, Epsilon::default());
        assert!((stats.total - 0.5446).abs() < 1e-3);
        assert!((stats.entropy - 1.7669).abs() < 1e-3);
        assert_eq!(stats.active_count, 4);
    }

    #[test]
    fn single_active_channel_has_zero_entropy_and_unit_share() {
        let snap = snapshot(&[("only", Channel::unit(0.4).unwrap())]);
        let stats = contribution_stats(&snap, Epsilon::default());
        assert_eq!(stats.entropy, 0.0);
        assert!(stats.entropy.is_sign_positive());
        assert!((stats.shares["only"] - 1.0).abs() < EPS);
        assert_eq!(stats.active_count, 1);
    }

    #[test]
    fn degenerate_stats_when_total_is_zero() {
        let snap = snapshot(&[
            ("perfect", Channel::unit(1.0).unwrap()),
            ("ghost", Channel::new(0.0, 0.0, 0.3).unwrap()),
        ]);
        let stats = contribution_stats(&snap, Epsilon::default());
        assert_eq!(stats.total, 0.0);
        assert_eq!(stats.active_count, 0);
        assert_eq!(stats.entropy, 0.0);
        assert!(stats.shares.values().all(|p| *p == 0.0));
    }

    #[test]
    fn shares_sum_to_one_when_active() {
        let snap = snapshot(&[
            ("a", Channel::new(2.0, 0.1, 0.3).unwrap()),
            ("b", Channel::new(0.5, 0.0, 0.9).unwrap()),
            ("c", Channel::new(1.0, 0.6, 0.55).unwrap()),
        ]);
        let stats = contribution_stats(&snap, Epsilon::default());
        let sum: f64 = stats.shares.values().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(stats.entropy <= (stats.active_count as f64).log2() + 1e-12);
    }
}
