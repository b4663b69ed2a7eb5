//! Teleology clauses: the variety/order/perfection triple at a single time
//! slice, and windowed drift classification of score sequences into
//! sustained-goodness (G), sustained-wrongdoing (K) and neutral stretches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{contribution_stats, phi, ContributionStats, Epsilon, Snapshot};

#[derive(Debug, Error, PartialEq)]
pub enum TeleologyError {
    #[error("gamma must lie in [0, 1], got {0}")]
    InvalidGamma(f64),
    #[error("need at least 2 time points, got {0}")]
    TooShort(usize),
    #[error("drift window must be >= 1")]
    ZeroWindow,
    #[error("drift threshold must be finite and > 0, got {0}")]
    InvalidThreshold(f64),
    #[error("upper bound must be finite and > 0, got {0}")]
    InvalidUpperBound(f64),
}

/// Exponent of the geometric variety/order mix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerfectionConfig {
    pub gamma: f64,
}

impl PerfectionConfig {
    pub fn new(gamma: f64) -> Result<Self, TeleologyError> {
        if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
            return Err(TeleologyError::InvalidGamma(gamma));
        }
        Ok(PerfectionConfig { gamma })
    }
}

impl Default for PerfectionConfig {
    fn default() -> Self {
        PerfectionConfig { gamma: 0.5 }
    }
}

/// Variety `V` (normalized contribution entropy), order `O` (normalized
/// distance from the worst-case score) and their geometric mix `P`, together
/// with the underlying score and statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfectionReport {
    pub variety: f64,
    pub order: f64,
    pub perfection: f64,
    pub aas: f64,
    pub aas_max: f64,
    pub stats: ContributionStats,
}

/// Windowed drift parameters: horizon `window`, net-change threshold and the
/// per-sequence normalizer for the perfection curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftConfig {
    pub window: usize,
    pub threshold: f64,
    pub upper_bound: f64,
}

impl DriftConfig {
    pub fn new(window: usize, threshold: f64, upper_bound: f64) -> Result<Self, TeleologyError> {
        if window == 0 {
            return Err(TeleologyError::ZeroWindow);
        }
        if !threshold.is_finite() || threshold <= 0.0 {
            return Err(TeleologyError::InvalidThreshold(threshold));
        }
        if !upper_bound.is_finite() || upper_bound <= 0.0 {
            return Err(TeleologyError::InvalidUpperBound(upper_bound));
        }
        Ok(DriftConfig {
            window,
            threshold,
            upper_bound,
        })
    }
}

/// Classification of one window's net score change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriftLabel {
    #[serde(rename = "G")]
    SustainedGoodness,
    #[serde(rename = "K")]
    SustainedWrongdoing,
    #[serde(rename = "neutral")]
    Neutral,
}

impl DriftLabel {
    pub fn describe(self) -> &'static str {
        match self {
            DriftLabel::SustainedGoodness => "G (sustained goodness)",
            DriftLabel::SustainedWrongdoing => "K (sustained wrongdoing)",
            DriftLabel::Neutral => "neutral",
        }
    }
}

/// One window: starting index, net change `seq[start + window] - seq[start]`
/// and its label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftWindow {
    pub start: usize,
    pub net_change: f64,
    pub label: DriftLabel,
}

/// Drift analysis of one score sequence: the perfection curve
/// `P_t = 1 - seq[t] / upper_bound`, the step deltas, and one labelled
/// window per valid starting index (none when the sequence is not longer
/// than the window).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub perfection_sequence: Vec<f64>,
    pub step_deltas: Vec<f64>,
    pub windows: Vec<DriftWindow>,
}

/// Evaluates variety, order and perfection on one snapshot. Variety is the
/// contribution entropy normalized by `log2(active count)` (zero for at most
/// one active channel); order is `1 - AAS / AAS_max` against the all-zero
/// recall worst case; perfection is `V^gamma * O^(1-gamma)`, zero whenever
/// either factor vanishes.
pub fn variety_order_perfection(
    snapshot: &Snapshot,
    eps: Epsilon,
    config: PerfectionConfig,
) -> PerfectionReport {
    let stats = contribution_stats(snapshot, eps);
    let variety = if stats.active_count > 1 && stats.total > 0.0 {
        (stats.entropy / (stats.active_count as f64).log2()).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let aas = stats.total;
    let aas_max = snapshot.total_mass() * phi(0.0, eps.value());
    let order = if aas_max > 0.0 {
        1.0 - aas / aas_max
    } else {
        0.0
    };
    let perfection = if variety > 0.0 && order > 0.0 {
        variety.powf(config.gamma) * order.powf(1.0 - config.gamma)
    } else {
        0.0
    };
    PerfectionReport {
        variety,
        order,
        perfection,
        aas,
        aas_max,
        stats,
    }
}

/// Classifies every length-`window` stretch of a score sequence by its net
/// change: `<= -threshold` is sustained goodness, `>= threshold` sustained
/// wrongdoing, anything else neutral. Ties at exactly the threshold are
/// non-neutral.
pub fn windowed_drift(
    aas_sequence: &[f64],
    config: DriftConfig,
) -> Result<DriftReport, TeleologyError> {
    let len = aas_sequence.len();
    if len < 2 {
        return Err(TeleologyError::TooShort(len));
    }
    let perfection_sequence = aas_sequence
        .iter()
        .map(|v| 1.0 - v / config.upper_bound)
        .collect();
    let step_deltas = aas_sequence.windows(2).map(|w| w[1] - w[0]).collect();
    let mut windows = Vec::new();
    if len > config.window {
        for start in 0..(len - config.window) {
            let net_change = aas_sequence[start + config.window] - aas_sequence[start];
            let label = if net_change <= -config.threshold {
                DriftLabel::SustainedGoodness
            } else if net_change >= config.threshold {
                DriftLabel::SustainedWrongdoing
            } else {
                DriftLabel::Neutral
            };
            windows.push(DriftWindow {
                start,
                net_change,
                label,
            });
        }
    }
    Ok(DriftReport {
        perfection_sequence,
        step_deltas,
        windows,
    })
}
