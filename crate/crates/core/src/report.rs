//! Report envelope and serialization. JSON output carries every float at
//! full precision and round-trips bit-exactly; text output renders values at
//! four decimals under per-bundle banners so runs can be compared by eye.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::consciousness::{ConsciousnessConfig, ConsciousnessRecord};
use crate::dynamics::{AppetitionRun, CostTrace};
use crate::kernel::ContributionStats;
use crate::ontology::OntologyCheckResult;
use crate::organisation::GroupStats;
use crate::teleology::{DriftReport, PerfectionReport};

/// Output format for [`write_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

/// Top-level report: artifact version, the smoothing constant in effect, the
/// scenario identifier and one payload per clause bundle that ran.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub artifact_version: String,
    pub eps: f64,
    pub scenario: String,
    pub payloads: ReportPayloads,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportPayloads {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ontology: Option<OntologyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consciousness: Option<ConsciousnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmony: Option<HarmonyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub organisation: Option<OrganisationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub teleology: Option<TeleologyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OntologyReport {
    pub regimes: Vec<AgingRegimeReport>,
    pub checks: Vec<OntologyCheckResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgingRegimeReport {
    pub name: String,
    pub decay: f64,
    pub trajectory: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsReport {
    pub channels: Vec<String>,
    pub trajectory: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_abs_delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_bound: Option<f64>,
    pub cost_traces: Vec<CostTrace>,
    pub pairwise_distances: Vec<PairDistance>,
    pub internal_principle: Vec<InternalPrincipleCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appetition: Option<AppetitionRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDistance {
    pub first: String,
    pub second: String,
    pub distance: f64,
}

/// Largest absolute difference of one channel's contribution series between
/// the original trace and the trace with every other channel reversed in
/// time. Always exactly zero: contributions see only their own column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InternalPrincipleCheck {
    pub channel: String,
    pub max_abs_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsciousnessReport {
    pub channels: Vec<String>,
    pub config: ConsciousnessConfig,
    pub recalls: Vec<Vec<f64>>,
    pub records: Vec<ConsciousnessRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonyReport {
    pub base_aas: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_contradiction: Option<PenaltyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sufficient_reason: Option<PenaltyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soul_body: Option<SoulBodyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_action: Option<PenaltyReport>,
}

/// A penalty together with its total on top of the base score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyReport {
    pub penalty: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoulBodyReport {
    pub soul_aas: f64,
    pub body_aas: f64,
    pub penalty: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrganisationReport {
    pub depths: Vec<DepthReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupStats>,
}

/// One hierarchy level after bottom-up recall aggregation; `channels` maps
/// each name to its `(recall, effective mass)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    pub channels: IndexMap<String, (f64, f64)>,
    pub aas: f64,
    pub stats: ContributionStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleologyReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perfection: Option<SlicePerfection>,
    pub drift: Vec<DriftAnalysis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicePerfection {
    pub gamma: f64,
    pub report: PerfectionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftAnalysis {
    pub name: String,
    pub window: usize,
    pub threshold: f64,
    pub upper_bound: f64,
    pub values: Vec<f64>,
    pub report: DriftReport,
}

/// Serializes a report. JSON is stable-key-ordered and full precision; text
/// is the four-decimal console layout.
pub fn write_report(envelope: &ReportEnvelope, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(envelope).expect("report is serializable");
            out.push('\n');
            out
        }
        ReportFormat::Text => render_text(envelope),
    }
}

fn fmt4(value: f64) -> String {
    format!("{value:.4}")
}

fn fmt4_list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| fmt4(*v)).collect();
    format!("[{}]", items.join(", "))
}

fn fmt4_map(map: &IndexMap<String, f64>) -> String {
    let items: Vec<String> = map
        .iter()
        .map(|(k, v)| format!("{k}: {}", fmt4(*v)))
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn render_text(envelope: &ReportEnvelope) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# AAS report — scenario: {} (eps = {}, artifact {})",
        envelope.scenario, envelope.eps, envelope.artifact_version
    );
    let p = &envelope.payloads;
    if let Some(r) = &p.ontology {
        render_ontology(&mut out, r);
    }
    if let Some(r) = &p.dynamics {
        render_dynamics(&mut out, r);
    }
    if let Some(r) = &p.consciousness {
        render_consciousness(&mut out, r);
    }
    if let Some(r) = &p.harmony {
        render_harmony(&mut out, r);
    }
    if let Some(r) = &p.organisation {
        render_organisation(&mut out, r);
    }
    if let Some(r) = &p.teleology {
        render_teleology(&mut out, r);
    }
    out
}

fn render_ontology(out: &mut String, report: &OntologyReport) {
    let _ = writeln!(out, "\n=== Ontology: ageing and structural checks ===");
    if !report.regimes.is_empty() {
        let header: Vec<String> = report
            .regimes
            .iter()
            .map(|r| format!("AAS_{}", r.name))
            .collect();
        let _ = writeln!(out, "t\t{}", header.join("\t"));
        let steps = report
            .regimes
            .iter()
            .map(|r| r.trajectory.len())
            .max()
            .unwrap_or(0);
        for t in 0..steps {
            let row: Vec<String> = report
                .regimes
                .iter()
                .map(|r| r.trajectory.get(t).map_or(String::from("-"), |v| fmt4(*v)))
                .collect();
            let _ = writeln!(out, "{t}\t{}", row.join("\t"));
        }
    }
    for check in &report.checks {
        let label = match check.check {
            crate::ontology::OntologyCheck::Refinement => "Refinement invariance",
            crate::ontology::OntologyCheck::Ghost => "Ghost suppression",
            crate::ontology::OntologyCheck::Dedup => "Clone deduplication",
        };
        let _ = writeln!(
            out,
            "{label}: {} {} {}",
            check.holds,
            fmt4(check.lhs_score),
            fmt4(check.rhs_score)
        );
    }
}

fn render_dynamics(out: &mut String, report: &DynamicsReport) {
    let _ = writeln!(out, "\n=== Dynamics: continuous change ===");
    let _ = writeln!(out, "AAS trajectory: {}", fmt4_list(&report.trajectory));
    if let Some(deltas) = &report.step_deltas {
        let _ = writeln!(out, "Δ AAS per step: {}", fmt4_list(deltas));
    }
    if let Some(max_abs) = report.max_abs_delta {
        let _ = writeln!(out, "max |ΔAAS| = {}", fmt4(max_abs));
    }
    if let Some(bound) = report.lipschitz_bound {
        let _ = writeln!(out, "max bound  = {}", fmt4(bound));
    }
    if !report.internal_principle.is_empty() {
        let _ = writeln!(out, "\n=== Dynamics: internal principle ===");
        for check in &report.internal_principle {
            let _ = writeln!(
                out,
                "channel {}: max |diff| under reversal of the others = {}",
                check.channel,
                fmt4(check.max_abs_difference)
            );
        }
    }
    if !report.cost_traces.is_empty() {
        let _ = writeln!(out, "\n=== Dynamics: cost traces ===");
        for trace in &report.cost_traces {
            let _ = writeln!(
                out,
                "cost_{}(t): {}",
                trace.channel_name,
                fmt4_list(&trace.costs)
            );
        }
        for trace in &report.cost_traces {
            let _ = writeln!(
                out,
                "C_{} (sum)  = {}",
                trace.channel_name,
                fmt4(trace.total)
            );
            let _ = writeln!(
                out,
                "H_time({}) = {}",
                trace.channel_name,
                fmt4(trace.time_entropy)
            );
        }
        for pair in &report.pairwise_distances {
            let _ = writeln!(
                out,
                "D_T({},{}) = {}",
                pair.first,
                pair.second,
                fmt4(pair.distance)
            );
        }
    }
    if let Some(run) = &report.appetition {
        let _ = writeln!(out, "\n=== Dynamics: appetition ===");
        let _ = writeln!(out, "target g = {}, rate η = {}", run.target, run.rate);
        let _ = writeln!(out, "x_t:               {}", fmt4_list(&run.states));
        let _ = writeln!(out, "AAS_t:             {}", fmt4_list(&run.aas_values));
        let _ = writeln!(out, "N_t (step size):   {}", fmt4_list(&run.step_sizes));
        let _ = writeln!(
            out,
            "AAS_t - AAS_{{t+1}}: {}",
            fmt4_list(&run.penalty_drops)
        );
    }
}

fn render_consciousness(out: &mut String, report: &ConsciousnessReport) {
    let _ = writeln!(out, "\n=== Representation and consciousness ===");
    let _ = writeln!(out, "channels: {:?}", report.channels);
    let _ = writeln!(
        out,
        "tau={}, delta={}, lambda={}",
        report.config.tau, report.config.delta_sharpness, report.config.forgetting
    );
    for record in &report.records {
        let _ = writeln!(out, "t = {}", record.time_index);
        if let Some(xs) = report.recalls.get(record.time_index) {
            let _ = writeln!(out, "  x_t         = {}", fmt4_list(xs));
        }
        let _ = writeln!(out, "  c_t         = {}", fmt4_list(&record.penalties));
        let _ = writeln!(out, "  S_t         = {}", fmt4(record.total));
        let _ = writeln!(out, "  rho_t       = {}", fmt4(record.dominance));
        let _ = writeln!(out, "  H_t         = {}", fmt4(record.entropy));
        let _ = writeln!(out, "  ApperLvl    = {}", fmt4(record.apperception_level));
        let _ = writeln!(out, "  tau_dizzy   = {}", record.tau_dizzy);
        let _ = writeln!(out, "  delta_dizzy = {}", record.delta_dizzy);
        let _ = writeln!(out, "  Consec_t    = {}", fmt4(record.coherence));
        let _ = writeln!(out, "  Reason_t    = {}", fmt4(record.reason));
        let _ = writeln!(out, "{}", "-".repeat(60));
    }
}

fn render_harmony(out: &mut String, report: &HarmonyReport) {
    if let Some(pc) = &report.non_contradiction {
        let _ = writeln!(out, "\n=== Harmony: non-contradiction (PC) ===");
        let _ = writeln!(out, "Base AAS_t   = {}", fmt4(report.base_aas));
        let _ = writeln!(out, "PC penalty_t = {}", fmt4(pc.penalty));
        let _ = writeln!(out, "Total AAS_t  = {}", fmt4(pc.total));
    }
    if let Some(psr) = &report.sufficient_reason {
        let _ = writeln!(out, "\n=== Harmony: sufficient reason (PSR) ===");
        let _ = writeln!(out, "PSR penalty_t = {}", fmt4(psr.penalty));
        let _ = writeln!(out, "Total AAS_t   = {}", fmt4(psr.total));
    }
    if let Some(sb) = &report.soul_body {
        let _ = writeln!(out, "\n=== Harmony: soul/body dual view ===");
        let _ = writeln!(out, "AAS_t(soul) = {}", fmt4(sb.soul_aas));
        let _ = writeln!(out, "AAS_t(body) = {}", fmt4(sb.body_aas));
        let _ = writeln!(out, "HARM_t      = {}", fmt4(sb.penalty));
        let _ = writeln!(out, "Total AAS_t = {}", fmt4(sb.total));
    }
    if let Some(goal) = &report.goal_action {
        let _ = writeln!(out, "\n=== Harmony: goal/action alignment ===");
        let _ = writeln!(out, "HARM_t      = {}", fmt4(goal.penalty));
        let _ = writeln!(out, "Total AAS_t = {}", fmt4(goal.total));
    }
}

fn render_organisation(out: &mut String, report: &OrganisationReport) {
    let _ = writeln!(out, "\n=== Organisation: refinement across depths ===");
    // deepest level first, the way the scores propagate
    for depth in report.depths.iter().rev() {
        let _ = writeln!(out, "Depth s = {}", depth.depth);
        let channels: Vec<String> = depth
            .channels
            .iter()
            .map(|(name, (recall, mass))| format!("{name}: ({}, {})", fmt4(*recall), mass))
            .collect();
        let _ = writeln!(out, "  channels: {{{}}}", channels.join(", "));
        let _ = writeln!(out, "  AAS^(s)        = {}", fmt4(depth.aas));
        let _ = writeln!(out, "  total S        = {}", fmt4(depth.stats.total));
        let _ = writeln!(out, "  active count m = {}", depth.stats.active_count);
        let _ = writeln!(out, "  H_contrib      = {}", fmt4(depth.stats.entropy));
    }
    if let Some(groups) = &report.groups {
        let _ = writeln!(out, "\n=== Organisation: dominant groups ===");
        let _ = writeln!(
            out,
            "Leaf contributions: {}",
            fmt4_map(&groups.leaf_contributions)
        );
        let _ = writeln!(out, "Total S (leaves):   {}", fmt4(groups.total));
        let _ = writeln!(out, "Group masses:       {}", fmt4_map(&groups.masses));
        let _ = writeln!(out, "Group shares p(G):  {}", fmt4_map(&groups.shares));
        let _ = writeln!(out, "H_grp             = {}", fmt4(groups.group_entropy));
        let _ = writeln!(
            out,
            "Dominant group G* = {}",
            groups.dominant.as_deref().unwrap_or("none")
        );
    }
}

fn render_teleology(out: &mut String, report: &TeleologyReport) {
    if let Some(slice) = &report.perfection {
        let _ = writeln!(out, "\n=== Teleology: variety, order, perfection ===");
        let _ = writeln!(
            out,
            "Contributions c_i: {}",
            fmt4_map(&slice.report.stats.contributions)
        );
        let _ = writeln!(out, "AAS_t            = {}", fmt4(slice.report.aas));
        let _ = writeln!(out, "AAS_max          = {}", fmt4(slice.report.aas_max));
        let _ = writeln!(out, "Variety    V_t   = {}", fmt4(slice.report.variety));
        let _ = writeln!(out, "Order      O_t   = {}", fmt4(slice.report.order));
        let _ = writeln!(out, "Perfection P_t   = {}", fmt4(slice.report.perfection));
        let _ = writeln!(
            out,
            "Active count m_t = {}",
            slice.report.stats.active_count
        );
        let _ = writeln!(
            out,
            "H_contrib        = {}",
            fmt4(slice.report.stats.entropy)
        );
    }
    for drift in &report.drift {
        let _ = writeln!(out, "\n=== Teleology: windowed drift — {} ===", drift.name);
        let _ = writeln!(out, "AAS sequence: {}", fmt4_list(&drift.values));
        let _ = writeln!(
            out,
            "P_t sequence: {}",
            fmt4_list(&drift.report.perfection_sequence)
        );
        let _ = writeln!(
            out,
            "Δ_t sequence: {}",
            fmt4_list(&drift.report.step_deltas)
        );
        let _ = writeln!(
            out,
            "Windowed sums (L = {}, η = {}):",
            drift.window, drift.threshold
        );
        for window in &drift.report.windows {
            let _ = writeln!(
                out,
                "k = {}: AAS[{}]→AAS[{}] sum Δ = {} -> {}",
                window.start,
                window.start,
                window.start + drift.window,
                fmt4(window.net_change),
                window.label.describe()
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_envelope() -> ReportEnvelope {
        ReportEnvelope {
            artifact_version: "0.1.0".to_string(),
            eps: 1e-3,
            scenario: "empty".to_string(),
            payloads: ReportPayloads::default(),
        }
    }

    #[test]
    fn empty_payloads_serialize_to_an_empty_map() {
        let json = write_report(&empty_envelope(), ReportFormat::Json);
        assert!(json.contains("\"payloads\": {}"));
        let parsed: ReportEnvelope = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, empty_envelope());
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let envelope = ReportEnvelope {
            artifact_version: "0.1.0".to_string(),
            eps: 1e-3,
            scenario: "demo".to_string(),
            payloads: ReportPayloads {
                harmony: Some(HarmonyReport {
                    base_aas: 1.057572904552091,
                    non_contradiction: Some(PenaltyReport {
                        penalty: 1.1502426355806121,
                        total: 2.207815540132703,
                    }),
                    sufficient_reason: None,
                    soul_body: None,
                    goal_action: None,
                }),
                ..Default::default()
            },
        };
        let first = write_report(&envelope, ReportFormat::Json);
        let parsed: ReportEnvelope = serde_json::from_str(&first).unwrap();
        let second = write_report(&parsed, ReportFormat::Json);
        assert_eq!(first, second);
        assert_eq!(parsed, envelope);
    }

    #[test]
    fn text_report_carries_regime_columns() {
        let envelope = ReportEnvelope {
            artifact_version: "0.1.0".to_string(),
            eps: 1e-3,
            scenario: "demo".to_string(),
            payloads: ReportPayloads {
                ontology: Some(OntologyReport {
                    regimes: vec![
                        AgingRegimeReport {
                            name: "young".into(),
                            decay: 0.98,
                            trajectory: vec![0.3861, 0.4443],
                        },
                        AgingRegimeReport {
                            name: "old".into(),
                            decay: 0.90,
                            trajectory: vec![0.3861, 0.6897],
                        },
                    ],
                    checks: vec![],
                }),
                ..Default::default()
            },
        };
        let text = write_report(&envelope, ReportFormat::Text);
        assert!(text.contains("AAS_young"));
        assert!(text.contains("AAS_old"));
        assert!(text.contains("0.3861"));
    }
}
