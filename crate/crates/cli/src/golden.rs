//! Golden values for the six bundled reference scenarios and the comparison
//! harness `repro` runs against them. The tables are static data, frozen at
//! four decimals; they are never recomputed from the code under test.

use aas_core::report::ReportEnvelope;
use aas_core::teleology::DriftLabel;
use serde::Serialize;

/// Absolute tolerance for four-decimal golden scalars.
pub const TOLERANCE: f64 = 1e-3;

/// One golden comparison, already evaluated.
#[derive(Debug, Clone, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl GoldenCheck {
    fn scalar(name: impl Into<String>, expected: f64, actual: f64) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: format!("{expected:.4}"),
            actual: format!("{actual:.4}"),
            passed: (expected - actual).abs() <= TOLERANCE,
        }
    }

    fn exact(name: impl Into<String>, expected: f64, actual: f64) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: format!("{expected}"),
            actual: format!("{actual}"),
            passed: expected == actual,
        }
    }

    fn integer(name: impl Into<String>, expected: usize, actual: usize) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed: expected == actual,
        }
    }

    fn flag(name: impl Into<String>, expected: bool, actual: bool) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed: expected == actual,
        }
    }

    fn label(name: impl Into<String>, expected: &str, actual: &str) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed: expected == actual,
        }
    }

    fn missing(name: impl Into<String>) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: "present".to_string(),
            actual: "missing".to_string(),
            passed: false,
        }
    }
}

pub fn render_checks(system: &str, checks: &[GoldenCheck], out: &mut String) {
    use std::fmt::Write as _;
    let _ = writeln!(
        out,
        "--- golden checks: {system} (abs tolerance {TOLERANCE}) ---"
    );
    for check in checks {
        let _ = writeln!(
            out,
            "{} {:<38} expected {:<12} actual {}",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.expected,
            check.actual
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        out,
        "{system}: {passed}/{} golden checks passed",
        checks.len()
    );
}

/// Runs the golden table of one bundled system against its report.
pub fn check_system(system: &str, envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    match system {
        "system1" => check_system1(envelope),
        "system2" => check_system2(envelope),
        "system3" => check_system3(envelope),
        "system4" => check_system4(envelope),
        "system5" => check_system5(envelope),
        "system6" => check_system6(envelope),
        other => vec![GoldenCheck::missing(format!("golden table for {other}"))],
    }
}

const SYSTEM1_AGING: &[(&str, usize, f64)] = &[
    ("young", 0, 0.3861),
    ("young", 1, 0.4443),
    ("young", 4, 0.6189),
    ("old", 0, 0.3861),
    ("old", 1, 0.6897),
    ("old", 4, 1.6004),
];

const SYSTEM1_CHECKS: &[(&str, f64)] =
    &[("refinement", 0.2573), ("ghost", 0.2573), ("dedup", 0.5145)];

fn check_system1(envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    let Some(report) = &envelope.payloads.ontology else {
        return vec![GoldenCheck::missing("ontology payload")];
    };
    let mut checks = Vec::new();
    for &(regime, t, expected) in SYSTEM1_AGING {
        let actual = report
            .regimes
            .iter()
            .find(|r| r.name == regime)
            .and_then(|r| r.trajectory.get(t))
            .copied();
        match actual {
            Some(actual) => checks.push(GoldenCheck::scalar(
                format!("aas_{regime}[{t}]"),
                expected,
                actual,
            )),
            None => checks.push(GoldenCheck::missing(format!("aas_{regime}[{t}]"))),
        }
    }
    for (index, &(name, expected)) in SYSTEM1_CHECKS.iter().enumerate() {
        match report.checks.get(index) {
            Some(result) => {
                checks.push(GoldenCheck::scalar(
                    format!("{name}_lhs"),
                    expected,
                    result.lhs_score,
                ));
                checks.push(GoldenCheck::scalar(
                    format!("{name}_rhs"),
                    expected,
                    result.rhs_score,
                ));
                checks.push(GoldenCheck::flag(
                    format!("{name}_holds"),
                    true,
                    result.holds,
                ));
            }
            None => checks.push(GoldenCheck::missing(format!("{name} check"))),
        }
    }
    checks
}

const SYSTEM2_TRAJECTORY: &[f64] = &[3.0522, 2.5949, 2.5105, 2.4700, 2.4700, 2.5105];
const SYSTEM2_MAX_ABS_DELTA: f64 = 0.4573;
const SYSTEM2_BOUND: f64 = 288.5390;
const SYSTEM2_COSTS: &[(&str, f64, f64)] = &[
    // channel, total, time entropy
    ("A", 9.0303, 2.5277),
    ("B", 6.5778, 2.5429),
];
const SYSTEM2_DISTANCE: f64 = 3.8182;
const SYSTEM2_APPETITION_X5: f64 = 0.7689;
const SYSTEM2_APPETITION_AAS0: f64 = 0.9986;
const SYSTEM2_APPETITION_AAS5: f64 = 0.3786;

fn check_system2(envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    let Some(report) = &envelope.payloads.dynamics else {
        return vec![GoldenCheck::missing("dynamics payload")];
    };
    let mut checks = Vec::new();
    for (t, &expected) in SYSTEM2_TRAJECTORY.iter().enumerate() {
        match report.trajectory.get(t) {
            Some(&actual) => {
                checks.push(GoldenCheck::scalar(format!("aas[{t}]"), expected, actual))
            }
            None => checks.push(GoldenCheck::missing(format!("aas[{t}]"))),
        }
    }
    match report.max_abs_delta {
        Some(actual) => checks.push(GoldenCheck::scalar(
            "max_abs_delta",
            SYSTEM2_MAX_ABS_DELTA,
            actual,
        )),
        None => checks.push(GoldenCheck::missing("max_abs_delta")),
    }
    match report.lipschitz_bound {
        Some(actual) => checks.push(GoldenCheck::scalar(
            "lipschitz_bound",
            SYSTEM2_BOUND,
            actual,
        )),
        None => checks.push(GoldenCheck::missing("lipschitz_bound")),
    }
    match report.internal_principle.iter().find(|c| c.channel == "A") {
        Some(check) => checks.push(GoldenCheck::exact(
            "internal_principle_diff_A",
            0.0,
            check.max_abs_difference,
        )),
        None => checks.push(GoldenCheck::missing("internal_principle_diff_A")),
    }
    for &(channel, total, entropy) in SYSTEM2_COSTS {
        match report
            .cost_traces
            .iter()
            .find(|c| c.channel_name == channel)
        {
            Some(trace) => {
                checks.push(GoldenCheck::scalar(
                    format!("C_{channel}"),
                    total,
                    trace.total,
                ));
                checks.push(GoldenCheck::scalar(
                    format!("H_time_{channel}"),
                    entropy,
                    trace.time_entropy,
                ));
            }
            None => checks.push(GoldenCheck::missing(format!("cost trace {channel}"))),
        }
    }
    match report
        .pairwise_distances
        .iter()
        .find(|d| d.first == "A" && d.second == "B")
    {
        Some(pair) => checks.push(GoldenCheck::scalar(
            "D_T(A,B)",
            SYSTEM2_DISTANCE,
            pair.distance,
        )),
        None => checks.push(GoldenCheck::missing("D_T(A,B)")),
    }
    match &report.appetition {
        Some(run) => {
            checks.push(GoldenCheck::scalar(
                "appetition_x[5]",
                SYSTEM2_APPETITION_X5,
                run.states.last().copied().unwrap_or(f64::NAN),
            ));
            checks.push(GoldenCheck::scalar(
                "appetition_aas[0]",
                SYSTEM2_APPETITION_AAS0,
                run.aas_values.first().copied().unwrap_or(f64::NAN),
            ));
            checks.push(GoldenCheck::scalar(
                "appetition_aas[5]",
                SYSTEM2_APPETITION_AAS5,
                run.aas_values.last().copied().unwrap_or(f64::NAN),
            ));
        }
        None => checks.push(GoldenCheck::missing("appetition run")),
    }
    checks
}

// per step: total, dominance, entropy, apperception, coherence, reason,
// tau dizzy, delta dizzy
#[allow(clippy::type_complexity)]
const SYSTEM3_STEPS: &[(f64, f64, f64, f64, f64, f64, bool, bool)] = &[
    (0.9472, 0.3586, 1.5813, 0.0008, 0.3333, -0.3809, false, true),
    (1.6558, 0.7970, 0.9294, 0.3297, 0.7970, 4.9517, false, false),
    (0.8938, 0.3598, 1.5810, 0.0009, 0.3147, 0.0856, false, false),
    (0.1767, 0.4185, 1.5534, 0.0083, 0.2851, 0.0635, false, true),
    (
        1.3672, 0.7304, 1.1090, 0.2193, 0.4935, -0.6354, false, false,
    ),
    (
        0.7028, 0.3575, 1.5824, 0.0006, 0.3398, -0.1611, false, false,
    ),
];

fn check_system3(envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    let Some(report) = &envelope.payloads.consciousness else {
        return vec![GoldenCheck::missing("consciousness payload")];
    };
    let mut checks = Vec::new();
    for (t, &(total, dominance, entropy, apper, coherence, reason, tau, delta)) in
        SYSTEM3_STEPS.iter().enumerate()
    {
        let Some(record) = report.records.get(t) else {
            checks.push(GoldenCheck::missing(format!("record[{t}]")));
            continue;
        };
        checks.push(GoldenCheck::scalar(format!("S[{t}]"), total, record.total));
        checks.push(GoldenCheck::scalar(
            format!("rho[{t}]"),
            dominance,
            record.dominance,
        ));
        checks.push(GoldenCheck::scalar(
            format!("H[{t}]"),
            entropy,
            record.entropy,
        ));
        checks.push(GoldenCheck::scalar(
            format!("apper_level[{t}]"),
            apper,
            record.apperception_level,
        ));
        checks.push(GoldenCheck::scalar(
            format!("coherence[{t}]"),
            coherence,
            record.coherence,
        ));
        checks.push(GoldenCheck::scalar(
            format!("reason[{t}]"),
            reason,
            record.reason,
        ));
        checks.push(GoldenCheck::flag(
            format!("tau_dizzy[{t}]"),
            tau,
            record.tau_dizzy,
        ));
        checks.push(GoldenCheck::flag(
            format!("delta_dizzy[{t}]"),
            delta,
            record.delta_dizzy,
        ));
    }
    checks
}

const SYSTEM4_BASE: f64 = 1.0576;
const SYSTEM4_PC: f64 = 1.1502;
const SYSTEM4_PC_TOTAL: f64 = 2.2078;
const SYSTEM4_PSR: f64 = 1.5333;
const SYSTEM4_PSR_TOTAL: f64 = 2.5909;
const SYSTEM4_SOUL: f64 = 2.6377;
const SYSTEM4_BODY: f64 = 2.4102;
const SYSTEM4_HARM78: f64 = 0.1478;
const SYSTEM4_HARM78_TOTAL: f64 = 5.1958;
const SYSTEM4_HARM79_TOTAL: f64 = 1.0576;

fn check_system4(envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    let Some(report) = &envelope.payloads.harmony else {
        return vec![GoldenCheck::missing("harmony payload")];
    };
    let mut checks = vec![GoldenCheck::scalar(
        "base_aas",
        SYSTEM4_BASE,
        report.base_aas,
    )];
    match &report.non_contradiction {
        Some(pc) => {
            checks.push(GoldenCheck::scalar("pc_penalty", SYSTEM4_PC, pc.penalty));
            checks.push(GoldenCheck::scalar("pc_total", SYSTEM4_PC_TOTAL, pc.total));
        }
        None => checks.push(GoldenCheck::missing("pc payload")),
    }
    match &report.sufficient_reason {
        Some(psr) => {
            checks.push(GoldenCheck::scalar("psr_penalty", SYSTEM4_PSR, psr.penalty));
            checks.push(GoldenCheck::scalar(
                "psr_total",
                SYSTEM4_PSR_TOTAL,
                psr.total,
            ));
        }
        None => checks.push(GoldenCheck::missing("psr payload")),
    }
    match &report.soul_body {
        Some(sb) => {
            checks.push(GoldenCheck::scalar("soul_aas", SYSTEM4_SOUL, sb.soul_aas));
            checks.push(GoldenCheck::scalar("body_aas", SYSTEM4_BODY, sb.body_aas));
            checks.push(GoldenCheck::scalar("harm78", SYSTEM4_HARM78, sb.penalty));
            checks.push(GoldenCheck::scalar(
                "harm78_total",
                SYSTEM4_HARM78_TOTAL,
                sb.total,
            ));
        }
        None => checks.push(GoldenCheck::missing("soul/body payload")),
    }
    match &report.goal_action {
        Some(goal) => {
            checks.push(GoldenCheck::exact("harm79", 0.0, goal.penalty));
            checks.push(GoldenCheck::scalar(
                "harm79_total",
                SYSTEM4_HARM79_TOTAL,
                goal.total,
            ));
        }
        None => checks.push(GoldenCheck::missing("goal/action payload")),
    }
    checks
}

// depth, aas, entropy, active count
const SYSTEM5_DEPTHS: &[(usize, f64, f64, usize)] = &[
    (0, 0.5140, 0.0, 1),
    (1, 0.5288, 0.8862, 2),
    (2, 0.5446, 1.7669, 4),
];
const SYSTEM5_RECALLS: &[(usize, &str, f64)] = &[(0, "L", 0.7), (1, "H1", 0.6), (1, "H2", 0.8)];
const SYSTEM5_LEAVES: &[(&str, f64)] = &[
    ("N1", 0.2496),
    ("N2", 0.1285),
    ("N3", 0.0380),
    ("N4", 0.1285),
];
const SYSTEM5_MASSES: &[(&str, f64)] = &[("G1", 0.3781), ("G2", 0.1664)];
const SYSTEM5_SHARES: &[(&str, f64)] = &[("G1", 0.6944), ("G2", 0.3056)];
const SYSTEM5_GROUP_ENTROPY: f64 = 0.8881;
const SYSTEM5_DOMINANT: &str = "G1";

fn check_system5(envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    let Some(report) = &envelope.payloads.organisation else {
        return vec![GoldenCheck::missing("organisation payload")];
    };
    let mut checks = Vec::new();
    for &(depth, aas, entropy, active) in SYSTEM5_DEPTHS {
        let Some(d) = report.depths.get(depth) else {
            checks.push(GoldenCheck::missing(format!("depth[{depth}]")));
            continue;
        };
        checks.push(GoldenCheck::scalar(
            format!("aas_depth[{depth}]"),
            aas,
            d.aas,
        ));
        if entropy == 0.0 {
            checks.push(GoldenCheck::exact(
                format!("entropy_depth[{depth}]"),
                0.0,
                d.stats.entropy,
            ));
        } else {
            checks.push(GoldenCheck::scalar(
                format!("entropy_depth[{depth}]"),
                entropy,
                d.stats.entropy,
            ));
        }
        checks.push(GoldenCheck::integer(
            format!("active_depth[{depth}]"),
            active,
            d.stats.active_count,
        ));
    }
    for &(depth, name, expected) in SYSTEM5_RECALLS {
        let actual = report
            .depths
            .get(depth)
            .and_then(|d| d.channels.get(name))
            .map(|(recall, _)| *recall);
        match actual {
            Some(actual) => checks.push(GoldenCheck::scalar(
                format!("recall_{name}"),
                expected,
                actual,
            )),
            None => checks.push(GoldenCheck::missing(format!("recall_{name}"))),
        }
    }
    let Some(groups) = &report.groups else {
        checks.push(GoldenCheck::missing("group payload"));
        return checks;
    };
    for &(leaf, expected) in SYSTEM5_LEAVES {
        match groups.leaf_contributions.get(leaf) {
            Some(&actual) => checks.push(GoldenCheck::scalar(
                format!("contrib_{leaf}"),
                expected,
                actual,
            )),
            None => checks.push(GoldenCheck::missing(format!("contrib_{leaf}"))),
        }
    }
    for &(group, expected) in SYSTEM5_MASSES {
        match groups.masses.get(group) {
            Some(&actual) => checks.push(GoldenCheck::scalar(
                format!("mass_{group}"),
                expected,
                actual,
            )),
            None => checks.push(GoldenCheck::missing(format!("mass_{group}"))),
        }
    }
    for &(group, expected) in SYSTEM5_SHARES {
        match groups.shares.get(group) {
            Some(&actual) => checks.push(GoldenCheck::scalar(
                format!("share_{group}"),
                expected,
                actual,
            )),
            None => checks.push(GoldenCheck::missing(format!("share_{group}"))),
        }
    }
    checks.push(GoldenCheck::scalar(
        "group_entropy",
        SYSTEM5_GROUP_ENTROPY,
        groups.group_entropy,
    ));
    checks.push(GoldenCheck::label(
        "dominant_group",
        SYSTEM5_DOMINANT,
        groups.dominant.as_deref().unwrap_or("none"),
    ));
    checks
}

const SYSTEM6_AAS: f64 = 2.7216;
const SYSTEM6_AAS_MAX: f64 = 39.8689;
const SYSTEM6_VARIETY: f64 = 0.8515;
const SYSTEM6_ORDER: f64 = 0.9317;
const SYSTEM6_PERFECTION: f64 = 0.8907;
const SYSTEM6_ENTROPY: f64 = 1.7030;
const SYSTEM6_CONTRIBUTIONS: &[(&str, f64)] = &[
    ("C1", 0.1518),
    ("C2", 0.5140),
    ("C3", 0.7360),
    ("C4", 1.3198),
];
// sequence name, nets, labels, first and last perfection values
#[allow(clippy::type_complexity)]
const SYSTEM6_DRIFT: &[(&str, [f64; 3], [DriftLabel; 3], f64, f64)] = &[
    (
        "good",
        [-0.5, -0.4, -0.4],
        [DriftLabel::SustainedGoodness; 3],
        0.2,
        0.9,
    ),
    (
        "bad",
        [0.5, 0.5, 0.4],
        [DriftLabel::SustainedWrongdoing; 3],
        0.8,
        0.1,
    ),
];

fn check_system6(envelope: &ReportEnvelope) -> Vec<GoldenCheck> {
    let Some(report) = &envelope.payloads.teleology else {
        return vec![GoldenCheck::missing("teleology payload")];
    };
    let mut checks = Vec::new();
    match &report.perfection {
        Some(slice) => {
            checks.push(GoldenCheck::scalar("aas", SYSTEM6_AAS, slice.report.aas));
            checks.push(GoldenCheck::scalar(
                "aas_max",
                SYSTEM6_AAS_MAX,
                slice.report.aas_max,
            ));
            checks.push(GoldenCheck::scalar(
                "variety",
                SYSTEM6_VARIETY,
                slice.report.variety,
            ));
            checks.push(GoldenCheck::scalar(
                "order",
                SYSTEM6_ORDER,
                slice.report.order,
            ));
            checks.push(GoldenCheck::scalar(
                "perfection",
                SYSTEM6_PERFECTION,
                slice.report.perfection,
            ));
            checks.push(GoldenCheck::scalar(
                "entropy",
                SYSTEM6_ENTROPY,
                slice.report.stats.entropy,
            ));
            for &(channel, expected) in SYSTEM6_CONTRIBUTIONS {
                match slice.report.stats.contributions.get(channel) {
                    Some(&actual) => checks.push(GoldenCheck::scalar(
                        format!("contrib_{channel}"),
                        expected,
                        actual,
                    )),
                    None => checks.push(GoldenCheck::missing(format!("contrib_{channel}"))),
                }
            }
        }
        None => checks.push(GoldenCheck::missing("perfection payload")),
    }
    for &(name, nets, labels, p_first, p_last) in SYSTEM6_DRIFT {
        let Some(analysis) = report.drift.iter().find(|d| d.name == name) else {
            checks.push(GoldenCheck::missing(format!("drift sequence {name}")));
            continue;
        };
        for (k, (&net, &label)) in nets.iter().zip(labels.iter()).enumerate() {
            match analysis.report.windows.get(k) {
                Some(window) => {
                    checks.push(GoldenCheck::scalar(
                        format!("{name}_net[{k}]"),
                        net,
                        window.net_change,
                    ));
                    checks.push(GoldenCheck::label(
                        format!("{name}_label[{k}]"),
                        label.describe(),
                        window.label.describe(),
                    ));
                }
                None => checks.push(GoldenCheck::missing(format!("{name}_window[{k}]"))),
            }
        }
        let p = &analysis.report.perfection_sequence;
        checks.push(GoldenCheck::scalar(
            format!("{name}_perfection[first]"),
            p_first,
            p.first().copied().unwrap_or(f64::NAN),
        ));
        checks.push(GoldenCheck::scalar(
            format!("{name}_perfection[last]"),
            p_last,
            p.last().copied().unwrap_or(f64::NAN),
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_check_flags_a_hundredth_of_corruption() {
        let honest = GoldenCheck::scalar("value", 1.0576, 1.05757);
        assert!(honest.passed);
        let corrupted = GoldenCheck::scalar("value", 1.0576 + 0.01, 1.05757);
        assert!(!corrupted.passed);
        let mut rendered = String::new();
        render_checks("self_test", &[corrupted], &mut rendered);
        assert!(rendered.contains("FAIL value"));
        assert!(rendered.contains("0/1 golden checks passed"));
    }

    #[test]
    fn exact_check_tolerates_nothing() {
        assert!(GoldenCheck::exact("zero", 0.0, 0.0).passed);
        assert!(!GoldenCheck::exact("zero", 0.0, 1e-16).passed);
    }
}
