//! Runs every clause bundle a scenario supplies inputs for and assembles the
//! results into one report envelope. Also doubles as the deep validator:
//! a scenario that analyzes cleanly is fully constructible.

use crate::consciousness::run_consciousness;
use crate::dynamics::{
    aas_trajectory, appetition, channel_contribution_series, lipschitz_bound, step_deltas,
    trajectory_distance, CostTrace, Trace,
};
use crate::harmony::{goal_action_harmony, pc_penalty, psr_penalty, soul_body_harmony};
use crate::kernel::{aas, penalty, Epsilon, Snapshot};
use crate::ontology::{check_dedup, check_ghost, check_refinement, simulate_geometric_aging};
use crate::organisation::{depth_stats, group_stats, recompute_parents};
use crate::report::{
    AgingRegimeReport, ConsciousnessReport, DepthReport, DriftAnalysis, DynamicsReport,
    HarmonyReport, InternalPrincipleCheck, OntologyReport, OrganisationReport, PairDistance,
    PenaltyReport, ReportEnvelope, ReportPayloads, SlicePerfection, SoulBodyReport,
    TeleologyReport,
};
use crate::scenario::{semantic, ScenarioError, ScenarioFile};
use crate::teleology::{variety_order_perfection, windowed_drift, DriftConfig};

/// Analyzes a scenario. The epsilon override, when given, takes precedence
/// over the file's own `eps` field.
pub fn analyze(
    file: &ScenarioFile,
    eps_override: Option<Epsilon>,
) -> Result<ReportEnvelope, ScenarioError> {
    let eps = match eps_override {
        Some(e) => e,
        None => file.epsilon()?,
    };
    let trace = file.build_trace()?;
    let mut payloads = ReportPayloads::default();
    if file.aging.is_some() {
        payloads.ontology = Some(run_ontology(file, eps)?);
    }
    if file.dynamics.is_some() {
        let trace = require_trace(trace.as_ref(), "dynamics")?;
        payloads.dynamics = Some(run_dynamics(file, trace, eps)?);
    }
    if file.consciousness.is_some() {
        let trace = require_trace(trace.as_ref(), "consciousness")?;
        payloads.consciousness = Some(run_consciousness_bundle(file, trace, eps)?);
    }
    if file.harmony.is_some() {
        let trace = require_trace(trace.as_ref(), "harmony")?;
        payloads.harmony = Some(run_harmony(file, trace.first(), eps)?);
    }
    if file.organisation.is_some() {
        payloads.organisation = Some(run_organisation(file, eps)?);
    }
    if file.teleology.is_some() {
        payloads.teleology = Some(run_teleology(file, trace.as_ref(), eps)?);
    }
    Ok(ReportEnvelope {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        eps: eps.value(),
        scenario: file.name.clone(),
        payloads,
    })
}

fn require_trace<'a>(trace: Option<&'a Trace>, section: &str) -> Result<&'a Trace, ScenarioError> {
    trace.ok_or_else(|| semantic(section, "this section requires a trace"))
}

fn run_ontology(file: &ScenarioFile, eps: Epsilon) -> Result<OntologyReport, ScenarioError> {
    let regimes = file
        .build_regimes()?
        .into_iter()
        .map(|(name, scenario)| {
            let trajectory = simulate_geometric_aging(&scenario, eps);
            AgingRegimeReport {
                name,
                decay: scenario.decay(),
                trajectory,
            }
        })
        .collect();
    let mut checks = Vec::new();
    if let Some((channel, fractions, ghost)) = file.build_ontology_checks()? {
        checks.push(
            check_refinement(&channel, &fractions, eps)
                .map_err(|e| semantic("aging.checks.split_fractions", e))?,
        );
        let base = Snapshot::from_channels(0, [("base".to_string(), channel)])
            .map_err(|e| semantic("aging.checks", e))?;
        checks
            .push(check_ghost(&base, &ghost, eps).map_err(|e| semantic("aging.checks.ghost", e))?);
        checks.push(check_dedup(&channel, eps).map_err(|e| semantic("aging.checks", e))?);
    }
    Ok(OntologyReport { regimes, checks })
}

fn run_dynamics(
    file: &ScenarioFile,
    trace: &Trace,
    eps: Epsilon,
) -> Result<DynamicsReport, ScenarioError> {
    let channels: Vec<String> = trace.channel_names().cloned().collect();
    let trajectory = aas_trajectory(trace, eps);
    let (deltas, max_abs, bound) = if trace.len() >= 2 {
        let (deltas, max_abs) = step_deltas(&trajectory).map_err(|e| semantic("dynamics", e))?;
        let bound = lipschitz_bound(trace, eps).map_err(|e| semantic("dynamics", e))?;
        (Some(deltas), Some(max_abs), Some(bound))
    } else {
        (None, None, None)
    };
    let mut cost_traces = Vec::with_capacity(channels.len());
    for name in &channels {
        let costs =
            channel_contribution_series(trace, name, eps).map_err(|e| semantic("dynamics", e))?;
        cost_traces
            .push(CostTrace::from_costs(name.clone(), costs).map_err(|e| semantic("dynamics", e))?);
    }
    let mut pairwise_distances = Vec::new();
    for i in 0..cost_traces.len() {
        for j in (i + 1)..cost_traces.len() {
            let distance = trajectory_distance(&cost_traces[i].costs, &cost_traces[j].costs)
                .map_err(|e| semantic("dynamics", e))?;
            pairwise_distances.push(PairDistance {
                first: cost_traces[i].channel_name.clone(),
                second: cost_traces[j].channel_name.clone(),
                distance,
            });
        }
    }
    let internal_principle = internal_principle_checks(trace, &channels, &cost_traces, eps)?;
    let appetition_run = match file.dynamics.as_ref().and_then(|d| d.appetition.as_ref()) {
        None => None,
        Some(def) => Some(
            appetition(def.initial, def.target, def.rate, def.steps, eps)
                .map_err(|e| semantic("dynamics.appetition", e))?,
        ),
    };
    Ok(DynamicsReport {
        channels,
        trajectory,
        step_deltas: deltas,
        max_abs_delta: max_abs,
        lipschitz_bound: bound,
        cost_traces,
        pairwise_distances,
        internal_principle,
        appetition: appetition_run,
    })
}

/// For every channel, compares its contribution series against the one it
/// produces in a world where every other channel's recall column runs
/// backwards.
fn internal_principle_checks(
    trace: &Trace,
    channels: &[String],
    cost_traces: &[CostTrace],
    eps: Epsilon,
) -> Result<Vec<InternalPrincipleCheck>, ScenarioError> {
    let definitions: Vec<(String, f64, f64)> = trace
        .first()
        .iter()
        .map(|(name, ch)| (name.clone(), ch.weight(), ch.redundancy()))
        .collect();
    let columns: Vec<Vec<f64>> = channels
        .iter()
        .map(|name| trace.recalls_of(name).map_err(|e| semantic("dynamics", e)))
        .collect::<Result<_, _>>()?;
    let steps = trace.len();
    let mut checks = Vec::with_capacity(channels.len());
    for (kept, kept_name) in channels.iter().enumerate() {
        let rows: Vec<Vec<f64>> = (0..steps)
            .map(|t| {
                columns
                    .iter()
                    .enumerate()
                    .map(|(c, column)| {
                        if c == kept {
                            column[t]
                        } else {
                            column[steps - 1 - t]
                        }
                    })
                    .collect()
            })
            .collect();
        let reversed_world =
            Trace::from_schedule(&definitions, &rows).map_err(|e| semantic("dynamics", e))?;
        let series = channel_contribution_series(&reversed_world, kept_name, eps)
            .map_err(|e| semantic("dynamics", e))?;
        let max_abs_difference = cost_traces[kept]
            .costs
            .iter()
            .zip(&series)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        checks.push(InternalPrincipleCheck {
            channel: kept_name.clone(),
            max_abs_difference,
        });
    }
    Ok(checks)
}

fn run_consciousness_bundle(
    file: &ScenarioFile,
    trace: &Trace,
    eps: Epsilon,
) -> Result<ConsciousnessReport, ScenarioError> {
    let config = file
        .build_consciousness()?
        .expect("section presence already checked");
    let records =
        run_consciousness(trace, &config, eps).map_err(|e| semantic("consciousness", e))?;
    let channels: Vec<String> = trace.channel_names().cloned().collect();
    let recalls: Vec<Vec<f64>> = trace
        .snapshots()
        .iter()
        .map(|snap| snap.iter().map(|(_, ch)| ch.recall()).collect())
        .collect();
    Ok(ConsciousnessReport {
        channels,
        config,
        recalls,
        records,
    })
}

fn run_harmony(
    file: &ScenarioFile,
    slice: &Snapshot,
    eps: Epsilon,
) -> Result<HarmonyReport, ScenarioError> {
    let base_aas = aas(slice, eps);
    let non_contradiction = file.build_contradictions()?.map(|spec| {
        let p = pc_penalty(slice, &spec, eps);
        PenaltyReport {
            penalty: p,
            total: base_aas + p,
        }
    });
    let sufficient_reason = file.build_support()?.map(|model| {
        let p = psr_penalty(slice, &model, eps);
        PenaltyReport {
            penalty: p,
            total: base_aas + p,
        }
    });
    let soul_body = file.build_dual_view()?.map(|view| {
        let soul_aas = aas(&view.soul, eps);
        let body_aas = aas(&view.body, eps);
        let p = soul_body_harmony(&view, eps);
        SoulBodyReport {
            soul_aas,
            body_aas,
            penalty: p,
            total: soul_aas + body_aas + p,
        }
    });
    let goal_action = file.build_goals()?.map(|goals| {
        let p = goal_action_harmony(slice, &goals, eps);
        PenaltyReport {
            penalty: p,
            total: base_aas + p,
        }
    });
    Ok(HarmonyReport {
        base_aas,
        non_contradiction,
        sufficient_reason,
        soul_body,
        goal_action,
    })
}

fn run_organisation(
    file: &ScenarioFile,
    eps: Epsilon,
) -> Result<OrganisationReport, ScenarioError> {
    let hierarchy = file
        .build_hierarchy()?
        .expect("section presence already checked");
    let recomputed =
        recompute_parents(&hierarchy).map_err(|e| semantic("organisation.hierarchy", e))?;
    let depths = depth_stats(&recomputed, eps)
        .into_iter()
        .enumerate()
        .map(|(depth, (aas_value, stats))| DepthReport {
            depth,
            channels: recomputed
                .level(depth)
                .iter()
                .map(|(name, ch)| (name.clone(), (ch.recall(), ch.effective_mass())))
                .collect(),
            aas: aas_value,
            stats,
        })
        .collect();
    let groups = match file.build_groups()? {
        None => None,
        Some(spec) => Some(
            group_stats(recomputed.leaves(), &spec, eps)
                .map_err(|e| semantic("organisation.groups", e))?,
        ),
    };
    Ok(OrganisationReport { depths, groups })
}

fn run_teleology(
    file: &ScenarioFile,
    trace: Option<&Trace>,
    eps: Epsilon,
) -> Result<TeleologyReport, ScenarioError> {
    let section = file.teleology.as_ref().expect("presence already checked");
    let perfection = match file.build_perfection()? {
        None => None,
        Some(config) => {
            let trace = require_trace(trace, "teleology.perfection")?;
            let report = variety_order_perfection(trace.first(), eps, config);
            Some(SlicePerfection {
                gamma: config.gamma,
                report,
            })
        }
    };
    let mut drift = Vec::new();
    if let Some(def) = &section.drift {
        let upper_bound = match def.upper_bound {
            Some(value) => value,
            None => {
                let trace = trace.ok_or_else(|| {
                    semantic(
                        "teleology.drift",
                        "upper_bound is required when no trace is present",
                    )
                })?;
                let slice = trace.first();
                slice.total_mass() * penalty(0.0, eps).expect("0.0 is finite")
            }
        };
        let config = DriftConfig::new(def.window, def.threshold, upper_bound)
            .map_err(|e| semantic("teleology.drift", e))?;
        let sequences: Vec<(String, Vec<f64>)> = match &def.sequences {
            Some(defs) => {
                if defs.is_empty() {
                    return Err(semantic(
                        "teleology.drift.sequences",
                        "at least one sequence is required",
                    ));
                }
                defs.iter()
                    .map(|s| (s.name.clone(), s.values.clone()))
                    .collect()
            }
            None => {
                let trace = trace.ok_or_else(|| {
                    semantic("teleology.drift", "either sequences or a trace is required")
                })?;
                vec![("trace".to_string(), aas_trajectory(trace, eps))]
            }
        };
        for (name, values) in sequences {
            let report = windowed_drift(&values, config)
                .map_err(|e| semantic(format!("teleology.drift sequence {name:?}"), e))?;
            drift.push(DriftAnalysis {
                name,
                window: config.window,
                threshold: config.threshold,
                upper_bound: config.upper_bound,
                values,
                report,
            });
        }
    }
    Ok(TeleologyReport { perfection, drift })
}
