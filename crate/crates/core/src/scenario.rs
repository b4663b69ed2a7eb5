//! Scenario files: a single JSON document describing the channel trace and
//! the clause bundles to evaluate over it. Parsing is strict (unknown fields
//! are rejected) and validation is total: every malformed input yields a
//! structured error naming what is wrong and where, never a crash or a
//! silent default.
//!
//! A scenario opts into a clause bundle by carrying its section:
//!
//! | section         | bundle it enables                      |
//! |-----------------|----------------------------------------|
//! | `aging`         | ontology (ageing + structural checks)  |
//! | `dynamics`      | dynamics over the trace                |
//! | `consciousness` | representation diagnostics             |
//! | `harmony`       | PC / PSR / dual-view / goal penalties  |
//! | `organisation`  | hierarchy rollup + groups              |
//! | `teleology`     | slice perfection + windowed drift      |
//!
//! The `trace` section supplies the shared channel schedule; bundles that
//! need it say so when it is missing.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::consciousness::ConsciousnessConfig;
use crate::dynamics::Trace;
use crate::harmony::{ContradictionPair, ContradictionSpec, DualView, GoalSpec, SupportModel};
use crate::kernel::{Channel, Epsilon, Snapshot};
use crate::ontology::DecayScenario;
use crate::organisation::{GroupSpec, Hierarchy};
use crate::teleology::PerfectionConfig;

/// Version of the scenario schema this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid scenario: {context}: {reason}")]
    Semantic { context: String, reason: String },
    #[error("dangling references:\n  {}", .0.join("\n  "))]
    DanglingReferences(Vec<String>),
}

pub(crate) fn semantic(context: impl Into<String>, reason: impl ToString) -> ScenarioError {
    ScenarioError::Semantic {
        context: context.into(),
        reason: reason.to_string(),
    }
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aging: Option<AgingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consciousness: Option<ConsciousnessSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub harmony: Option<HarmonySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub organisation: Option<OrganisationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub teleology: Option<TeleologySection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSection {
    pub channels: Vec<ChannelDef>,
    pub recalls: Vec<Vec<f64>>,
}

/// A trace channel: fixed weight and redundancy, recalls supplied per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDef {
    pub name: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(default)]
    pub redundancy: f64,
}

/// A standalone channel with an explicit recall, as used by snapshots inside
/// dual views and hierarchies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedChannelDef {
    pub name: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(default)]
    pub redundancy: f64,
    pub recall: f64,
}

/// Channel values without a name, for the ontology check inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelValues {
    #[serde(default = "default_weight")]
    pub weight: f64,
    #[serde(default)]
    pub redundancy: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgingSection {
    pub initial_recalls: Vec<f64>,
    pub steps: usize,
    pub regimes: Vec<RegimeDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<OntologyChecksDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeDef {
    pub name: String,
    pub decay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyChecksDef {
    pub channel: ChannelValues,
    pub split_fractions: Vec<f64>,
    pub ghost: ChannelValues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appetition: Option<AppetitionDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppetitionDef {
    pub initial: f64,
    pub target: f64,
    pub rate: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsciousnessSection {
    #[serde(default = "ConsciousnessSection::default_tau")]
    pub tau: f64,
    #[serde(default = "ConsciousnessSection::default_delta")]
    pub delta: f64,
    #[serde(default = "ConsciousnessSection::default_lambda")]
    pub lambda: f64,
    pub rational_prior: Vec<f64>,
    #[serde(default = "ConsciousnessSection::default_tiny")]
    pub tiny: f64,
}

impl ConsciousnessSection {
    fn default_tau() -> f64 {
        ConsciousnessConfig::DEFAULT_TAU
    }
    fn default_delta() -> f64 {
        ConsciousnessConfig::DEFAULT_SHARPNESS
    }
    fn default_lambda() -> f64 {
        ConsciousnessConfig::DEFAULT_FORGETTING
    }
    fn default_tiny() -> f64 {
        ConsciousnessConfig::DEFAULT_TINY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contradictions: Option<ContradictionsDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_view: Option<DualViewDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goals: Option<GoalsDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContradictionsDef {
    pub tolerance: f64,
    pub pairs: Vec<PairDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDef {
    pub a: String,
    pub b: String,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDef {
    #[serde(default = "SupportDef::default_smoothing")]
    pub smoothing: f64,
    #[serde(default)]
    pub self_coefficients: IndexMap<String, f64>,
    #[serde(default)]
    pub edges: Vec<EdgeDef>,
    #[serde(default)]
    pub previous_recalls: IndexMap<String, f64>,
}

impl SupportDef {
    fn default_smoothing() -> f64 {
        SupportModel::DEFAULT_SMOOTHING
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDef {
    pub target: String,
    pub source: String,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualViewDef {
    pub soul: Vec<NamedChannelDef>,
    pub body: Vec<NamedChannelDef>,
    pub pairing: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalsDef {
    pub targets: IndexMap<String, f64>,
    pub next_recalls: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrganisationSection {
    pub hierarchy: HierarchyDef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<IndexMap<String, Vec<String>>>,
}

/// Levels are listed root-first; `levels[0]` is depth 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchyDef {
    pub levels: Vec<Vec<NamedChannelDef>>,
    pub children: IndexMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeleologySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perfection: Option<PerfectionDef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerfectionDef {
    #[serde(default = "PerfectionDef::default_gamma")]
    pub gamma: f64,
}

impl PerfectionDef {
    fn default_gamma() -> f64 {
        0.5
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftDef {
    pub window: usize,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<SequenceDef>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDef {
    pub name: String,
    pub values: Vec<f64>,
}

impl ScenarioFile {
    /// Syntax and shape only; run [`parse_scenario`] for full validation.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        let file: ScenarioFile =
            serde_json::from_value(value).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::Schema(format!(
                "unsupported schema_version {}, this build reads version {}",
                file.schema_version, SCHEMA_VERSION
            )));
        }
        if file.name.is_empty() {
            return Err(ScenarioError::Schema("name must not be empty".to_string()));
        }
        if let Some(trace) = &file.trace {
            if trace.channels.is_empty() {
                return Err(ScenarioError::Schema(
                    "trace.channels must not be empty".to_string(),
                ));
            }
            if trace.recalls.is_empty() {
                return Err(ScenarioError::Schema(
                    "trace.recalls must contain at least one time step".to_string(),
                ));
            }
        }
        Ok(file)
    }

    /// The smoothing constant in effect: the file's override or the default.
    pub fn epsilon(&self) -> Result<Epsilon, ScenarioError> {
        match self.eps {
            None => Ok(Epsilon::default()),
            Some(value) => Epsilon::new(value).map_err(|e| semantic("eps", e)),
        }
    }

    pub fn build_trace(&self) -> Result<Option<Trace>, ScenarioError> {
        let Some(section) = &self.trace else {
            return Ok(None);
        };
        let mut names: Vec<&str> = Vec::new();
        for def in &section.channels {
            if names.contains(&def.name.as_str()) {
                return Err(semantic(
                    format!("trace channel {:?}", def.name),
                    "defined more than once",
                ));
            }
            names.push(&def.name);
            validate_channel_shape(
                &format!("trace channel {:?}", def.name),
                def.weight,
                def.redundancy,
            )?;
        }
        for (step, row) in section.recalls.iter().enumerate() {
            if row.len() != section.channels.len() {
                return Err(semantic(
                    format!("trace recalls at step {step}"),
                    format!(
                        "row has {} values but {} channels are defined",
                        row.len(),
                        section.channels.len()
                    ),
                ));
            }
            for (def, value) in section.channels.iter().zip(row) {
                validate_recall(
                    &format!("trace channel {:?} at step {step}", def.name),
                    *value,
                )?;
            }
        }
        let definitions: Vec<(String, f64, f64)> = section
            .channels
            .iter()
            .map(|d| (d.name.clone(), d.weight, d.redundancy))
            .collect();
        let trace = Trace::from_schedule(&definitions, &section.recalls)
            .map_err(|e| semantic("trace", e))?;
        Ok(Some(trace))
    }

    pub fn build_regimes(&self) -> Result<Vec<(String, DecayScenario)>, ScenarioError> {
        let Some(section) = &self.aging else {
            return Ok(Vec::new());
        };
        if section.regimes.is_empty() {
            return Err(semantic("aging.regimes", "at least one regime is required"));
        }
        let mut seen: Vec<&str> = Vec::new();
        let mut regimes = Vec::with_capacity(section.regimes.len());
        for regime in &section.regimes {
            if seen.contains(&regime.name.as_str()) {
                return Err(semantic(
                    format!("aging regime {:?}", regime.name),
                    "defined more than once",
                ));
            }
            seen.push(&regime.name);
            let scenario =
                DecayScenario::new(section.initial_recalls.clone(), regime.decay, section.steps)
                    .map_err(|e| semantic(format!("aging regime {:?}", regime.name), e))?;
            regimes.push((regime.name.clone(), scenario));
        }
        Ok(regimes)
    }

    pub fn build_ontology_checks(
        &self,
    ) -> Result<Option<(Channel, Vec<f64>, Channel)>, ScenarioError> {
        let Some(checks) = self.aging.as_ref().and_then(|a| a.checks.as_ref()) else {
            return Ok(None);
        };
        let channel = build_channel("aging.checks.channel", &checks.channel)?;
        let ghost = build_channel("aging.checks.ghost", &checks.ghost)?;
        Ok(Some((channel, checks.split_fractions.clone(), ghost)))
    }

    pub fn build_consciousness(&self) -> Result<Option<ConsciousnessConfig>, ScenarioError> {
        let Some(section) = &self.consciousness else {
            return Ok(None);
        };
        Ok(Some(ConsciousnessConfig {
            tau: section.tau,
            delta_sharpness: section.delta,
            forgetting: section.lambda,
            rational_prior: section.rational_prior.clone(),
            tiny: section.tiny,
        }))
    }

    pub fn build_contradictions(&self) -> Result<Option<ContradictionSpec>, ScenarioError> {
        let Some(def) = self
            .harmony
            .as_ref()
            .and_then(|h| h.contradictions.as_ref())
        else {
            return Ok(None);
        };
        let mut pairs = Vec::with_capacity(def.pairs.len());
        for pair in &def.pairs {
            pairs.push(
                ContradictionPair::new(pair.a.clone(), pair.b.clone(), pair.weight).map_err(
                    |e| semantic(format!("harmony pair ({:?}, {:?})", pair.a, pair.b), e),
                )?,
            );
        }
        let spec = ContradictionSpec::new(def.tolerance, pairs)
            .map_err(|e| semantic("harmony.contradictions", e))?;
        Ok(Some(spec))
    }

    pub fn build_support(&self) -> Result<Option<SupportModel>, ScenarioError> {
        let Some(def) = self.harmony.as_ref().and_then(|h| h.support.as_ref()) else {
            return Ok(None);
        };
        let mut in_edges: IndexMap<String, Vec<(String, f64)>> = IndexMap::new();
        for edge in &def.edges {
            in_edges
                .entry(edge.target.clone())
                .or_default()
                .push((edge.source.clone(), edge.coefficient));
        }
        let model = SupportModel::new(
            def.self_coefficients.clone(),
            in_edges,
            def.previous_recalls.clone(),
            def.smoothing,
        )
        .map_err(|e| semantic("harmony.support", e))?;
        Ok(Some(model))
    }

    pub fn build_dual_view(&self) -> Result<Option<DualView>, ScenarioError> {
        let Some(def) = self.harmony.as_ref().and_then(|h| h.dual_view.as_ref()) else {
            return Ok(None);
        };
        let soul = build_snapshot("harmony.dual_view.soul", &def.soul)?;
        let body = build_snapshot("harmony.dual_view.body", &def.body)?;
        Ok(Some(DualView {
            soul,
            body,
            pairing: def.pairing.clone(),
        }))
    }

    pub fn build_goals(&self) -> Result<Option<GoalSpec>, ScenarioError> {
        let Some(def) = self.harmony.as_ref().and_then(|h| h.goals.as_ref()) else {
            return Ok(None);
        };
        let spec = GoalSpec::new(def.targets.clone(), def.next_recalls.clone())
            .map_err(|e| semantic("harmony.goals", e))?;
        Ok(Some(spec))
    }

    pub fn build_hierarchy(&self) -> Result<Option<Hierarchy>, ScenarioError> {
        let Some(section) = &self.organisation else {
            return Ok(None);
        };
        let mut levels = Vec::with_capacity(section.hierarchy.levels.len());
        for (depth, defs) in section.hierarchy.levels.iter().enumerate() {
            levels.push(build_snapshot(
                &format!("organisation.hierarchy level {depth}"),
                defs,
            )?);
        }
        let hierarchy = Hierarchy::new(levels, section.hierarchy.children.clone())
            .map_err(|e| semantic("organisation.hierarchy", e))?;
        Ok(Some(hierarchy))
    }

    pub fn build_groups(&self) -> Result<Option<GroupSpec>, ScenarioError> {
        let Some(groups) = self.organisation.as_ref().and_then(|o| o.groups.as_ref()) else {
            return Ok(None);
        };
        let spec =
            GroupSpec::new(groups.clone()).map_err(|e| semantic("organisation.groups", e))?;
        Ok(Some(spec))
    }

    pub fn build_perfection(&self) -> Result<Option<PerfectionConfig>, ScenarioError> {
        let Some(def) = self.teleology.as_ref().and_then(|t| t.perfection.as_ref()) else {
            return Ok(None);
        };
        let config =
            PerfectionConfig::new(def.gamma).map_err(|e| semantic("teleology.perfection", e))?;
        Ok(Some(config))
    }

    /// References to channels that no section defines. Empty for a
    /// well-wired scenario; strict callers treat any entry as an error.
    pub fn dangling_references(&self) -> Vec<String> {
        let mut dangling = Vec::new();
        let trace_names: Vec<&str> = self
            .trace
            .iter()
            .flat_map(|t| t.channels.iter().map(|c| c.name.as_str()))
            .collect();
        let known = |name: &str| trace_names.contains(&name);
        if let Some(harmony) = &self.harmony {
            if let Some(c) = &harmony.contradictions {
                for pair in &c.pairs {
                    for name in [&pair.a, &pair.b] {
                        if !known(name) {
                            dangling.push(format!(
                                "harmony.contradictions names unknown channel {name:?}"
                            ));
                        }
                    }
                }
            }
            if let Some(s) = &harmony.support {
                for name in s.self_coefficients.keys() {
                    if !known(name) {
                        dangling.push(format!(
                            "harmony.support.self_coefficients names unknown channel {name:?}"
                        ));
                    }
                }
                for edge in &s.edges {
                    for name in [&edge.target, &edge.source] {
                        if !known(name) {
                            dangling.push(format!(
                                "harmony.support.edges names unknown channel {name:?}"
                            ));
                        }
                    }
                }
                for name in s.previous_recalls.keys() {
                    if !known(name) {
                        dangling.push(format!(
                            "harmony.support.previous_recalls names unknown channel {name:?}"
                        ));
                    }
                }
            }
            if let Some(v) = &harmony.dual_view {
                let soul_names: Vec<&str> = v.soul.iter().map(|c| c.name.as_str()).collect();
                let body_names: Vec<&str> = v.body.iter().map(|c| c.name.as_str()).collect();
                for (body_name, soul_name) in &v.pairing {
                    if !body_names.contains(&body_name.as_str()) {
                        dangling.push(format!(
                            "harmony.dual_view.pairing names unknown body channel {body_name:?}"
                        ));
                    }
                    if !soul_names.contains(&soul_name.as_str()) {
                        dangling.push(format!(
                            "harmony.dual_view.pairing names unknown soul channel {soul_name:?}"
                        ));
                    }
                }
            }
            if let Some(g) = &harmony.goals {
                for name in g.targets.keys().chain(g.next_recalls.keys()) {
                    if !known(name) {
                        dangling.push(format!("harmony.goals names unknown channel {name:?}"));
                    }
                }
            }
        }
        dangling
    }
}

fn validate_channel_shape(
    context: &str,
    weight: f64,
    redundancy: f64,
) -> Result<(), ScenarioError> {
    if !weight.is_finite() || weight < 0.0 {
        return Err(semantic(context, format!("weight {weight} must be >= 0")));
    }
    if !redundancy.is_finite() || !(0.0..=1.0).contains(&redundancy) {
        return Err(semantic(
            context,
            format!("redundancy {redundancy} must lie in [0, 1]"),
        ));
    }
    Ok(())
}

fn validate_recall(context: &str, value: f64) -> Result<(), ScenarioError> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(semantic(
            context,
            format!("recall {value} must lie in [0, 1]"),
        ));
    }
    Ok(())
}

fn build_channel(context: &str, values: &ChannelValues) -> Result<Channel, ScenarioError> {
    validate_channel_shape(context, values.weight, values.redundancy)?;
    validate_recall(context, values.recall)?;
    Channel::new(values.weight, values.redundancy, values.recall).map_err(|e| semantic(context, e))
}

fn build_snapshot(context: &str, defs: &[NamedChannelDef]) -> Result<Snapshot, ScenarioError> {
    let mut snapshot = Snapshot::new(0);
    for def in defs {
        let channel_context = format!("{context} channel {:?}", def.name);
        validate_channel_shape(&channel_context, def.weight, def.redundancy)?;
        validate_recall(&channel_context, def.recall)?;
        let channel = Channel::new(def.weight, def.redundancy, def.recall)
            .map_err(|e| semantic(&channel_context, e))?;
        snapshot
            .insert(def.name.clone(), channel)
            .map_err(|e| semantic(context, e))?;
    }
    Ok(snapshot)
}

/// Parses and fully validates a scenario: afterwards every module input the
/// file describes is constructible and every bundle it enables can run.
pub fn parse_scenario(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let file = ScenarioFile::parse(text)?;
    crate::analysis::analyze(&file, None)?;
    Ok(file)
}

/// Reads and fully validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioFile, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

/// Serializes a scenario back to JSON. Parsing the output yields a value
/// equal to the input, making round trips lossless.
pub fn write_scenario(file: &ScenarioFile) -> String {
    let mut out = serde_json::to_string_pretty(file).expect("scenario is serializable");
    out.push('\n');
    out
}
