//! Command implementations. Each returns its exit code plus the text for
//! stdout/stderr, so integration tests can call them without spawning the
//! binary.
//!
//! Exit codes: 0 success, 1 golden mismatch in `repro`, 2 load/validation or
//! internal error.

use std::path::Path;

use aas_core::analysis;
use aas_core::kernel::Epsilon;
use aas_core::report::{write_report, ReportEnvelope, ReportFormat};
use aas_core::scenario::{load_scenario, ScenarioError, ScenarioFile};

use crate::golden::{check_system, render_checks, GoldenCheck};
use crate::{fixture, FIXTURES};

pub struct CommandOutput {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput {
            exit_code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(exit_code: u8, stderr: String) -> Self {
        CommandOutput {
            exit_code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn parse_eps(eps: Option<f64>) -> Result<Option<Epsilon>, CommandOutput> {
    match eps {
        None => Ok(None),
        Some(value) => Epsilon::new(value)
            .map(Some)
            .map_err(|e| CommandOutput::fail(2, format!("error: --eps: {e}\n"))),
    }
}

struct SystemRun {
    system: &'static str,
    envelope: ReportEnvelope,
    golden: Vec<GoldenCheck>,
}

/// Re-runs the bundled scenarios and compares every reported value against
/// the golden tables. Exit 0 only when every check passes.
pub fn repro(selector: &str, format: ReportFormat, eps: Option<f64>) -> CommandOutput {
    let eps_override = match parse_eps(eps) {
        Ok(e) => e,
        Err(out) => return out,
    };
    let systems: Vec<&'static str> = if selector == "all" {
        FIXTURES.iter().map(|(name, _)| *name).collect()
    } else {
        match FIXTURES.iter().find(|(name, _)| *name == selector) {
            Some((name, _)) => vec![name],
            None => {
                return CommandOutput::fail(
                    2,
                    format!(
                        "error: unknown system {selector:?}; expected system1..system6 or all\n"
                    ),
                )
            }
        }
    };
    let mut runs = Vec::with_capacity(systems.len());
    for system in systems {
        let text = fixture(system).expect("selector already resolved");
        let file = match ScenarioFile::parse(text) {
            Ok(file) => file,
            Err(e) => {
                return CommandOutput::fail(2, format!("internal error: fixture {system}: {e}\n"))
            }
        };
        let envelope = match analysis::analyze(&file, eps_override) {
            Ok(envelope) => envelope,
            Err(e) => {
                return CommandOutput::fail(2, format!("internal error: fixture {system}: {e}\n"))
            }
        };
        let golden = check_system(system, &envelope);
        runs.push(SystemRun {
            system,
            envelope,
            golden,
        });
    }
    let all_passed = runs
        .iter()
        .all(|run| run.golden.iter().all(|check| check.passed));
    let stdout = match format {
        ReportFormat::Text => {
            let mut out = String::new();
            for run in &runs {
                out.push_str(&write_report(&run.envelope, ReportFormat::Text));
                out.push('\n');
                render_checks(run.system, &run.golden, &mut out);
                out.push('\n');
            }
            let total: usize = runs.iter().map(|r| r.golden.len()).sum();
            let passed: usize = runs
                .iter()
                .map(|r| r.golden.iter().filter(|c| c.passed).count())
                .sum();
            out.push_str(&format!(
                "repro: {passed}/{total} golden checks passed across {} system(s)\n",
                runs.len()
            ));
            out
        }
        ReportFormat::Json => {
            let to_value = |run: &SystemRun| {
                serde_json::json!({
                    "system": run.system,
                    "report": run.envelope,
                    "golden": run.golden,
                })
            };
            let value = if runs.len() == 1 {
                to_value(&runs[0])
            } else {
                serde_json::json!({ "systems": runs.iter().map(to_value).collect::<Vec<_>>() })
            };
            let mut out = serde_json::to_string_pretty(&value).expect("reports serialize");
            out.push('\n');
            out
        }
    };
    CommandOutput {
        exit_code: if all_passed { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}

fn strict_check(file: &ScenarioFile) -> Result<(), CommandOutput> {
    let dangling = file.dangling_references();
    if dangling.is_empty() {
        Ok(())
    } else {
        let err = ScenarioError::DanglingReferences(dangling);
        Err(CommandOutput::fail(2, format!("error: {err}\n")))
    }
}

/// Loads a scenario and runs every clause bundle it supplies inputs for.
pub fn analyze(path: &Path, format: ReportFormat, eps: Option<f64>, strict: bool) -> CommandOutput {
    let eps_override = match parse_eps(eps) {
        Ok(e) => e,
        Err(out) => return out,
    };
    let file = match load_scenario(path) {
        Ok(file) => file,
        Err(e) => return CommandOutput::fail(2, format!("error: {e}\n")),
    };
    if strict {
        if let Err(out) = strict_check(&file) {
            return out;
        }
    }
    match analysis::analyze(&file, eps_override) {
        Ok(envelope) => CommandOutput::ok(write_report(&envelope, format)),
        Err(e) => CommandOutput::fail(2, format!("error: {e}\n")),
    }
}

/// Parses and validates a scenario; exit 0 means every supplied section is
/// well-formed and constructible.
pub fn validate(path: &Path, strict: bool) -> CommandOutput {
    let file = match load_scenario(path) {
        Ok(file) => file,
        Err(e) => return CommandOutput::fail(2, format!("error: {e}\n")),
    };
    if strict {
        if let Err(out) = strict_check(&file) {
            return out;
        }
    }
    CommandOutput::ok(format!("ok: scenario {:?} is valid\n", file.name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repro_single_system_passes_and_reports() {
        let out = repro("system4", ReportFormat::Text, None);
        assert_eq!(out.exit_code, 0, "stderr: {}", out.stderr);
        assert!(out.stdout.contains("PC penalty_t = 1.1502"));
        assert!(out.stdout.contains("PSR penalty_t = 1.5333"));
        assert!(out.stdout.contains("HARM_t      = 0.1478"));
        assert!(out.stdout.contains("HARM_t      = 0.0000"));
        assert!(out.stdout.contains("golden checks passed"));
    }

    #[test]
    fn repro_all_passes() {
        let out = repro("all", ReportFormat::Text, None);
        assert_eq!(out.exit_code, 0, "stdout tail: {}", {
            let lines: Vec<&str> = out.stdout.lines().collect();
            lines[lines.len().saturating_sub(40)..].join("\n")
        });
        for system in [
            "system1", "system2", "system3", "system4", "system5", "system6",
        ] {
            assert!(out.stdout.contains(system));
        }
    }

    #[test]
    fn repro_with_wrong_eps_fails_golden() {
        let out = repro("system4", ReportFormat::Text, Some(0.1));
        assert_eq!(out.exit_code, 1);
        assert!(out.stdout.contains("FAIL"));
    }

    #[test]
    fn unknown_selector_is_an_error() {
        let out = repro("system9", ReportFormat::Text, None);
        assert_eq!(out.exit_code, 2);
        assert!(out.stderr.contains("system9"));
    }
}
