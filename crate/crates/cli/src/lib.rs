//! Library side of the `aas` binary: the bundled reference scenarios, their
//! golden tables and the repro/analyze plumbing, kept here so integration
//! tests can drive them directly.

pub mod golden;
pub mod runner;

/// The six bundled reference scenarios, embedded so `repro` never depends on
/// the working directory. The same files ship under `fixtures/`.
pub const FIXTURES: &[(&str, &str)] = &[
    ("system1", include_str!("../fixtures/system1.scenario.json")),
    ("system2", include_str!("../fixtures/system2.scenario.json")),
    ("system3", include_str!("../fixtures/system3.scenario.json")),
    ("system4", include_str!("../fixtures/system4.scenario.json")),
    ("system5", include_str!("../fixtures/system5.scenario.json")),
    ("system6", include_str!("../fixtures/system6.scenario.json")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES
        .iter()
        .find(|(fixture_name, _)| *fixture_name == name)
        .map(|(_, text)| *text)
}
