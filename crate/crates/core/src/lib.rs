//! Artificial Age Score (AAS): a penalty kernel over channel-level memory
//! snapshots, plus six clause bundles that constrain how scores may behave —
//! structural invariances, trace dynamics, representation diagnostics,
//! harmony penalties, hierarchical organisation and teleological drift.
//! Scenario files select bundles and supply their inputs; reports serialize
//! every result for downstream tooling.
//!
//! ```rust
//! use aas_core::{aas, Channel, Epsilon, Snapshot};
//!
//! let eps = Epsilon::default(); // 1e-3
//! let snapshot = Snapshot::from_channels(0, [
//!     ("fresh".to_string(), Channel::unit(0.95)?),          // nearly free
//!     ("worn".to_string(), Channel::unit(0.40)?),           // costs bits
//!     ("duplicate".to_string(), Channel::new(1.0, 1.0, 0.40)?), // fully redundant: free
//! ])?;
//! let age = aas(&snapshot, eps);
//! assert!(age > 0.0 && age < 1.5);
//! # Ok::<(), aas_core::kernel::KernelError>(())
//! ```

pub mod analysis;
pub mod consciousness;
pub mod dynamics;
pub mod harmony;
pub mod kernel;
pub mod ontology;
pub mod organisation;
pub mod report;
pub mod scenario;
pub mod teleology;

pub use kernel::{aas, contribution_stats, penalty, Channel, ContributionStats, Epsilon, Snapshot};
