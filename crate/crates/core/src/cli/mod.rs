//! Configuration, orchestration and reports.
//!
//! A run resolves a [`RunConfig`] (preset or inline group, caps, sections,
//! expectations), executes the selected sections and collects one
//! [`Entry`] per check. Each entry carries a formula anchor from
//! [`anchors::ANCHORS`] and a status; the run fails iff some entry fails.

pub mod anchors;
pub mod config;
pub mod report;
pub mod run;

pub use config::{Caps, Expectations, GroupSpec, InlineGroup, ResolvedRun, RunConfig, Section, PRESETS};
pub use report::{Entry, Report, SectionReport, Status};
pub use run::{run, run_resolved};
