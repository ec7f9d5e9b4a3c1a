//! Verification harness behind the `blockmorita` binary: job kinds,
//! manifests, expectations and the on-disk cache.

pub mod cache;
pub mod expect;
pub mod jobs;
pub mod manifest;
pub mod subgroups;
pub mod theorem;

pub use cache::Cache;
pub use expect::{exit_code, Expect};
pub use jobs::{JobContext, JobKind, JobRegistry, Report};
pub use manifest::{run_manifest, Manifest, ManifestJob, ManifestReport, Provenance};
