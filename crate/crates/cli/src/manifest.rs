//! Batch manifests: jobs with expectations and provenance, run in a
//! bounded worker pool and merged by job key.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::expect::{
    error_exit_code, mismatches, FieldExpectations, EXIT_CAP, EXIT_MISMATCH, EXIT_OK,
};
use crate::jobs::{JobContext, JobRegistry, Report};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "PAPER")]
    Paper,
    #[serde(rename = "DERIVED")]
    Derived,
    #[serde(rename = "TRIVIAL")]
    Trivial,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestJob {
    pub key: String,
    pub kind: String,
    pub params: Value,
    #[serde(default)]
    pub expect: FieldExpectations,
    pub provenance: Provenance,
    /// Acceptance criterion the job belongs to, if any.
    #[serde(default)]
    pub criterion: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Long-running; skipped unless slow jobs are requested.
    #[serde(default)]
    pub slow: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: u32,
    pub jobs: Vec<ManifestJob>,
}

impl Manifest {
    pub fn load(path: &Path) -> blockmorita_core::Result<Manifest> {
        let text = std::fs::read_to_string(path)?;
        Manifest::parse(&text)
    }

    pub fn parse(text: &str) -> blockmorita_core::Result<Manifest> {
        let m: Manifest = serde_json::from_str(text)
            .map_err(|e| blockmorita_core::Error::Format(e.to_string()))?;
        let mut keys = std::collections::BTreeSet::new();
        for j in &m.jobs {
            if !keys.insert(&j.key) {
                return Err(blockmorita_core::Error::Format(format!(
                    "duplicate job key `{}`",
                    j.key
                )));
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct JobOutcome {
    pub key: String,
    pub kind: String,
    pub provenance: Provenance,
    pub criterion: Option<u32>,
    pub passed: bool,
    pub exit_code: i32,
    pub mismatches: Vec<String>,
    pub error: Option<String>,
    pub report: Option<Report>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestReport {
    pub schema: u32,
    /// Outcomes ordered by job key.
    pub outcomes: BTreeMap<String, JobOutcome>,
    pub passed: usize,
    pub failed: usize,
    /// Failures per provenance tag.
    pub failed_by_provenance: BTreeMap<String, usize>,
}

impl ManifestReport {
    /// Worst exit code: mismatches, then caps, then other errors.
    pub fn exit_code(&self) -> i32 {
        let codes: Vec<i32> = self.outcomes.values().map(|o| o.exit_code).collect();
        [EXIT_MISMATCH, EXIT_CAP]
            .into_iter()
            .find(|c| codes.contains(c))
            .unwrap_or_else(|| codes.into_iter().find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK))
    }
}

/// Runs one manifest job to an outcome.
pub fn run_job(registry: &JobRegistry, job: &ManifestJob, ctx: &JobContext) -> JobOutcome {
    let mut ctx = ctx.clone();
    if let Some(s) = job.seed {
        ctx.seed = s;
    }
    log::info!("job {} ({})", job.key, job.kind);
    let base = JobOutcome {
        key: job.key.clone(),
        kind: job.kind.clone(),
        provenance: job.provenance,
        criterion: job.criterion,
        passed: false,
        exit_code: EXIT_OK,
        mismatches: Vec::new(),
        error: None,
        report: None,
    };
    match registry.run(&job.kind, &job.params, &ctx) {
        Ok(report) => {
            let bad = mismatches(&report.result, &job.expect);
            JobOutcome {
                passed: bad.is_empty(),
                exit_code: if bad.is_empty() {
                    EXIT_OK
                } else {
                    EXIT_MISMATCH
                },
                mismatches: bad,
                report: Some(report),
                ..base
            }
        }
        Err(e) => JobOutcome {
            exit_code: error_exit_code(&e),
            error: Some(e.to_string()),
            ..base
        },
    }
}

/// Runs the selected jobs on `jobs` workers.
pub fn run_manifest(
    registry: &JobRegistry,
    manifest: &Manifest,
    ctx: &JobContext,
    jobs: usize,
    filter: impl Fn(&ManifestJob) -> bool + Sync,
) -> ManifestReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let outcomes: Vec<JobOutcome> = pool.install(|| {
        manifest
            .jobs
            .par_iter()
            .filter(|j| filter(j))
            .map(|j| run_job(registry, j, ctx))
            .collect()
    });
    let mut failed_by_provenance = BTreeMap::new();
    let mut passed = 0;
    for o in &outcomes {
        if o.passed {
            passed += 1;
        } else {
            let tag = serde_json::to_value(o.provenance)
                .expect("tag")
                .as_str()
                .unwrap_or_default()
                .to_string();
            *failed_by_provenance.entry(tag).or_insert(0) += 1;
        }
    }
    let failed = outcomes.len() - passed;
    let outcomes = outcomes.into_iter().map(|o| (o.key.clone(), o)).collect();
    ManifestReport {
        schema: crate::jobs::SCHEMA_VERSION,
        outcomes,
        passed,
        failed,
        failed_by_provenance,
    }
}
