use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use blockmorita_cli::expect::{
    exit_code, EXIT_CAP, EXIT_MISMATCH, EXIT_OK, EXIT_STRUCTURAL, EXIT_USAGE,
};
use blockmorita_cli::{Cache, Expect, JobContext, JobRegistry, Manifest};
use blockmorita_core::Error;
use serde_json::{json, Value};

fn bin(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_blockmorita"));
    c.args(args)
        .env("RUST_LOG", "warn")
        .env_remove("BLOCKMORITA_SEED");
    match cache {
        Some(p) => c.env("BLOCKMORITA_CACHE", p),
        None => c.arg("--no-cache"),
    };
    c.output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn h2_report_envelope() {
    let o = bin(&["h2", "--group", "D8"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 0xB10C);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["wallClockMs"].is_u64());
    assert_eq!(v["result"]["rank"], 3);
}

#[test]
fn h2_classify_table() {
    let v = stdout_json(&bin(&["h2", "--group", "D8", "--classify"], None));
    let classes = v["result"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    assert_eq!(classes.iter().filter(|c| c["isoType"] == "Q16").count(), 1);
}

#[test]
fn scott_example() {
    let v = stdout_json(&bin(&["scott", "--group", "A4", "--subgroup", "V4"], None));
    assert_eq!(v["result"]["dim"], 1);
}

#[test]
fn blocks_schema() {
    let v = stdout_json(&bin(&["blocks", "--group", "A5"], None));
    let r = &v["result"];
    assert_eq!(r["group"], "A5");
    assert!(r["field_e"].is_u64());
    let blocks = r["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0]["isPrincipal"], true);
    assert_eq!(blocks[0]["regularComponentDim"], 44);
    assert_eq!(blocks[1]["regularComponentDim"], 16);
}

#[test]
fn exit_codes_follow_expectations() {
    let ok = bin(
        &[
            "--expect",
            "true",
            "verify-morita",
            "--left",
            "Q8",
            "--right",
            "Q8",
        ],
        None,
    );
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = bin(
        &[
            "--expect",
            "false",
            "verify-morita",
            "--left",
            "Q8",
            "--right",
            "Q8",
        ],
        None,
    );
    assert_eq!(bad.status.code(), Some(EXIT_MISMATCH));
    let unknown = bin(&["h2", "--group", "NOPE7"], None);
    assert_eq!(unknown.status.code(), Some(EXIT_USAGE));
    let usage = bin(&["frobnicate"], None);
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    let cap = bin(&["h2", "--group", "A5", "--classify"], None);
    assert_eq!(cap.status.code(), Some(EXIT_CAP));
    let structural = bin(
        &["verify-theorem", "--group", "A5", "--representative", "Q8"],
        None,
    );
    assert_eq!(structural.status.code(), Some(EXIT_STRUCTURAL));
}

#[test]
fn exit_code_is_a_function_of_outcome() {
    let yes = json!({ "verdict": true });
    let pair = json!({ "upperVerdict": false, "lowerVerdict": false, "consistent": true });
    assert_eq!(exit_code(Ok(&yes), None), EXIT_OK);
    assert_eq!(exit_code(Ok(&yes), Some(Expect::True)), EXIT_OK);
    assert_eq!(exit_code(Ok(&yes), Some(Expect::False)), EXIT_MISMATCH);
    assert_eq!(exit_code(Ok(&yes), Some(Expect::Consistent)), EXIT_MISMATCH);
    assert_eq!(exit_code(Ok(&pair), Some(Expect::False)), EXIT_OK);
    assert_eq!(exit_code(Ok(&pair), Some(Expect::Consistent)), EXIT_OK);
    assert_eq!(exit_code(Ok(&pair), Some(Expect::True)), EXIT_MISMATCH);
    assert_eq!(
        exit_code(Err(&Error::cap("x", 2, 1)), Some(Expect::True)),
        EXIT_CAP
    );
    assert_eq!(
        exit_code(Err(&Error::Structural("x".into())), None),
        EXIT_STRUCTURAL
    );
}

#[test]
fn warm_cache_reproduces_cold_report() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify-morita", "--left", "SL2_3", "--right", "SL2_3"];
    let cold = stdout_json(&bin(&args, Some(dir.path())));
    let warm = stdout_json(&bin(&args, Some(dir.path())));
    let fresh = stdout_json(&bin(&args, None));
    assert_eq!(cold["result"], warm["result"]);
    assert_eq!(cold["result"]["verdict"], fresh["result"]["verdict"]);
    assert_eq!(cold["result"]["report"], fresh["result"]["report"]);
    // the Scott bimodule was written as evidence
    let modules: Vec<_> = fs::read_dir(dir.path().join("modules")).unwrap().collect();
    assert_eq!(modules.len(), 1);
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path());
    let ctx = JobContext {
        cache: cache.clone(),
        ..JobContext::default()
    };
    let reg = JobRegistry::default();
    let params = json!({ "group": "D8" });
    let first = reg.run("h2", &params, &ctx).unwrap();
    let reports = dir.path().join("reports");
    let entry = fs::read_dir(&reports)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let text = fs::read_to_string(&entry).unwrap();
    fs::write(&entry, text.replace("\"rank\": 3", "\"rank\": 4")).unwrap();
    let key = entry.file_stem().unwrap().to_str().unwrap().to_string();
    assert!(
        cache.load(&key).is_none(),
        "tampered entry must be rejected"
    );
    let again = reg.run("h2", &params, &ctx).unwrap();
    assert_eq!(again.result, first.result);
    assert!(cache.load(&key).is_some());
}

#[test]
fn store_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::at(dir.path());
    let payload = json!({ "result": { "a": [1, 2, 3] }, "fieldE": 2 });
    cache.store("k", &payload);
    assert_eq!(cache.load("k"), Some(payload));
    assert_eq!(Cache::disabled().load("k"), None);
}

#[test]
fn manifest_rejects_duplicate_keys() {
    let job =
        json!({ "key": "a", "kind": "h2", "params": { "group": "D8" }, "provenance": "PAPER" });
    let text = json!({ "schema": 1, "jobs": [job.clone(), job] }).to_string();
    assert!(Manifest::parse(&text).is_err());
}

#[test]
fn manifest_run_reports_mismatches_by_provenance() {
    let text = json!({ "schema": 1, "jobs": [
        { "key": "good", "kind": "h2", "params": { "group": "D8" }, "expect": { "/rank": 3 }, "provenance": "PAPER" },
        { "key": "bad", "kind": "h2", "params": { "group": "D16" }, "expect": { "/rank": 2 }, "provenance": "DERIVED" },
    ]})
    .to_string();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, text).unwrap();
    let o = bin(
        &["run-manifest", path.to_str().unwrap(), "--jobs", "2"],
        None,
    );
    assert_eq!(o.status.code(), Some(EXIT_MISMATCH));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], 1);
    assert_eq!(v["failedByProvenance"]["DERIVED"], 1);
    let keys: Vec<&String> = v["outcomes"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["bad", "good"]);
}

#[test]
fn registry_lists_every_kind() {
    let names = JobRegistry::default().names();
    for k in [
        "h2",
        "classify-extensions",
        "blocks",
        "structure",
        "scott",
        "verify-morita",
        "verify-lifting",
        "verify-theorem",
    ] {
        assert!(names.contains(&k), "{k}");
    }
}

#[test]
fn checked_in_manifest_parses_with_tags() {
    let m = Manifest::parse(include_str!("../manifests/acceptance.json")).unwrap();
    let criteria: std::collections::BTreeSet<u32> =
        m.jobs.iter().filter_map(|j| j.criterion).collect();
    for c in [1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 13] {
        assert!(criteria.contains(&c), "criterion {c}");
    }
}

#[test]
fn theorem_reduction_of_quaternion_groups() {
    use blockmorita_cli::theorem::reduce;
    use blockmorita_core::groups::catalog_group;
    use blockmorita_core::rng::SeededRng;
    let mut rng = SeededRng::default();
    for (g, case, q) in [
        ("SL2_3", 4, Some(3)),
        ("SL2_5", 3, Some(5)),
        ("2PGL2_3", 6, Some(3)),
        ("Q16", 1, None),
    ] {
        let r = reduce(&catalog_group(g).unwrap(), &mut rng).unwrap();
        assert_eq!(r.center_order, 2, "{g}");
        assert_eq!((r.class.case, r.class.q), (case, q), "{g}");
    }
}
