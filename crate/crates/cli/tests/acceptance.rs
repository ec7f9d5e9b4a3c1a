//! The acceptance battery: one PASS/FAIL line per criterion. Expected
//! values for job-shaped checks live in `manifests/acceptance.json`; the
//! rest are computed here. Time limits are pinned below.

use std::time::{Duration, Instant};

use blockmorita_cli::manifest::{run_manifest, Manifest};
use blockmorita_cli::subgroups::resolve_subgroup;
use blockmorita_cli::{JobContext, JobRegistry};
use blockmorita_core::ffield::{Fe, Field, FieldMatrix};
use blockmorita_core::groups::{catalog_group, center, subgroup_classes, sylow2, Subgroup};
use blockmorita_core::modrep::{
    brauer_quotient, decompose, fixed_coset_count, is_isomorphic, GModule,
};
use blockmorita_core::rng::SeededRng;
use blockmorita_core::scott::{scott_equals_sylow_scott, verify_scott_quotient_push};
use serde_json::json;

const MANIFEST: &str = include_str!("../manifests/acceptance.json");

const FIELD_ORACLE_CASES: usize = 2000;
const MATRIX_ORACLE_CASES: usize = 200;
const BRAUER_INDEX_CAP: usize = 2000;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    check: fn() -> Result<String, String>,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "H^2 of dihedral groups has rank 3",
        limit: secs(30),
        check: manifest_only::<1>,
    },
    Criterion {
        id: 2,
        title: "central extensions of dihedral groups",
        limit: secs(120),
        check: manifest_only::<2>,
    },
    Criterion {
        id: 3,
        title: "restriction to a Sylow subgroup is injective",
        limit: secs(120),
        check: manifest_only::<3>,
    },
    Criterion {
        id: 4,
        title: "structure battery",
        limit: secs(300),
        check: manifest_only::<4>,
    },
    Criterion {
        id: 5,
        title: "Scott identities",
        limit: secs(300),
        check: scott_identities,
    },
    Criterion {
        id: 6,
        title: "Scott modules push to central quotients",
        limit: secs(60),
        check: quotient_push,
    },
    Criterion {
        id: 7,
        title: "self-Morita with tensor oracle",
        limit: secs(120),
        check: manifest_only::<7>,
    },
    Criterion {
        id: 8,
        title: "Sc(A4 x PSL2(11), dV4) is Morita",
        limit: secs(600),
        check: manifest_only::<8>,
    },
    Criterion {
        id: 9,
        title: "Sc(SL2(3) x SL2(11), dQ8) is Morita",
        limit: secs(1800),
        check: manifest_only::<9>,
    },
    Criterion {
        id: 10,
        title: "negative controls",
        limit: secs(120),
        check: manifest_only::<10>,
    },
    Criterion {
        id: 11,
        title: "lifting consistency",
        limit: secs(600),
        check: manifest_only::<11>,
    },
    Criterion {
        id: 12,
        title: "Brauer indecomposability",
        limit: secs(600),
        check: manifest_only::<12>,
    },
    Criterion {
        id: 13,
        title: "property suites",
        limit: secs(600),
        check: property_suites,
    },
];

fn run_manifest_criterion(id: u32) -> Result<String, String> {
    let manifest = Manifest::parse(MANIFEST).map_err(|e| e.to_string())?;
    let registry = JobRegistry::default();
    let report = run_manifest(&registry, &manifest, &JobContext::default(), 1, |j| {
        j.criterion == Some(id)
    });
    if report.outcomes.is_empty() {
        return Err("no manifest jobs".into());
    }
    let failures: Vec<String> = report
        .outcomes
        .values()
        .filter(|o| !o.passed)
        .map(|o| {
            format!(
                "{} [{:?}]: {}",
                o.key,
                o.provenance,
                o.error.clone().unwrap_or_else(|| o.mismatches.join("; "))
            )
        })
        .collect();
    if failures.is_empty() {
        Ok(format!("{} manifest jobs", report.outcomes.len()))
    } else {
        Err(failures.join(" | "))
    }
}

fn manifest_only<const ID: u32>() -> Result<String, String> {
    run_manifest_criterion(ID)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn scott_identities() -> Result<String, String> {
    let jobs = run_manifest_criterion(5)?;
    let mut rng = SeededRng::default();
    for (g, h) in [("S4", "S3"), ("A5", "A4")] {
        let g = catalog_group(g).map_err(err)?;
        let h = resolve_subgroup(&g, h, &mut rng).map_err(err)?;
        if !scott_equals_sylow_scott(&h, &Field::gf(2).map_err(err)?, &mut rng).map_err(err)? {
            return Err(format!(
                "Sc({}, H) differs from Sc({}, Syl(H))",
                g.name(),
                g.name()
            ));
        }
    }
    Ok(format!("{jobs}, Sylow reduction on 2 pairs"))
}

fn quotient_push() -> Result<String, String> {
    let mut rng = SeededRng::default();
    for g in ["SL2_3", "SL2_5"] {
        let g = catalog_group(g).map_err(err)?;
        let q = sylow2(&g, &mut rng).map_err(err)?;
        let z = center(&g).map_err(err)?;
        if !verify_scott_quotient_push(&q, &z, &Field::gf(2).map_err(err)?, &mut rng)
            .map_err(err)?
        {
            return Err(format!("push fails for {}", g.name()));
        }
    }
    Ok("SL2(3) and SL2(5) with Q8 and the centre".into())
}

fn clmul_mod(a: u32, b: u32, modulus: u32, e: u32) -> u32 {
    let mut acc: u64 = 0;
    for i in 0..e {
        if b >> i & 1 == 1 {
            acc ^= (a as u64) << i;
        }
    }
    for bit in (e..2 * e).rev() {
        if acc >> bit & 1 == 1 {
            acc ^= (modulus as u64) << (bit - e);
        }
    }
    acc as u32
}

fn field_oracles(rng: &mut SeededRng) -> Result<usize, String> {
    for i in 0..FIELD_ORACLE_CASES {
        let e = 1 + (i % 16) as u32;
        let f = Field::gf(e).map_err(err)?;
        let (a, b) = (rng.element(&f), rng.element(&f));
        if f.mul(a, b) as u32 != clmul_mod(a as u32, b as u32, f.modulus(), e) {
            return Err(format!("GF(2^{e}): {a} * {b}"));
        }
    }
    for i in 0..MATRIX_ORACLE_CASES {
        let f = Field::gf(1 + (i % 16) as u32).map_err(err)?;
        let n = 1 + rng.below(12);
        let a = FieldMatrix::random(&f, n, n, rng);
        match a.inverse() {
            Some(inv) if !a.mul(&inv).is_identity() => {
                return Err(format!("inverse of a {n} x {n} matrix"))
            }
            None if a.rank() == n => return Err("full-rank matrix without inverse".into()),
            _ => {}
        }
        let ns = a.nullspace_basis();
        if ns.rows() + a.rank() != n || !a.mul(&ns.transpose()).is_zero() {
            return Err("nullspace size or annihilation".into());
        }
    }
    Ok(FIELD_ORACLE_CASES + MATRIX_ORACLE_CASES)
}

fn battery() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("S4", vec!["trivial", "C2", "C3", "S3", "V4", "D8", "A4"]),
        ("A4", vec!["trivial", "C2", "C3", "V4"]),
        ("A5", vec!["trivial", "C2", "V4", "S3", "A4", "D10"]),
        ("SL2_3", vec!["trivial", "center", "C3", "Q8"]),
        ("SL2_5", vec!["center", "Q8", "C3", "SL2_3"]),
        ("D8", vec!["trivial", "C2", "C4", "V4"]),
        ("Q16", vec!["center", "C4", "Q8"]),
    ]
}

fn decomposition_validity(rng: &mut SeededRng) -> Result<usize, String> {
    let mut count = 0;
    let f = Field::gf(2).map_err(err)?;
    for (g, subs) in [
        ("S4", vec!["C2", "S3", "V4"]),
        ("A5", vec!["A4", "S3"]),
        ("SL2_3", vec!["C3", "center"]),
    ] {
        let g = catalog_group(g).map_err(err)?;
        for h in subs {
            let h = resolve_subgroup(&g, h, rng).map_err(err)?;
            let v = GModule::permutation_module(&h, &f).map_err(err)?;
            let d = decompose(&v, rng).map_err(err)?;
            if d.dims().iter().sum::<usize>() != v.dim() {
                return Err(format!("{}: summand dims do not add up", g.name()));
            }
            let mut all: Option<FieldMatrix> = None;
            for s in &d.summands {
                if s.embeddings.len() != s.multiplicity {
                    return Err("multiplicity and embeddings disagree".into());
                }
                for emb in &s.embeddings {
                    let w = v.submodule(emb).map_err(err)?;
                    if !is_isomorphic(&w, &s.module, rng).map_err(err)? {
                        return Err("copy of a summand is not isomorphic to it".into());
                    }
                    all = Some(match all {
                        None => emb.clone(),
                        Some(m) => m.vstack(emb).map_err(err)?,
                    });
                }
            }
            if all.map_or(0, |m| m.rank()) != v.dim() {
                return Err(format!("{}: summands do not span", g.name()));
            }
            count += 1;
        }
    }
    Ok(count)
}

fn brauer_vs_fixed_cosets(rng: &mut SeededRng) -> Result<usize, String> {
    let f = Field::gf(1).map_err(err)?;
    let mut count = 0;
    for (g, subs) in battery() {
        let g = catalog_group(g).map_err(err)?;
        let p = sylow2(&g, rng).map_err(err)?;
        let qs: Vec<Subgroup> = subgroup_classes(&p, 64).map_err(err)?;
        for h in subs {
            let h = resolve_subgroup(&g, h, rng).map_err(err)?;
            if h.index() > BRAUER_INDEX_CAP {
                continue;
            }
            let v = GModule::permutation_module(&h, &f).map_err(err)?;
            for q in qs.iter().filter(|q| q.order() > 1) {
                let bq = brauer_quotient(&v, q).map_err(err)?;
                if bq.module.dim() != fixed_coset_count(&h, q) {
                    return Err(format!(
                        "{}: Brauer quotient at order {} has the wrong dimension",
                        g.name(),
                        q.order()
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn determinism() -> Result<(), String> {
    let registry = JobRegistry::default();
    let ctx = JobContext::default();
    let params = json!({ "left": "SL2_3", "right": "SL2_3" });
    let a = registry.run("verify-morita", &params, &ctx).map_err(err)?;
    let b = registry.run("verify-morita", &params, &ctx).map_err(err)?;
    if a.result != b.result {
        return Err("two runs with one seed differ".into());
    }
    let f = Field::gf(2).map_err(err)?;
    let g = catalog_group("S4").map_err(err)?;
    let h = Subgroup::generated(&g, &[g.gens()[0]]);
    let v = GModule::permutation_module(&h, &f).map_err(err)?;
    let d1 = decompose(&v, &mut SeededRng::new(7)).map_err(err)?;
    let d2 = decompose(&v, &mut SeededRng::new(7)).map_err(err)?;
    let embs = |d: &blockmorita_core::modrep::Decomposition| -> Vec<Vec<Vec<Fe>>> {
        d.summands
            .iter()
            .flat_map(|s| s.embeddings.iter().map(|m| m.to_rows()))
            .collect()
    };
    if embs(&d1) != embs(&d2) {
        return Err("decomposition is not reproducible".into());
    }
    Ok(())
}

fn property_suites() -> Result<String, String> {
    let mut rng = SeededRng::new(0x5eed);
    let oracles = field_oracles(&mut rng)?;
    let decs = decomposition_validity(&mut rng)?;
    let bqs = brauer_vs_fixed_cosets(&mut rng)?;
    determinism()?;
    let seeds = run_manifest_criterion(13)?;
    Ok(format!(
        "{oracles} arithmetic oracle cases, {decs} decompositions, {bqs} Brauer quotients, determinism, seed stability ({seeds})"
    ))
}

#[test]
fn acceptance_suite() {
    let mut failed = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.check)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > c.limit => {
                Err(format!("{detail}; took {took:.1?}, limit {:?}", c.limit))
            }
            other => other,
        };
        match &outcome {
            Ok(detail) => println!(
                "criterion {:>2}: PASS  {} ({detail}; {took:.1?})",
                c.id, c.title
            ),
            Err(why) => {
                println!(
                    "criterion {:>2}: FAIL  {} ({why}; {took:.1?})",
                    c.id, c.title
                );
                failed.push(c.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn limits_are_pinned() {
    let ids: Vec<u32> = CRITERIA.iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=13).collect::<Vec<_>>());
    assert_eq!(CRITERIA[8].limit, secs(1800));
}
