//! Job kinds. Each command of the CLI and each manifest entry is a job:
//! a registered kind plus JSON parameters, run under a seed.

use std::sync::Arc;
use std::time::Instant;

use blockmorita_core::blocks::{block_idempotents, regular_component, stable_field_degree};
use blockmorita_core::cohom2::{
    classify_central_extensions, dihedral_base, h2_basis, restriction_h2,
};
use blockmorita_core::ffield::Field;
use blockmorita_core::groups::{
    catalog_group, center, iso_type_2group, odd_core, sylow2, Group, Subgroup,
};
use blockmorita_core::modrep::is_isomorphic;
use blockmorita_core::rng::{SeededRng, DEFAULT_SEED};
use blockmorita_core::scott::{
    brauer_indecomposable, is_morita_bimodule, scott_bimodule, scott_module, sylow_identification,
    tensor_oracle_verdict, verify_lifting_consistency, vertex_by_brauer, MoritaReport,
};
use blockmorita_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{job_key, Cache};
use crate::subgroups::resolve_subgroup;
use crate::theorem::verify_theorem;

pub const SCHEMA_VERSION: u32 = 1;

/// Scott modules up to this dimension are also checked for self-duality.
pub const SELF_DUALITY_DIM_CAP: usize = 400;

#[derive(Clone, Debug)]
pub struct JobContext {
    pub seed: u64,
    /// Field degree requested with `--field-e`.
    pub field_e: Option<u32>,
    pub cache: Cache,
}

impl Default for JobContext {
    fn default() -> Self {
        JobContext {
            seed: DEFAULT_SEED,
            field_e: None,
            cache: Cache::disabled(),
        }
    }
}

impl JobContext {
    fn field(&self, default: u32) -> Result<Arc<Field>> {
        Field::gf(self.field_e.unwrap_or(default))
    }
}

pub struct JobOutput {
    pub result: Value,
    /// Field degree the computation ended up using.
    pub field_e: u32,
}

pub trait JobKind: Send + Sync {
    fn name(&self) -> &'static str;
    fn run(&self, params: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput>;
}

/// Versioned envelope printed for every job.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub kind: String,
    pub seed: u64,
    pub field_e: u32,
    pub wall_clock_ms: u64,
    pub result: Value,
}

fn params<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialise")
}

fn group(name: &str) -> Result<Arc<Group>> {
    catalog_group(name)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct GroupParams {
    group: String,
    #[serde(default)]
    classify: bool,
    #[serde(default)]
    restrict_to_sylow: bool,
}

struct H2;

impl JobKind for H2 {
    fn name(&self) -> &'static str {
        "h2"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: GroupParams = params(p)?;
        let g = group(&p.group)?;
        let basis = h2_basis(&g)?;
        let mut out = json!({ "group": p.group, "order": g.order(), "rank": basis.rank });
        if p.classify {
            let classes: Vec<Value> = classify_central_extensions(&g)?
                .iter()
                .map(|c| json!({ "index": c.index, "coords": c.coords, "isoType": c.iso_type, "order": c.order }))
                .collect();
            out["classes"] = Value::Array(classes);
        }
        if p.restrict_to_sylow {
            let s = sylow2(&g, rng)?;
            let r = restriction_h2(&g, &s)?;
            out["restriction"] = json!({
                "sylowOrder": s.order(),
                "sourceRank": r.source.rank,
                "targetRank": r.target.rank,
                "imageRank": r.matrix.rank(),
                "injective": r.is_injective(),
            });
            out["verdict"] = Value::Bool(r.is_injective());
        }
        Ok(JobOutput {
            result: out,
            field_e: ctx.field_e.unwrap_or(1),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NParams {
    n: u32,
}

struct ClassifyExtensions;

impl JobKind for ClassifyExtensions {
    fn name(&self) -> &'static str {
        "classify-extensions"
    }

    fn run(&self, p: &Value, ctx: &JobContext, _rng: &mut SeededRng) -> Result<JobOutput> {
        let p: NParams = params(p)?;
        if p.n < 3 {
            return Err(Error::InvalidParameter(format!(
                "n = {} must be at least 3",
                p.n
            )));
        }
        let base = dihedral_base(p.n - 1)?;
        let classes = classify_central_extensions(&base)?;
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for c in &classes {
            *counts.entry(c.iso_type.clone()).or_default() += 1;
        }
        let quaternion = classes
            .iter()
            .filter(|c| c.iso.as_ref().is_some_and(|t| t.is_quaternion()))
            .count();
        let rows: Vec<Value> = classes
            .iter()
            .map(|c| json!({ "index": c.index, "coords": c.coords, "isoType": c.iso_type, "order": c.order }))
            .collect();
        let result = json!({
            "n": p.n,
            "base": base.name(),
            "classCount": classes.len(),
            "classes": rows,
            "isoTypeCounts": counts,
            "quaternionClasses": quaternion,
        });
        Ok(JobOutput {
            result,
            field_e: ctx.field_e.unwrap_or(1),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OneGroup {
    group: String,
}

struct Blocks;

impl JobKind for Blocks {
    fn name(&self) -> &'static str {
        "blocks"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: OneGroup = params(p)?;
        let g = group(&p.group)?;
        let e = match ctx.field_e {
            Some(e) => e,
            None => stable_field_degree(&g, 1)?,
        };
        let field = Field::gf(e)?;
        let mut blocks = Vec::new();
        for (index, b) in block_idempotents(&g, &field, rng)?.iter().enumerate() {
            let dim = regular_component(b)?.0.dim();
            blocks.push(json!({ "index": index, "isPrincipal": b.is_principal(), "regularComponentDim": dim }));
        }
        let result = json!({ "group": p.group, "field_e": e, "blocks": blocks });
        Ok(JobOutput { result, field_e: e })
    }
}

struct Structure;

impl JobKind for Structure {
    fn name(&self) -> &'static str {
        "structure"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: OneGroup = params(p)?;
        let g = group(&p.group)?;
        let s = sylow2(&g, rng)?;
        let (sg, _) = s.to_group("P")?;
        let t = iso_type_2group(&sg)?;
        let result = json!({
            "group": p.group,
            "order": g.order(),
            "centerOrder": center(&g)?.order(),
            "oddCoreOrder": odd_core(&g)?.order(),
            "sylowOrder": s.order(),
            "sylowIsoType": t.to_string(),
            "sylowIsQuaternion": t.is_quaternion(),
        });
        Ok(JobOutput {
            result,
            field_e: ctx.field_e.unwrap_or(1),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScottParams {
    group: String,
    subgroup: String,
}

struct Scott;

impl JobKind for Scott {
    fn name(&self) -> &'static str {
        "scott"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: ScottParams = params(p)?;
        let g = group(&p.group)?;
        let h = resolve_subgroup(&g, &p.subgroup, rng)?;
        let field = ctx.field(1)?;
        let sc = scott_module(&h, &field, rng)?;
        let self_dual = if sc.dim() <= SELF_DUALITY_DIM_CAP {
            Some(is_isomorphic(&sc.module, &sc.module.dual(), rng)?)
        } else {
            None
        };
        let sylow_h = sylow_of_subgroup(&h, rng)?;
        let vertex = vertex_by_brauer(&sc.module, &sylow_h)?;
        let evidence = ctx
            .cache
            .store_module(&sc.module)
            .map(|p| p.display().to_string());
        let result = json!({
            "group": p.group,
            "subgroup": p.subgroup,
            "subgroupOrder": h.order(),
            "dim": sc.dim(),
            "permutationDim": sc.permutation_dim(),
            "method": to_value(&sc.certificate.method),
            "unique": sc.certificate.unique,
            "homToTrivial": sc.certificate.hom_to_trivial,
            "homFromTrivial": sc.certificate.hom_from_trivial,
            "indecomposability": to_value(&sc.certificate.indecomposability),
            "selfDual": self_dual,
            "vertexOrder": vertex.order(),
            "sylowOfSubgroupOrder": sylow_h.order(),
            "evidence": evidence,
        });
        Ok(JobOutput {
            result,
            field_e: field.degree(),
        })
    }
}

/// A Sylow 2-subgroup of `h`, as a subgroup of the parent group.
fn sylow_of_subgroup(h: &Subgroup, rng: &mut SeededRng) -> Result<Subgroup> {
    let (hg, emb) = h.to_group("H")?;
    let s = sylow2(&hg, rng)?;
    let gens: Vec<_> = s.gens().iter().map(|&x| emb[x as usize]).collect();
    Ok(Subgroup::generated(h.parent(), &gens))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairParams {
    left: String,
    right: String,
    #[serde(default)]
    oracle: bool,
    #[serde(default)]
    brauer: bool,
}

struct VerifyMorita;

impl JobKind for VerifyMorita {
    fn name(&self) -> &'static str {
        "verify-morita"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: PairParams = params(p)?;
        let (g, h) = (group(&p.left)?, group(&p.right)?);
        let id = sylow_identification(&g, &h, rng)?;
        let field = ctx.field(1)?;
        let bim = scott_bimodule(&id, &field, rng)?;
        log::info!("Scott bimodule of dimension {}", bim.scott.dim());
        let report: MoritaReport = is_morita_bimodule(bim.module(), rng)?;
        let oracle = if p.oracle {
            let o = tensor_oracle_verdict(bim.module(), rng)?;
            if o.verdict != report.verdict {
                return Err(Error::Structural(format!(
                    "tensor oracle ({}) disagrees with the progenerator criterion ({})",
                    o.verdict, report.verdict
                )));
            }
            Some(o)
        } else {
            None
        };
        let brauer = if p.brauer {
            Some(brauer_indecomposable(bim.module(), &bim.diagonal, rng)?)
        } else {
            None
        };
        let evidence = ctx
            .cache
            .store_module(bim.module())
            .map(|p| p.display().to_string());
        let result = json!({
            "left": p.left,
            "right": p.right,
            "scottDim": bim.scott.dim(),
            "permutationDim": bim.scott.permutation_dim(),
            "scottMethod": to_value(&bim.scott.certificate.method),
            "verdict": report.verdict,
            "report": to_value(&report),
            "oracle": oracle.as_ref().map(to_value),
            "brauerIndecomposable": brauer,
            "evidence": evidence,
        });
        Ok(JobOutput {
            result,
            field_e: report.field_e,
        })
    }
}

struct VerifyLifting;

impl JobKind for VerifyLifting {
    fn name(&self) -> &'static str {
        "verify-lifting"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: PairParams = params(p)?;
        let (g, h) = (group(&p.left)?, group(&p.right)?);
        let (zg, zh) = (center(&g)?, center(&h)?);
        let id = sylow_identification(&g, &h, rng)?;
        let field = ctx.field(1)?;
        let r = verify_lifting_consistency(&id, &zg, &zh, &field, rng)?;
        let result = json!({
            "left": p.left,
            "right": p.right,
            "leftCenterOrder": zg.order(),
            "rightCenterOrder": zh.order(),
            "upperVerdict": r.upper.verdict,
            "lowerVerdict": r.lower.verdict,
            "consistent": r.consistent,
            "report": to_value(&r),
        });
        Ok(JobOutput {
            result,
            field_e: r.upper.field_e.max(r.lower.field_e),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoremParams {
    group: String,
    representative: String,
}

struct VerifyTheorem;

impl JobKind for VerifyTheorem {
    fn name(&self) -> &'static str {
        "verify-theorem"
    }

    fn run(&self, p: &Value, ctx: &JobContext, rng: &mut SeededRng) -> Result<JobOutput> {
        let p: TheoremParams = params(p)?;
        let field = ctx.field(1)?;
        let r = verify_theorem(&p.group, &p.representative, &field, rng)?;
        let mut result = to_value(&r);
        result["verdict"] = Value::Bool(r.quaternion_level_verdict);
        Ok(JobOutput {
            result,
            field_e: r.morita.field_e,
        })
    }
}

/// Job kinds by name.
pub struct JobRegistry {
    kinds: Vec<Box<dyn JobKind>>,
}

impl JobRegistry {
    pub fn empty() -> Self {
        JobRegistry { kinds: Vec::new() }
    }

    pub fn register(&mut self, k: Box<dyn JobKind>) {
        self.kinds.push(k);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.kinds.iter().map(|k| k.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn JobKind> {
        self.kinds
            .iter()
            .find(|k| k.name() == name)
            .map(|k| k.as_ref())
    }

    /// Runs a job, consulting the cache first.
    pub fn run(&self, kind: &str, params: &Value, ctx: &JobContext) -> Result<Report> {
        let job = self
            .get(kind)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown job kind `{kind}`")))?;
        let start = Instant::now();
        let key = job_key(kind, params, ctx.seed, ctx.field_e);
        let (result, field_e) = match ctx.cache.load(&key).and_then(split_cached) {
            Some(hit) => {
                log::info!("{kind}: cache hit {key}");
                hit
            }
            None => {
                let mut rng = SeededRng::for_tag(ctx.seed, kind);
                let out = job.run(params, ctx, &mut rng)?;
                ctx.cache.store(
                    &key,
                    &json!({ "result": out.result, "fieldE": out.field_e }),
                );
                (out.result, out.field_e)
            }
        };
        Ok(Report {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            kind: kind.to_string(),
            seed: ctx.seed,
            field_e,
            wall_clock_ms: start.elapsed().as_millis() as u64,
            result,
        })
    }
}

fn split_cached(v: Value) -> Option<(Value, u32)> {
    let e = v.get("fieldE")?.as_u64()? as u32;
    Some((v.get("result")?.clone(), e))
}

impl Default for JobRegistry {
    fn default() -> Self {
        let mut r = JobRegistry::empty();
        r.register(Box::new(H2));
        r.register(Box::new(ClassifyExtensions));
        r.register(Box::new(Blocks));
        r.register(Box::new(Structure));
        r.register(Box::new(Scott));
        r.register(Box::new(VerifyMorita));
        r.register(Box::new(VerifyLifting));
        r.register(Box::new(VerifyTheorem));
        r
    }
}
