//! Scott modules, Scott bimodules, vertices, Brauer indecomposability and
//! Morita equivalence checks for principal blocks.
//!
//! A module for `G x H` is read as a `(kG, kH)`-bimodule through
//! `g m h = m (g^-1, h)`.

use std::sync::Arc;

use serde::Serialize;

use crate::blocks::{
    block_component, block_component_by, cartan_matrix, principal_idempotent, regular_component,
    CartanMatrix,
};
use crate::error::{check_cap, Error, Result};
use crate::ffield::{Fe, Field, FieldMatrix};
use crate::groups::{
    central_quotient, centralizer, conjugating_element, diagonal_subgroup, subgroup_classes,
    sylow2, Elem, Group, Identification, Subgroup,
};
use crate::modrep::{
    brauer_quotient_over, chop, chop_split, decompose, endomorphism_ring_is_local, hom_dim,
    is_indecomposable, is_isomorphic, Certificate, GModule, HeckeAlgebra,
};
use crate::rng::SeededRng;

/// Largest index handled at all.
pub const SCOTT_INDEX_CAP: usize = 8000;
/// Permutation modules up to this dimension are decomposed completely;
/// larger ones go through an idempotent of the Hecke algebra.
pub const FULL_DECOMPOSITION_CAP: usize = 600;
/// Largest `dim M * dim N` for the tensor oracle.
pub const TENSOR_ORACLE_CAP: usize = 6000;
/// Largest subgroup lattice base for Brauer checks.
pub const LATTICE_CAP: usize = 64;
/// Largest product order for Brauer indecomposability.
pub const BRAUER_PRODUCT_CAP: usize = 10_000;
/// Factors up to this order also get Cartan matrices in Morita reports.
pub const CARTAN_EVIDENCE_CAP: usize = 200;

const HECKE_ROUNDS: usize = 400;
const HECKE_CHECK_EVERY: usize = 8;

#[derive(Clone, Debug, Serialize)]
#[serde(
    tag = "kind",
    rename_all = "kebab-case",
    rename_all_fields = "camelCase"
)]
pub enum ScottMethod {
    /// The whole permutation module was decomposed.
    FullDecomposition { summand_dims: Vec<usize> },
    /// Image of an idempotent of `End(k[H\G])` acting as 1 on the trivial
    /// quotient; uniqueness from `dim Hom(k[H\G], k) = 1`.
    HeckeIdempotent { hecke_dim: usize },
}

#[derive(Clone, Debug)]
pub struct ScottCertificate {
    pub method: ScottMethod,
    /// Basis of the summand in the coset basis of `k[H\G]`.
    pub embedding: FieldMatrix,
    pub hom_to_trivial: usize,
    pub hom_from_trivial: usize,
    pub unique: bool,
    pub indecomposability: Certificate,
}

#[derive(Clone, Debug)]
pub struct ScottModule {
    pub module: GModule,
    pub subgroup: Subgroup,
    pub certificate: ScottCertificate,
}

impl ScottModule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn permutation_dim(&self) -> usize {
        self.subgroup.index()
    }
}

/// `Sc(G, H)`: the summand of `k[H\G]` with the trivial module in its top.
pub fn scott_module(h: &Subgroup, field: &Arc<Field>, rng: &mut SeededRng) -> Result<ScottModule> {
    check_cap("index for Scott modules", h.index(), SCOTT_INDEX_CAP)?;
    let g = h.parent();
    let perm = GModule::permutation_module(h, field)?;
    let triv = GModule::trivial(g, field);
    if perm.dim() > FULL_DECOMPOSITION_CAP {
        return scott_by_hecke(h, &perm, &triv, rng);
    }
    let dec = decompose(&perm, rng)?;
    let mut found = Vec::new();
    for s in &dec.summands {
        if hom_dim(&s.module, &triv, rng)? > 0 {
            found.push(s);
        }
    }
    if found.len() != 1 || found[0].multiplicity != 1 {
        let copies: usize = found.iter().map(|s| s.multiplicity).sum();
        return Err(Error::Structural(format!(
            "{copies} summands of the permutation module have a trivial quotient"
        )));
    }
    let s = found[0];
    let hom_from_trivial = hom_dim(&triv, &s.module, rng)?;
    if hom_from_trivial == 0 {
        return Err(Error::Structural(
            "Scott module has no trivial submodule".into(),
        ));
    }
    log::debug!(
        "Scott module of {} in {}: dim {}",
        h.order(),
        g.name(),
        s.module.dim()
    );
    Ok(ScottModule {
        module: s.module.clone(),
        subgroup: h.clone(),
        certificate: ScottCertificate {
            method: ScottMethod::FullDecomposition {
                summand_dims: dec.dims(),
            },
            embedding: s.embeddings[0].clone(),
            hom_to_trivial: hom_dim(&s.module, &triv, rng)?,
            hom_from_trivial,
            unique: true,
            indecomposability: s.certificate,
        },
    })
}

fn scott_by_hecke(
    h: &Subgroup,
    perm: &GModule,
    triv: &GModule,
    rng: &mut SeededRng,
) -> Result<ScottModule> {
    let cs = perm
        .cosets()
        .expect("permutation module keeps its cosets")
        .clone();
    let field = perm.field().clone();
    // a transitive permutation module has exactly one trivial quotient
    let tops = hom_dim(perm, triv, rng)?;
    if tops != 1 {
        return Err(Error::Structural(format!(
            "transitive permutation module with {tops} trivial quotients"
        )));
    }
    log::info!("Hecke algebra for {} cosets", cs.len());
    let hecke = HeckeAlgebra::new(&cs, &field);
    log::info!("Hecke algebra has dimension {}", hecke.dim());
    let mut found: Option<(GModule, FieldMatrix)> = None;
    let mut local_rng = rng.clone();
    let e = hecke.chi_idempotent(rng, HECKE_ROUNDS, HECKE_CHECK_EVERY, |e| {
        let ech = perm.spin(&hecke.base_image(e));
        let basis = ech.inserted().clone();
        let w = perm.submodule(&basis)?;
        log::debug!("candidate Scott summand of dim {}", w.dim());
        match endomorphism_ring_is_local(&w, &mut local_rng)? {
            Some(true) => {
                found = Some((w, basis));
                Ok(true)
            }
            _ => Ok(false),
        }
    })?;
    debug_assert_eq!(hecke.chi(&e), 1);
    let (module, embedding) = found.expect("accepted idempotent has a module");
    let hom_from_trivial = hom_dim(triv, &module, rng)?;
    if hom_from_trivial == 0 {
        return Err(Error::Structural(
            "Scott module has no trivial submodule".into(),
        ));
    }
    Ok(ScottModule {
        certificate: ScottCertificate {
            method: ScottMethod::HeckeIdempotent {
                hecke_dim: hecke.dim(),
            },
            embedding,
            hom_to_trivial: hom_dim(&module, triv, rng)?,
            hom_from_trivial,
            unique: true,
            indecomposability: Certificate::LocalEndomorphismRing,
        },
        module,
        subgroup: h.clone(),
    })
}

/// `Sc(G, H) = Sc(G, Q)` for `Q` a Sylow 2-subgroup of `H`.
pub fn scott_equals_sylow_scott(
    h: &Subgroup,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<bool> {
    let (hg, emb) = h.to_group("H")?;
    let q = sylow2(&hg, rng)?;
    let members: Vec<Elem> = q.members().iter().map(|&x| emb[x as usize]).collect();
    let q = Subgroup::from_members(h.parent(), &members)?;
    let a = scott_module(h, field, rng)?;
    let b = scott_module(&q, field, rng)?;
    is_isomorphic(&a.module, &b.module, rng)
}

/// A vertex of an indecomposable trivial-source module: a largest
/// subgroup `Q` of `p` with `V(Q) != 0`.
pub fn vertex_by_brauer(v: &GModule, p: &Subgroup) -> Result<Subgroup> {
    let mut classes = subgroup_classes(p, LATTICE_CAP)?;
    classes.reverse();
    for q in classes {
        if brauer_quotient_over(v, &q, &q)?.module.dim() > 0 {
            return Ok(q);
        }
    }
    Err(Error::Structural(
        "Brauer quotient vanishes at the trivial subgroup".into(),
    ))
}

/// `Sc(G x H, Delta P)` together with its bimodule bookkeeping.
#[derive(Clone, Debug)]
pub struct ScottBimodule {
    pub scott: ScottModule,
    pub product: Arc<Group>,
    pub diagonal: Subgroup,
    pub identification: Identification,
    /// The principal-block component `e_0 M f_0` is all of `M`.
    pub principal_component: bool,
}

impl ScottBimodule {
    pub fn module(&self) -> &GModule {
        &self.scott.module
    }
}

/// The direct product with factors `g` and `h`.
pub fn product_group(g: &Arc<Group>, h: &Arc<Group>) -> Result<Arc<Group>> {
    Ok(Arc::new(Group::direct_product(g, h)?))
}

/// Sylow 2-subgroups of `g` and `h` identified by an isomorphism.
pub fn sylow_identification(
    g: &Arc<Group>,
    h: &Arc<Group>,
    rng: &mut SeededRng,
) -> Result<Identification> {
    let p = sylow2(g, rng)?;
    let q = sylow2(h, rng)?;
    Identification::search(&p, &q)
}

pub fn scott_bimodule(
    id: &Identification,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<ScottBimodule> {
    let g = id.left.parent().clone();
    let h = id.right.parent().clone();
    let product = product_group(&g, &h)?;
    let diagonal = diagonal_subgroup(&product, id)?;
    let scott = scott_module(&diagonal, field, rng)?;
    let e0 = principal_idempotent(&g, field, rng)?;
    let f0 = principal_idempotent(&h, field, rng)?;
    let prod = product.clone();
    let coeff = move |x: Elem| {
        let (a, b) = prod.split(x).expect("element of the product");
        field_mul(&e0, &f0, a, b)
    };
    let (component, _) = block_component_by(&scott.module, &coeff)?;
    let principal_component = component.dim() == scott.dim();
    if !principal_component {
        return Err(Error::Structural(
            "Scott bimodule is not in the principal blocks".into(),
        ));
    }
    Ok(ScottBimodule {
        scott,
        product,
        diagonal,
        identification: id.clone(),
        principal_component,
    })
}

fn field_mul(
    e0: &crate::blocks::CentralIdempotent,
    f0: &crate::blocks::CentralIdempotent,
    a: Elem,
    b: Elem,
) -> Fe {
    e0.field.mul(e0.coefficient_of(a), f0.coefficient_of(b))
}

/// The factors of a product group.
fn factors(m: &GModule) -> Result<(Arc<Group>, Arc<Group>)> {
    m.group().factors().cloned().ok_or_else(|| {
        Error::InvalidParameter(format!("{} is not a direct product", m.group().name()))
    })
}

/// `M` restricted to `G x 1` (`left`) or `1 x H`, as a module for the factor.
pub fn side_module(m: &GModule, left: bool) -> Result<GModule> {
    let (g, h) = factors(m)?;
    let na = g.gens().len();
    if left {
        GModule::new(&g, m.field(), m.matrices()[..na].to_vec())
    } else {
        GModule::new(&h, m.field(), m.matrices()[na..].to_vec())
    }
}

/// The dual with the factors exchanged: the `(kH, kG)`-bimodule
/// `Hom_k(M, k)` as a module for `H x G`.
pub fn opposite_dual(m: &GModule, swapped: &Arc<Group>) -> Result<GModule> {
    let (g, _) = factors(m)?;
    let na = g.gens().len();
    let d = m.dual();
    let mut ms = d.matrices()[na..].to_vec();
    ms.extend_from_slice(&d.matrices()[..na]);
    GModule::new(swapped, m.field(), ms)
}

/// `B_0(kG)` as a `(kG, kG)`-bimodule, inside `k[Delta G \ (G x G)]`.
pub fn principal_block_bimodule(
    prod: &Arc<Group>,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<GModule> {
    let (g, g2) = prod
        .factors()
        .cloned()
        .ok_or_else(|| Error::InvalidParameter("not a direct product".into()))?;
    if !Arc::ptr_eq(&g, &g2) {
        return Err(Error::InvalidParameter(
            "both factors must be the same group".into(),
        ));
    }
    let id = Identification::identity(&Subgroup::whole(&g));
    let diag = diagonal_subgroup(prod, &id)?;
    let perm = GModule::permutation_module(&diag, field)?;
    let cs = perm.cosets().expect("cosets").clone();
    let e0 = principal_idempotent(&g, field, rng)?;
    // the coset of (1, x) corresponds to x
    let mut v = FieldMatrix::zeros(field, 1, perm.dim());
    for x in g.elements() {
        let c = e0.coefficient_of(x);
        if c != 0 {
            let i = cs.coset_of[prod.pair(0, x).expect("pair") as usize] as usize;
            v.set(0, i, c);
        }
    }
    let basis = perm.spin(&v).inserted().clone();
    perm.submodule(&basis)
}

/// `M (x)_{kH} N` for `M` over `G x H` and `N` over `H x G'`, as a module
/// for `target = G x G'`.
pub fn tensor_oracle(m: &GModule, n: &GModule, target: &Arc<Group>) -> Result<GModule> {
    let (g, h) = factors(m)?;
    let (h2, g2) = factors(n)?;
    let (tg, tg2) = target
        .factors()
        .cloned()
        .ok_or_else(|| Error::InvalidParameter("target is not a product".into()))?;
    if !Arc::ptr_eq(&h, &h2) || !Arc::ptr_eq(&g, &tg) || !Arc::ptr_eq(&g2, &tg2) {
        return Err(Error::InvalidParameter("factors do not match".into()));
    }
    if !Arc::ptr_eq(m.field(), n.field()) {
        return Err(Error::FieldMismatch);
    }
    let (dm, dn) = (m.dim(), n.dim());
    check_cap("tensor oracle dimension", dm * dn, TENSOR_ORACLE_CAP)?;
    let f = m.field();
    let na = g.gens().len();
    let nh = h.gens().len();
    let im = FieldMatrix::identity(f, dm);
    let inn = FieldMatrix::identity(f, dn);
    let nprod = n.group();
    let mut rel: Option<FieldMatrix> = None;
    for (j, &s) in h.gens().iter().enumerate() {
        let a = m.gen_matrix(na + j).kronecker(&inn)?;
        let x = nprod.pair(h.inv(s), 0).expect("pair");
        let b = im.kronecker(&n.matrix_of(x))?;
        let r = a.add(&b)?;
        rel = Some(match rel {
            None => r,
            Some(acc) => acc.vstack(&r)?,
        });
    }
    let mut gens = Vec::new();
    for i in 0..na {
        gens.push(m.gen_matrix(i).kronecker(&inn)?);
    }
    for j in 0..g2.gens().len() {
        gens.push(im.kronecker(n.gen_matrix(nh + j))?);
    }
    let t = GModule::new(target, f, gens)?;
    match rel {
        None => Ok(t),
        Some(r) => Ok(t.quotient(&r.row_space_basis())?.0),
    }
}

/// What a Morita criterion found.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SideEvidence {
    pub group: String,
    /// Dimensions of the simple modules of the principal block.
    pub simple_dims: Vec<usize>,
    /// `dim Hom(M, S)` per simple.
    pub hom_multiplicities: Vec<usize>,
    /// `[M : S]` per simple.
    pub composition_multiplicities: Vec<usize>,
    pub dim_principal_block: usize,
    pub cartan: Option<CartanMatrix>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MoritaReport {
    pub left_projective: bool,
    pub right_projective: bool,
    pub left_generator: bool,
    pub right_generator: bool,
    pub dim_end_left: Option<usize>,
    pub dim_principal_block_right: usize,
    pub dim_end_right: Option<usize>,
    pub dim_principal_block_left: usize,
    pub verdict: bool,
    pub field_e: u32,
    pub module_dim: usize,
    pub left: SideEvidence,
    pub right: SideEvidence,
    /// Equal simple counts and permutation-congruent Cartan matrices,
    /// when Cartan matrices were computed.
    pub cartan_congruent: Option<bool>,
}

struct Side {
    module: GModule,
    simples: Vec<GModule>,
    dim_block: usize,
    cartan: Option<CartanMatrix>,
}

fn side_data(v: &GModule, rng: &mut SeededRng) -> Result<(Vec<GModule>, u32)> {
    let g = v.group();
    let p = sylow2(g, rng)?;
    // every simple is a quotient of k[P\G], since S^P != 0
    let perm = GModule::permutation_module(&p, v.field())?;
    let res = chop_split(&perm, rng)?;
    Ok((
        res.factors.into_iter().map(|(s, _, _)| s).collect(),
        res.field.degree(),
    ))
}

/// Absolutely simple modules of the principal block of `g`, over the
/// smallest field in the tower that splits all of them, and its degree.
pub fn principal_block_simples(g: &Arc<Group>, rng: &mut SeededRng) -> Result<(Vec<GModule>, u32)> {
    let (all, e) = side_data(&GModule::trivial(g, &Field::gf(1)?), rng)?;
    let field = Field::gf(e)?;
    let e0 = principal_idempotent(g, &field, rng)?;
    let mut simples = Vec::new();
    for s in all {
        let s = s.embed(&field)?;
        if block_component(&s, &e0)?.0.dim() == s.dim() {
            simples.push(s);
        }
    }
    Ok((simples, e))
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn build_side(v: &GModule, field: &Arc<Field>, rng: &mut SeededRng) -> Result<Side> {
    let module = v.embed(field)?;
    let g = module.group().clone();
    let e0 = principal_idempotent(&g, field, rng)?;
    let (all, _) = side_data(&module, rng)?;
    let mut simples = Vec::new();
    for s in all {
        if block_component(&s, &e0)?.0.dim() == s.dim() {
            simples.push(s);
        }
    }
    let dim_block = regular_component(&e0)?.0.dim();
    let cartan = if g.order() <= CARTAN_EVIDENCE_CAP {
        Some(cartan_matrix(&e0, rng)?)
    } else {
        None
    };
    Ok(Side {
        module,
        simples,
        dim_block,
        cartan,
    })
}

fn is_projective(v: &GModule, rng: &mut SeededRng) -> Result<bool> {
    let p = sylow2(v.group(), rng)?;
    let mut norm = FieldMatrix::zeros(v.field(), v.dim(), v.dim());
    for &x in p.members() {
        norm.add_assign(&v.matrix_of(x));
    }
    Ok(norm.rank() * p.order() == v.dim())
}

struct SideCheck {
    projective: bool,
    generator: bool,
    dim_end: Option<usize>,
    evidence: SideEvidence,
}

fn check_side(side: &Side, rng: &mut SeededRng) -> Result<SideCheck> {
    let v = &side.module;
    let projective = is_projective(v, rng)?;
    let mut homs = Vec::new();
    for s in &side.simples {
        homs.push(hom_dim(v, s, rng)?);
    }
    let generator = homs.iter().all(|&m| m > 0);
    let factors = chop(v, rng)?;
    let mut comp = vec![0; side.simples.len()];
    let mut outside = 0;
    for (f, k) in factors.simples() {
        let mut hit = false;
        for (i, s) in side.simples.iter().enumerate() {
            if s.dim() == f.dim() && hom_dim(s, f, rng)? > 0 {
                comp[i] += k;
                hit = true;
                break;
            }
        }
        if !hit {
            outside += k;
        }
    }
    // End of a projective module: sum over simples of
    // dim Hom(M, S) [M : S], valid over a splitting field
    let dim_end = if projective && outside == 0 {
        Some(homs.iter().zip(&comp).map(|(a, b)| a * b).sum())
    } else {
        None
    };
    Ok(SideCheck {
        projective,
        generator,
        dim_end,
        evidence: SideEvidence {
            group: v.group().name().to_string(),
            simple_dims: side.simples.iter().map(|s| s.dim()).collect(),
            hom_multiplicities: homs,
            composition_multiplicities: comp,
            dim_principal_block: side.dim_block,
            cartan: side.cartan.clone(),
        },
    })
}

/// The progenerator criterion: `M` is projective and a generator over
/// both principal blocks, and `dim End` on each side is the dimension of
/// the other block.
pub fn is_morita_bimodule(m: &GModule, rng: &mut SeededRng) -> Result<MoritaReport> {
    let left0 = side_module(m, true)?;
    let right0 = side_module(m, false)?;
    let (_, el) = side_data(&left0, rng)?;
    let (_, er) = side_data(&right0, rng)?;
    let e = lcm(lcm(el, er), m.field().degree());
    let field = Field::gf(e)?;
    log::info!(
        "Morita check of a module of dimension {} over GF(2^{e})",
        m.dim()
    );
    let left = build_side(&left0, &field, rng)?;
    let right = build_side(&right0, &field, rng)?;
    let lc = check_side(&left, rng)?;
    let rc = check_side(&right, rng)?;
    let verdict = lc.projective
        && rc.projective
        && lc.generator
        && rc.generator
        && lc.dim_end == Some(right.dim_block)
        && rc.dim_end == Some(left.dim_block);
    let cartan_congruent = match (&left.cartan, &right.cartan) {
        (Some(a), Some(b)) => Some(a.permutation_congruent(b)),
        _ => None,
    };
    if verdict && (left.simples.len() != right.simples.len() || cartan_congruent == Some(false)) {
        return Err(Error::Structural(
            "Morita verdict contradicts the Cartan invariants".into(),
        ));
    }
    Ok(MoritaReport {
        left_projective: lc.projective,
        right_projective: rc.projective,
        left_generator: lc.generator,
        right_generator: rc.generator,
        dim_end_left: lc.dim_end,
        dim_principal_block_right: right.dim_block,
        dim_end_right: rc.dim_end,
        dim_principal_block_left: left.dim_block,
        verdict,
        field_e: e,
        module_dim: m.dim(),
        left: lc.evidence,
        right: rc.evidence,
        cartan_congruent,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReport {
    /// `M (x)_{kH} M^v` is `B_0(kG)` as a bimodule.
    pub left_identity: bool,
    /// `M^v (x)_{kG} M` is `B_0(kH)` as a bimodule.
    pub right_identity: bool,
    pub verdict: bool,
}

/// The direct criterion: both composites with the dual are the principal
/// blocks as bimodules.
pub fn tensor_oracle_verdict(m: &GModule, rng: &mut SeededRng) -> Result<OracleReport> {
    let (g, h) = factors(m)?;
    let f = m.field();
    let hg = product_group(&h, &g)?;
    let n = opposite_dual(m, &hg)?;
    let gg = product_group(&g, &g)?;
    let hh = product_group(&h, &h)?;
    let left = tensor_oracle(m, &n, &gg)?;
    let bl = principal_block_bimodule(&gg, f, rng)?;
    let left_identity = left.dim() == bl.dim() && is_isomorphic(&left, &bl, rng)?;
    let right = tensor_oracle(&n, m, &hh)?;
    let br = principal_block_bimodule(&hh, f, rng)?;
    let right_identity = right.dim() == br.dim() && is_isomorphic(&right, &br, rng)?;
    Ok(OracleReport {
        left_identity,
        right_identity,
        verdict: left_identity && right_identity,
    })
}

/// Outcome of one registered criterion.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "criterion", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum CriterionOutcome {
    Progenerator(MoritaReport),
    TensorOracle(OracleReport),
}

impl CriterionOutcome {
    pub fn verdict(&self) -> bool {
        match self {
            CriterionOutcome::Progenerator(r) => r.verdict,
            CriterionOutcome::TensorOracle(r) => r.verdict,
        }
    }
}

/// A way of deciding whether a bimodule induces a Morita equivalence
/// between principal blocks.
pub trait MoritaCriterion: Send + Sync {
    fn name(&self) -> &'static str;
    fn applies(&self, m: &GModule) -> bool;
    fn evaluate(&self, m: &GModule, rng: &mut SeededRng) -> Result<CriterionOutcome>;
}

pub struct ProgeneratorCriterion;

impl MoritaCriterion for ProgeneratorCriterion {
    fn name(&self) -> &'static str {
        "progenerator"
    }
    fn applies(&self, m: &GModule) -> bool {
        m.group().factors().is_some()
    }
    fn evaluate(&self, m: &GModule, rng: &mut SeededRng) -> Result<CriterionOutcome> {
        Ok(CriterionOutcome::Progenerator(is_morita_bimodule(m, rng)?))
    }
}

pub struct TensorOracleCriterion;

impl MoritaCriterion for TensorOracleCriterion {
    fn name(&self) -> &'static str {
        "tensor-oracle"
    }
    fn applies(&self, m: &GModule) -> bool {
        m.group().factors().is_some() && m.dim() * m.dim() <= TENSOR_ORACLE_CAP
    }
    fn evaluate(&self, m: &GModule, rng: &mut SeededRng) -> Result<CriterionOutcome> {
        Ok(CriterionOutcome::TensorOracle(tensor_oracle_verdict(
            m, rng,
        )?))
    }
}

pub struct CriterionRegistry {
    criteria: Vec<Box<dyn MoritaCriterion>>,
}

impl Default for CriterionRegistry {
    fn default() -> Self {
        CriterionRegistry {
            criteria: vec![
                Box::new(ProgeneratorCriterion),
                Box::new(TensorOracleCriterion),
            ],
        }
    }
}

impl CriterionRegistry {
    pub fn register(&mut self, c: Box<dyn MoritaCriterion>) {
        self.criteria.push(c);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.criteria.iter().map(|c| c.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn MoritaCriterion> {
        self.criteria
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
    }
}

/// `V(Delta Q)` restricted to `C(Delta Q)` is indecomposable or zero for
/// every `Q <= P`.
pub fn brauer_indecomposable(m: &GModule, p: &Subgroup, rng: &mut SeededRng) -> Result<bool> {
    let g = m.group();
    check_cap(
        "product order for Brauer checks",
        g.order(),
        BRAUER_PRODUCT_CAP,
    )?;
    let mut seen: Vec<Subgroup> = Vec::new();
    for q in subgroup_classes(p, LATTICE_CAP)? {
        let mut fused = false;
        for r in &seen {
            if r.order() == q.order() && conjugating_element(r, &q)?.is_some() {
                fused = true;
                break;
            }
        }
        if fused {
            continue;
        }
        seen.push(q.clone());
        let c = centralizer(g, &q)?;
        let bq = brauer_quotient_over(m, &q, &c)?;
        log::debug!(
            "Brauer quotient at order {}: dim {}",
            q.order(),
            bq.module.dim()
        );
        if bq.module.dim() > 0 && !is_indecomposable(&bq.module, rng)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Sc(G, Q)` pushed to `G / Z` against `Sc(G / Z, Q / Z)`.
pub fn verify_scott_quotient_push(
    q: &Subgroup,
    z: &Subgroup,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<bool> {
    let g = q.parent();
    if !z.is_subgroup_of(q) {
        return Err(Error::InvalidParameter("Z must lie in Q".into()));
    }
    let qm = central_quotient(g, z)?;
    let sc = scott_module(q, field, rng)?;
    let pushed = sc.module.push_to_quotient(&qm)?;
    let qbar = qm.image(q);
    let target = scott_module(&qbar, field, rng)?;
    is_isomorphic(&pushed, &target.module, rng)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftingReport {
    pub upper: MoritaReport,
    pub lower: MoritaReport,
    pub upper_scott_dim: usize,
    pub lower_scott_dim: usize,
    pub consistent: bool,
}

impl LiftingReport {
    pub fn verdicts(&self) -> (bool, bool) {
        (self.upper.verdict, self.lower.verdict)
    }
}

/// Morita verdicts for `Sc(G x H, Delta P)` and for the Scott bimodule of
/// the central quotients.
pub fn verify_lifting_consistency(
    id: &Identification,
    zg: &Subgroup,
    zh: &Subgroup,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<LiftingReport> {
    let ql = central_quotient(id.left.parent(), zg)?;
    let qr = central_quotient(id.right.parent(), zh)?;
    let bar = id.push_through(&ql, &qr)?;
    let upper_m = scott_bimodule(id, field, rng)?;
    let upper = is_morita_bimodule(upper_m.module(), rng)?;
    let lower_m = scott_bimodule(&bar, field, rng)?;
    let lower = is_morita_bimodule(lower_m.module(), rng)?;
    let consistent = upper.verdict == lower.verdict;
    if !consistent {
        log::warn!(
            "lifting counterexample: upper {} lower {}",
            upper.verdict,
            lower.verdict
        );
    }
    Ok(LiftingReport {
        upper_scott_dim: upper_m.scott.dim(),
        lower_scott_dim: lower_m.scott.dim(),
        upper,
        lower,
        consistent,
    })
}
