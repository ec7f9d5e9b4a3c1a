//! Direct-sum decomposition into indecomposables.
//!
//! Random endomorphisms are drawn from an engine, compressed to the
//! current piece by its projection, and split by Fitting's lemma along
//! the primary factors of their characteristic polynomial. A piece that
//! stops splitting is certified indecomposable by checking that its
//! endomorphism ring is local.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{char_poly, Echelon, FieldMatrix};
use crate::groups::Elem;
use crate::rng::SeededRng;

use super::hom::{end_basis, indecomposables_isomorphic, HOM_UNKNOWN_CAP};
use super::meataxe::chop_rep;
use super::module::GModule;
use super::rep::MatrixRep;

/// Samples per piece before the run is abandoned.
pub const DECOMPOSE_ITERATION_CAP: usize = 200;
/// Non-splitting samples after which locality is tested.
const CERTIFY_AFTER: usize = 12;
/// Non-splitting samples accepted as certificate when the exact test is
/// out of reach.
const RANDOMIZED_CERTIFICATE: usize = 40;

/// A module together with what is known about where it came from.
#[derive(Clone, Debug)]
pub struct ModuleInput {
    pub module: GModule,
    /// For a right ideal of `kG`: its basis rows in the coordinates of
    /// `GModule::regular`, which is also the basis of `module`.
    pub regular_ideal: Option<FieldMatrix>,
}

impl ModuleInput {
    pub fn new(module: &GModule) -> ModuleInput {
        ModuleInput {
            module: module.clone(),
            regular_ideal: None,
        }
    }
}

/// Random endomorphisms of one fixed module, as matrices on row vectors.
pub trait EndSampler {
    fn sample(&mut self, rng: &mut SeededRng) -> FieldMatrix;
}

/// A strategy producing endomorphisms of a module.
pub trait EndomorphismEngine: Send + Sync {
    fn name(&self) -> &'static str;
    fn applies(&self, input: &ModuleInput) -> bool;
    fn sampler(&self, input: &ModuleInput, rng: &mut SeededRng) -> Result<Box<dyn EndSampler>>;
}

/// Commutant engine: a basis of `End(V)` from the spin hom solver.
pub struct SpinEngine;

struct BasisSampler {
    basis: Vec<FieldMatrix>,
    dim: usize,
    field: Arc<crate::ffield::Field>,
}

impl EndSampler for BasisSampler {
    fn sample(&mut self, rng: &mut SeededRng) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(&self.field, self.dim, self.dim);
        for b in &self.basis {
            let c = rng.element(&self.field);
            if c != 0 {
                m.add_scaled(b, c);
            }
        }
        m
    }
}

impl EndomorphismEngine for SpinEngine {
    fn name(&self) -> &'static str {
        "spin"
    }
    fn applies(&self, input: &ModuleInput) -> bool {
        input.module.dim() <= 700
    }
    fn sampler(&self, input: &ModuleInput, rng: &mut SeededRng) -> Result<Box<dyn EndSampler>> {
        let v = &input.module;
        Ok(Box::new(BasisSampler {
            basis: end_basis(v, rng)?,
            dim: v.dim(),
            field: v.field().clone(),
        }))
    }
}

/// Hecke engine for transitive permutation modules `k[H\G]`: an
/// endomorphism is fixed by the image `u` of the base coset, an
/// `H`-invariant vector, and sends coset `H r_j` to `u r_j`.
pub struct HeckeEngine;

struct HeckeSampler {
    field: Arc<crate::ffield::Field>,
    n: usize,
    /// `suborbit[i]`: the `H`-orbit of coset `i`.
    suborbit: Vec<usize>,
    nsub: usize,
    /// `images[j][i]`: the coset `(H r_i) r_j`.
    images: Vec<Vec<u32>>,
}

impl EndSampler for HeckeSampler {
    fn sample(&mut self, rng: &mut SeededRng) -> FieldMatrix {
        let coeffs: Vec<_> = (0..self.nsub).map(|_| rng.element(&self.field)).collect();
        let mut m = FieldMatrix::zeros(&self.field, self.n, self.n);
        for j in 0..self.n {
            for i in 0..self.n {
                let c = coeffs[self.suborbit[i]];
                if c != 0 {
                    m.set(j, self.images[j][i] as usize, c);
                }
            }
        }
        m
    }
}

impl EndomorphismEngine for HeckeEngine {
    fn name(&self) -> &'static str {
        "hecke"
    }
    fn applies(&self, input: &ModuleInput) -> bool {
        input.module.cosets().is_some() && input.module.dim() <= 2000
    }
    fn sampler(&self, input: &ModuleInput, _rng: &mut SeededRng) -> Result<Box<dyn EndSampler>> {
        let v = &input.module;
        let cs = v.cosets().expect("applies checked cosets");
        let n = cs.len();
        let h = super::hecke::suborbits(cs);
        let images = (0..n)
            .map(|j| (0..n).map(|i| cs.act(i, cs.reps[j]) as u32).collect())
            .collect();
        Ok(Box::new(HeckeSampler {
            field: v.field().clone(),
            n,
            suborbit: h.0,
            nsub: h.1,
            images,
        }))
    }
}

/// Group-algebra engine for right ideals of `kG`: left multiplication by
/// group algebra elements, compressed to the ideal.
pub struct GroupAlgebraEngine;

struct GroupAlgebraSampler {
    module: GModule,
    group: Arc<crate::groups::Group>,
    ideal: Echelon,
    basis: FieldMatrix,
    coset_of: Vec<u32>,
    reps: Vec<Elem>,
}

impl EndSampler for GroupAlgebraSampler {
    fn sample(&mut self, rng: &mut SeededRng) -> FieldMatrix {
        let f = self.module.field().clone();
        let g = &self.group;
        let d = self.basis.rows();
        let n = g.order();
        let terms = 3;
        let mut img = FieldMatrix::zeros(&f, d, n);
        for _ in 0..terms {
            let h = rng.below(n) as Elem;
            let c = rng.nonzero_element(&f);
            let perm: Vec<u32> = self
                .reps
                .iter()
                .map(|&x| self.coset_of[g.mul(h, x) as usize])
                .collect();
            for r in 0..d {
                for x in 0..n {
                    let a = self.basis.get(r, x);
                    if a != 0 {
                        let y = perm[x] as usize;
                        let cur = img.get(r, y);
                        img.set(r, y, cur ^ f.mul(c, a));
                    }
                }
            }
        }
        let mut m = FieldMatrix::zeros(&f, d, d);
        for r in 0..d {
            let c = self
                .ideal
                .coordinates(&img, r)
                .expect("right ideal is closed under left multiplication");
            for (j, &x) in c.iter().enumerate() {
                if x != 0 {
                    m.set(r, j, x);
                }
            }
        }
        m
    }
}

impl EndomorphismEngine for GroupAlgebraEngine {
    fn name(&self) -> &'static str {
        "group-algebra"
    }
    fn applies(&self, input: &ModuleInput) -> bool {
        input.regular_ideal.is_some()
    }
    fn sampler(&self, input: &ModuleInput, _rng: &mut SeededRng) -> Result<Box<dyn EndSampler>> {
        let basis = input
            .regular_ideal
            .clone()
            .expect("applies checked the ideal");
        let f = input.module.field();
        let mut ideal = Echelon::with_coordinates(f, basis.cols());
        for r in 0..basis.rows() {
            ideal.insert(&basis, r);
        }
        let (coset_of, reps) =
            crate::groups::Subgroup::trivial(input.module.group()).right_cosets();
        Ok(Box::new(GroupAlgebraSampler {
            module: input.module.clone(),
            group: input.module.group().clone(),
            ideal,
            basis,
            coset_of,
            reps,
        }))
    }
}

/// Engines in order of preference.
pub struct EngineRegistry {
    engines: Vec<Box<dyn EndomorphismEngine>>,
}

impl Default for EngineRegistry {
    fn default() -> Self {
        EngineRegistry {
            engines: vec![
                Box::new(GroupAlgebraEngine),
                Box::new(HeckeEngine),
                Box::new(SpinEngine),
            ],
        }
    }
}

impl EngineRegistry {
    pub fn register(&mut self, engine: Box<dyn EndomorphismEngine>) {
        self.engines.insert(0, engine);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.engines.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn EndomorphismEngine> {
        self.engines
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
    }

    pub fn select(&self, input: &ModuleInput) -> Result<&dyn EndomorphismEngine> {
        self.engines
            .iter()
            .find(|e| e.applies(input))
            .map(|e| e.as_ref())
            .ok_or_else(|| {
                Error::cap(
                    "module dimension for endomorphism engines",
                    input.module.dim(),
                    700,
                )
            })
    }
}

/// How a summand was shown to be indecomposable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Dimension one.
    Trivial,
    /// The endomorphism ring was computed and found local.
    LocalEndomorphismRing,
    /// Many random endomorphisms were all nilpotent-plus-scalar type.
    Randomized { samples: usize },
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: GModule,
    pub multiplicity: usize,
    /// Basis of each copy, as rows in the parent's coordinates.
    pub embeddings: Vec<FieldMatrix>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub engine: &'static str,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.summands
            .iter()
            .map(|s| s.module.dim() * s.multiplicity)
            .sum()
    }

    pub fn count(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    /// Dimensions with multiplicity, sorted.
    pub fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .summands
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.module.dim(), s.multiplicity))
            .collect();
        d.sort_unstable();
        d
    }

    /// All embedding rows stacked: a change of basis of the parent.
    pub fn change_of_basis(&self) -> Option<FieldMatrix> {
        let mut it = self.summands.iter().flat_map(|s| s.embeddings.iter());
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.vstack(e).expect("same width")))
    }
}

struct Piece {
    basis: FieldMatrix,
    proj: FieldMatrix,
}

/// Decomposes `v` with the default engine registry.
pub fn decompose(v: &GModule, rng: &mut SeededRng) -> Result<Decomposition> {
    decompose_input(&ModuleInput::new(v), &EngineRegistry::default(), rng)
}

pub fn decompose_input(
    input: &ModuleInput,
    reg: &EngineRegistry,
    rng: &mut SeededRng,
) -> Result<Decomposition> {
    let v = &input.module;
    let f = v.field().clone();
    let d = v.dim();
    if d == 0 {
        return Ok(Decomposition {
            engine: "none",
            summands: Vec::new(),
        });
    }
    let engine = reg.select(input)?;
    let mut sampler = engine.sampler(input, rng)?;
    let id = FieldMatrix::identity(&f, d);
    let mut work = vec![Piece {
        basis: id.clone(),
        proj: id,
    }];
    let mut done: Vec<(FieldMatrix, Certificate)> = Vec::new();
    while let Some(piece) = work.pop() {
        let w = piece.basis.rows();
        if w == 1 {
            done.push((piece.basis, Certificate::Trivial));
            continue;
        }
        let mut coords = Echelon::with_coordinates(&f, d);
        for r in 0..w {
            coords.insert(&piece.basis, r);
        }
        let mut quiet = 0usize;
        let mut exact_unavailable = false;
        let mut certified = None;
        let mut split = None;
        for _ in 0..DECOMPOSE_ITERATION_CAP {
            let phi = sampler.sample(rng);
            // the endomorphism proj phi proj, on the piece's own basis
            let local = in_basis(&piece.basis.mul(&phi).mul(&piece.proj), &coords);
            let factors = char_poly(&local).factor(rng);
            if factors.len() >= 2 {
                split = Some((local, factors));
                break;
            }
            quiet += 1;
            if quiet == CERTIFY_AFTER {
                match endomorphism_ring_is_local(&v.submodule(&piece.basis)?, rng)? {
                    Some(true) => {
                        certified = Some(Certificate::LocalEndomorphismRing);
                        break;
                    }
                    Some(false) => {}
                    None => exact_unavailable = true,
                }
            }
            if exact_unavailable && quiet >= RANDOMIZED_CERTIFICATE {
                certified = Some(Certificate::Randomized { samples: quiet });
                break;
            }
        }
        if let Some(c) = certified {
            log::info!(
                "indecomposable summand of dimension {w} ({} pending)",
                work.len()
            );
            done.push((piece.basis, c));
            continue;
        }
        let Some((local, factors)) = split else {
            return Err(Error::IterationCap {
                what: "decomposition",
                diagnostics: format!(
                    "piece of dimension {w} neither split nor certified after {DECOMPOSE_ITERATION_CAP} samples (engine {})",
                    engine.name()
                ),
            });
        };
        // Fitting: the piece is the direct sum of the kernels of p(local)^k
        let kernels: Vec<FieldMatrix> = factors
            .iter()
            .map(|(p, k)| p.eval_matrix(&local).pow(*k as u64).left_nullspace_basis())
            .collect();
        let stacked = kernels
            .iter()
            .skip(1)
            .try_fold(kernels[0].clone(), |acc, k| acc.vstack(k))?;
        let inv = stacked
            .inverse()
            .ok_or_else(|| Error::Structural("primary components do not span the piece".into()))?;
        let to_local = in_basis(&piece.proj, &coords);
        log::info!(
            "split piece of dimension {w} into {}",
            kernels
                .iter()
                .map(|k| k.rows().to_string())
                .collect::<Vec<_>>()
                .join(" + ")
        );
        let mut offset = 0;
        for k in &kernels {
            let cols: Vec<usize> = (offset..offset + k.rows()).collect();
            offset += k.rows();
            let e = inv.select_cols(&cols).mul(k);
            let proj = to_local.mul(&e).mul(&piece.basis);
            work.push(Piece {
                basis: k.mul(&piece.basis),
                proj,
            });
        }
    }
    group_summands(v, done, engine.name(), rng)
}

/// Rows of `m` in the coordinates of the echelon's inserted basis.
fn in_basis(m: &FieldMatrix, coords: &Echelon) -> FieldMatrix {
    let k = coords.inserted().rows();
    let mut out = FieldMatrix::zeros(m.field(), m.rows(), k);
    for r in 0..m.rows() {
        let c = coords.coordinates(m, r).expect("row lies in the span");
        for (j, &x) in c.iter().enumerate() {
            if x != 0 {
                out.set(r, j, x);
            }
        }
    }
    out
}

/// Exact locality test for `End(W)`: it is local exactly when `W`, as a
/// module for it, has a single composition factor type `T` whose
/// endomorphism field has dimension `dim T`. `None` when `End(W)` is too
/// large to compute.
pub fn endomorphism_ring_is_local(w: &GModule, rng: &mut SeededRng) -> Result<Option<bool>> {
    if w.dim() == 0 {
        return Ok(Some(false));
    }
    if w.dim() > HOM_UNKNOWN_CAP / 4 {
        return Ok(None);
    }
    let e = match end_basis(w, rng) {
        Ok(e) => e,
        Err(err) if err.is_cap() => return Ok(None),
        Err(err) => return Err(err),
    };
    algebra_is_local(&e, w.dim(), rng).map(Some)
}

/// Whether the algebra spanned by `basis` (matrices acting on a space of
/// dimension `dim`, containing the identity) is local.
pub fn algebra_is_local(basis: &[FieldMatrix], dim: usize, rng: &mut SeededRng) -> Result<bool> {
    let Some(first) = basis.first() else {
        return Ok(false);
    };
    let rep = MatrixRep::new(first.field(), dim, basis.to_vec())?;
    let factors = chop_rep(&rep, rng)?;
    Ok(factors.len() == 1 && factors[0].dim() == factors[0].end_degree)
}

fn group_summands(
    v: &GModule,
    pieces: Vec<(FieldMatrix, Certificate)>,
    engine: &'static str,
    rng: &mut SeededRng,
) -> Result<Decomposition> {
    let mut summands: Vec<Summand> = Vec::new();
    // deterministic order: by dimension, then by discovery
    let mut pieces = pieces;
    pieces.sort_by_key(|(b, _)| b.rows());
    for (basis, cert) in pieces {
        let m = v.submodule(&basis)?;
        let mut placed = false;
        for s in summands.iter_mut() {
            if s.module.dim() == m.dim() && indecomposables_isomorphic(&s.module, &m, rng)? {
                s.multiplicity += 1;
                s.embeddings.push(basis.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            summands.push(Summand {
                module: m,
                multiplicity: 1,
                embeddings: vec![basis],
                certificate: cert,
            });
        }
    }
    Ok(Decomposition { engine, summands })
}

/// Compares two modules summand by summand.
pub fn isomorphic_by_decomposition(v: &GModule, w: &GModule, rng: &mut SeededRng) -> Result<bool> {
    let dv = decompose(v, rng)?;
    let dw = decompose(w, rng)?;
    if dv.dims() != dw.dims() {
        return Ok(false);
    }
    let mut used = vec![false; dw.summands.len()];
    for a in &dv.summands {
        let mut hit = false;
        for (j, b) in dw.summands.iter().enumerate() {
            if !used[j]
                && a.multiplicity == b.multiplicity
                && a.module.dim() == b.module.dim()
                && indecomposables_isomorphic(&a.module, &b.module, rng)?
            {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `v` is indecomposable.
pub fn is_indecomposable(v: &GModule, rng: &mut SeededRng) -> Result<bool> {
    if v.dim() == 0 {
        return Ok(false);
    }
    if let Some(local) = endomorphism_ring_is_local(v, rng)? {
        return Ok(local);
    }
    Ok(decompose(v, rng)?.count() == 1)
}
