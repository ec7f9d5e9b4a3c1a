//! MeatAxe: irreducibility testing with Norton's criterion, composition
//! factors with multiplicities, and endomorphism-field degrees.

use std::sync::Arc;

use crate::error::{check_cap, Error, Result};
use crate::ffield::{char_poly, Field, FieldMatrix, MAX_DEGREE};
use crate::rng::SeededRng;

use super::hom::hom_dim_action;
use super::module::{GModule, MODULE_DIM_CAP};
use super::rep::{spin, Action, MatrixRep};

/// Random elements tried per split before giving up.
pub const SPLIT_ITERATION_CAP: usize = 200;

/// Outcome of one irreducibility test.
#[derive(Clone, Debug)]
pub enum Split {
    /// Irreducible, with `dim End` (the endomorphism-field degree).
    Irreducible { end_degree: usize },
    /// Rows spanning a proper nonzero invariant subspace.
    Reducible(FieldMatrix),
}

/// Tests `a` for irreducibility, finding a proper submodule if there is one.
pub fn split<A: Action + ?Sized>(
    a: &A,
    gens: &[FieldMatrix],
    rng: &mut SeededRng,
) -> Result<Split> {
    let d = a.dim();
    if d <= 1 {
        return Ok(Split::Irreducible { end_degree: d });
    }
    let f = a.field().clone();
    let transposed = MatrixRep::new(&f, d, gens.iter().map(|g| g.transpose()).collect())?;
    let mut words = Vec::new();
    for _ in 0..SPLIT_ITERATION_CAP {
        let x = super::rep::random_element(&f, d, gens, rng, &mut words);
        let cp = char_poly(&x);
        let mut factors = cp.factor(rng);
        factors.sort_by_key(|(p, _)| p.deg());
        for (p, _) in factors {
            let px = p.eval_matrix(&x);
            let null = px.left_nullspace_basis();
            let v = null.row(0);
            let sub = spin(a, &v);
            if sub.len() < d {
                return Ok(Split::Reducible(sub.inserted().clone()));
            }
            let nullt = px.transpose().left_nullspace_basis();
            let w = nullt.row(0);
            let subt = spin(&transposed, &w);
            if subt.len() < d {
                // annihilator of an invariant subspace of the dual
                let ann = subt.inserted().nullspace_basis();
                return Ok(Split::Reducible(ann));
            }
            if null.rows() == p.deg() {
                let end_degree = hom_dim_action(a, a, rng)?;
                return Ok(Split::Irreducible { end_degree });
            }
        }
    }
    Err(Error::IterationCap {
        what: "meataxe split",
        diagnostics: format!(
            "no Norton-certified element among {SPLIT_ITERATION_CAP} samples in dimension {d}"
        ),
    })
}

/// One composition factor class.
#[derive(Clone, Debug)]
pub struct Factor {
    pub rep: MatrixRep,
    pub multiplicity: usize,
    pub end_degree: usize,
}

impl Factor {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }
}

/// Composition factors of the module given by `rep`, grouped by
/// isomorphism type, in order of first appearance.
pub fn chop_rep(rep: &MatrixRep, rng: &mut SeededRng) -> Result<Vec<Factor>> {
    check_cap("meataxe dimension", rep.dim(), MODULE_DIM_CAP)?;
    let mut out: Vec<Factor> = Vec::new();
    let mut stack = vec![rep.clone()];
    while let Some(m) = stack.pop() {
        if m.dim() == 0 {
            continue;
        }
        match split(&m, m.gens(), rng)? {
            Split::Reducible(basis) => {
                let sub = m.submodule(&basis.row_space_basis())?;
                let (quo, _) = m.quotient(&basis);
                // quotient first so that factors come out bottom-up
                stack.push(quo);
                stack.push(sub);
            }
            Split::Irreducible { end_degree } => {
                let mut found = false;
                for fac in out.iter_mut() {
                    if fac.dim() == m.dim()
                        && fac.end_degree == end_degree
                        && hom_dim_action(&fac.rep, &m, rng)? > 0
                    {
                        fac.multiplicity += 1;
                        found = true;
                        break;
                    }
                }
                if !found {
                    out.push(Factor {
                        rep: m,
                        multiplicity: 1,
                        end_degree,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Composition factors of a group module, as modules.
#[derive(Clone, Debug)]
pub struct ChopResult {
    pub field: Arc<Field>,
    pub factors: Vec<(GModule, usize, usize)>,
}

impl ChopResult {
    /// `(module, multiplicity)` pairs.
    pub fn simples(&self) -> impl Iterator<Item = (&GModule, usize)> {
        self.factors.iter().map(|(m, k, _)| (m, *k))
    }

    pub fn is_absolutely_irreducible(&self) -> bool {
        self.factors.iter().all(|(_, _, e)| *e == 1)
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(m, k, _)| m.dim() * k).sum()
    }
}

/// Composition factors over the module's own field.
pub fn chop(v: &GModule, rng: &mut SeededRng) -> Result<ChopResult> {
    let facs = chop_rep(&v.to_rep(), rng)?;
    let factors = facs
        .into_iter()
        .map(|f| {
            Ok((
                GModule::new(v.group(), v.field(), f.rep.gens().to_vec())?,
                f.multiplicity,
                f.end_degree,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChopResult {
        field: v.field().clone(),
        factors,
    })
}

/// Chops after enlarging the field by the lcm of the reported
/// endomorphism-field degrees, until every factor is absolutely
/// irreducible.
pub fn chop_split(v: &GModule, rng: &mut SeededRng) -> Result<ChopResult> {
    let mut cur = v.clone();
    loop {
        let res = chop(&cur, rng)?;
        if res.is_absolutely_irreducible() {
            return Ok(res);
        }
        let l = res
            .factors
            .iter()
            .fold(1usize, |acc, (_, _, e)| lcm(acc, *e));
        let e = cur.field().degree() as usize * l;
        if e > MAX_DEGREE as usize {
            return Err(Error::Structural(format!(
                "splitting field GF(2^{e}) is beyond the supported range"
            )));
        }
        log::info!("escalating field to GF(2^{e})");
        cur = cur.embed(&Field::gf(e as u32)?)?;
    }
}

/// The smallest extension degree of GF(2) over which the module's
/// composition factors are absolutely irreducible, starting from `e`.
pub fn splitting_degree(v: &GModule, rng: &mut SeededRng) -> Result<u32> {
    Ok(chop_split(v, rng)?.field.degree())
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Whether `v` is irreducible.
pub fn is_irreducible(v: &GModule, rng: &mut SeededRng) -> Result<bool> {
    if v.dim() == 0 {
        return Ok(false);
    }
    Ok(matches!(
        split(v, v.matrices(), rng)?,
        Split::Irreducible { .. }
    ))
}
