//! Modules for an algebra given by a list of generating matrices. Group
//! modules are the case of invertible generators; the MeatAxe and the hom
//! engine also run on modules for endomorphism algebras.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Echelon, Fe, Field, FieldMatrix};
use crate::rng::SeededRng;

/// Anything that acts on row vectors through numbered generators.
pub trait Action {
    fn field(&self) -> &Arc<Field>;
    fn dim(&self) -> usize;
    fn ngens(&self) -> usize;
    /// Rows of `v` times generator `s`.
    fn act_gen(&self, v: &FieldMatrix, s: usize) -> FieldMatrix;
}

#[derive(Clone, Debug)]
pub struct MatrixRep {
    field: Arc<Field>,
    dim: usize,
    gens: Vec<FieldMatrix>,
}

impl Action for MatrixRep {
    fn field(&self) -> &Arc<Field> {
        &self.field
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn ngens(&self) -> usize {
        self.gens.len()
    }
    fn act_gen(&self, v: &FieldMatrix, s: usize) -> FieldMatrix {
        v.mul(&self.gens[s])
    }
}

impl MatrixRep {
    pub fn new(field: &Arc<Field>, dim: usize, gens: Vec<FieldMatrix>) -> Result<MatrixRep> {
        for g in &gens {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::Dimension(
                    "generators must be square of the module dimension".into(),
                ));
            }
        }
        Ok(MatrixRep {
            field: field.clone(),
            dim,
            gens,
        })
    }

    pub fn gens(&self) -> &[FieldMatrix] {
        &self.gens
    }

    pub fn transpose(&self) -> MatrixRep {
        MatrixRep {
            field: self.field.clone(),
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.transpose()).collect(),
        }
    }

    pub fn embed(&self, big: &Arc<Field>) -> Result<MatrixRep> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.embed(big))
            .collect::<Result<_>>()?;
        Ok(MatrixRep {
            field: big.clone(),
            dim: self.dim,
            gens,
        })
    }

    /// Action on the subspace spanned by the independent rows of `basis`,
    /// which must be invariant.
    pub fn submodule(&self, basis: &FieldMatrix) -> Result<MatrixRep> {
        Ok(MatrixRep {
            field: self.field.clone(),
            dim: basis.rows(),
            gens: restrict_to(self, basis)?,
        })
    }

    /// Action on the quotient by the invariant subspace spanned by `basis`;
    /// the quotient basis is the unit vectors at the returned columns.
    pub fn quotient(&self, basis: &FieldMatrix) -> (MatrixRep, Vec<usize>) {
        let (gens, free) = quotient_action(self, basis);
        (
            MatrixRep {
                field: self.field.clone(),
                dim: free.len(),
                gens,
            },
            free,
        )
    }

    /// A random element of the generated algebra: a combination of random
    /// products of the generators.
    pub fn random_element(&self, rng: &mut SeededRng, words: &mut Vec<FieldMatrix>) -> FieldMatrix {
        random_element(&self.field, self.dim, &self.gens, rng, words)
    }
}

pub(crate) fn random_element(
    field: &Arc<Field>,
    dim: usize,
    gens: &[FieldMatrix],
    rng: &mut SeededRng,
    words: &mut Vec<FieldMatrix>,
) -> FieldMatrix {
    if words.is_empty() {
        words.extend(gens.iter().cloned());
        if words.is_empty() {
            words.push(FieldMatrix::identity(field, dim));
        }
    }
    // grow the word pool by one random product per call
    let a = rng.below(words.len());
    let b = rng.below(words.len());
    let p = words[a].mul(&words[b]);
    if words.len() < gens.len() + 16 {
        words.push(p);
    } else {
        let i = gens.len() + rng.below(16);
        words[i] = p;
    }
    let mut acc = FieldMatrix::zeros(field, dim, dim);
    let terms = 1 + rng.below(4);
    for _ in 0..terms {
        let w = &words[rng.below(words.len())];
        let c: Fe = rng.nonzero_element(field);
        acc.add_scaled(w, c);
    }
    acc
}

/// Echelon basis of the smallest invariant subspace containing the rows
/// of `seeds`, spanning vectors kept in discovery order.
pub fn spin<A: Action + ?Sized>(a: &A, seeds: &FieldMatrix) -> Echelon {
    let mut ech = Echelon::new(a.field(), a.dim());
    spin_into(a, seeds, &mut ech);
    ech
}

/// Spins the rows of `seeds` into an existing invariant span.
pub fn spin_into<A: Action + ?Sized>(a: &A, seeds: &FieldMatrix, ech: &mut Echelon) {
    let start = ech.len();
    for r in 0..seeds.rows() {
        ech.insert(seeds, r);
    }
    let mut i = start;
    while i < ech.len() && ech.len() < a.dim() {
        let v = ech.inserted().row(i);
        for s in 0..a.ngens() {
            let w = a.act_gen(&v, s);
            ech.insert(&w, 0);
        }
        i += 1;
    }
}

/// Generator matrices in the basis given by the rows of `basis`.
pub(crate) fn restrict_to<A: Action + ?Sized>(
    a: &A,
    basis: &FieldMatrix,
) -> Result<Vec<FieldMatrix>> {
    let f = a.field();
    let mut ech = Echelon::with_coordinates(f, a.dim());
    for r in 0..basis.rows() {
        if !ech.insert(basis, r) {
            return Err(Error::InvalidParameter(
                "submodule basis is dependent".into(),
            ));
        }
    }
    let k = basis.rows();
    let mut out = Vec::with_capacity(a.ngens());
    for s in 0..a.ngens() {
        let img = a.act_gen(basis, s);
        let mut m = FieldMatrix::zeros(f, k, k);
        for r in 0..k {
            let c = ech
                .coordinates(&img, r)
                .ok_or_else(|| Error::InvalidParameter("subspace is not invariant".into()))?;
            for (j, &x) in c.iter().enumerate() {
                if x != 0 {
                    m.set(r, j, x);
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Generator matrices on `V / span(basis)` and the free columns used as
/// quotient basis.
pub(crate) fn quotient_action<A: Action + ?Sized>(
    a: &A,
    basis: &FieldMatrix,
) -> (Vec<FieldMatrix>, Vec<usize>) {
    let f = a.field();
    let d = a.dim();
    let rows = basis.row_space_basis();
    let mut ech = Echelon::new(f, d);
    for r in 0..rows.rows() {
        ech.insert(&rows, r);
    }
    let mut is_pivot = vec![false; d];
    for &p in ech.pivots() {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..d).filter(|&c| !is_pivot[c]).collect();
    let k = free.len();
    let mut units = FieldMatrix::zeros(f, k, d);
    for (i, &c) in free.iter().enumerate() {
        units.set(i, c, 1);
    }
    let mut out = Vec::with_capacity(a.ngens());
    for s in 0..a.ngens() {
        let mut img = a.act_gen(&units, s);
        let mut m = FieldMatrix::zeros(f, k, k);
        for i in 0..k {
            ech.reduce_row(&mut img, i);
            for (j, &c2) in free.iter().enumerate() {
                let x = img.get(i, c2);
                if x != 0 {
                    m.set(i, j, x);
                }
            }
        }
        out.push(m);
    }
    (out, free)
}
