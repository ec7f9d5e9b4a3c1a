//! The Hecke algebra `End_kG(k[H\G])`.
//!
//! An endomorphism `phi` is determined by `u = phi(H)`, an `H`-invariant
//! vector, so by its values on the `H`-orbits of cosets (suborbits). It
//! sends `H r_j` to `u r_j`. Products cost `O(n r)` for `n` cosets and `r`
//! suborbits, which keeps permutation modules of a few thousand cosets in
//! reach without forming `n x n` matrices.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Echelon, Fe, Field, FieldMatrix, Poly};
use crate::rng::SeededRng;

use super::module::CosetSpace;

/// Suborbit index of every coset, and the number of suborbits. Suborbit 0
/// is the base coset.
pub fn suborbits(cs: &CosetSpace) -> (Vec<usize>, usize) {
    let n = cs.len();
    let hgens = cs.subgroup.gens().to_vec();
    let mut sub = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if sub[start] != usize::MAX {
            continue;
        }
        sub[start] = count;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &h in &hgens {
                let j = cs.act(i, h);
                if sub[j] == usize::MAX {
                    sub[j] = count;
                    stack.push(j);
                }
            }
        }
        count += 1;
    }
    (sub, count)
}

pub struct HeckeAlgebra {
    cs: Arc<CosetSpace>,
    field: Arc<Field>,
    sub: Vec<usize>,
    sizes: Vec<usize>,
    /// `table[l][j]`: suborbit of `nu_l r_j^-1`, `nu_l` a coset in suborbit `l`.
    table: Vec<Vec<u32>>,
}

/// Element of the Hecke algebra: its value on each suborbit.
pub type HeckeElement = Vec<Fe>;

impl HeckeAlgebra {
    pub fn new(cs: &Arc<CosetSpace>, field: &Arc<Field>) -> HeckeAlgebra {
        let (sub, r) = suborbits(cs);
        let n = cs.len();
        let g = cs.group();
        let mut sizes = vec![0usize; r];
        let mut rep_of = vec![usize::MAX; r];
        for (i, &s) in sub.iter().enumerate() {
            sizes[s] += 1;
            if rep_of[s] == usize::MAX {
                rep_of[s] = i;
            }
        }
        let inv_reps: Vec<_> = cs.reps.iter().map(|&t| g.inv(t)).collect();
        let table = rep_of
            .iter()
            .map(|&nu| {
                let x = cs.reps[nu];
                (0..n)
                    .map(|j| sub[cs.coset_of[g.mul(x, inv_reps[j]) as usize] as usize] as u32)
                    .collect()
            })
            .collect();
        HeckeAlgebra {
            cs: cs.clone(),
            field: field.clone(),
            sub,
            sizes,
            table,
        }
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn degree(&self) -> usize {
        self.sub.len()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn suborbit_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn one(&self) -> HeckeElement {
        let mut x = vec![0; self.dim()];
        x[self.sub[0]] = 1;
        x
    }

    pub fn random(&self, rng: &mut SeededRng) -> HeckeElement {
        (0..self.dim()).map(|_| rng.element(&self.field)).collect()
    }

    /// `phi o psi`: apply `psi`, then `phi`.
    pub fn mul(&self, phi: &HeckeElement, psi: &HeckeElement) -> HeckeElement {
        let f = &self.field;
        let mut out = vec![0; self.dim()];
        for (l, row) in self.table.iter().enumerate() {
            let mut acc: Fe = 0;
            for (j, &t) in row.iter().enumerate() {
                let a = psi[self.sub[j]];
                if a != 0 {
                    let b = phi[t as usize];
                    if b != 0 {
                        acc ^= f.mul(a, b);
                    }
                }
            }
            out[l] = acc;
        }
        out
    }

    /// The scalar by which `phi` acts on the trivial quotient: the
    /// augmentation of `phi(H)`.
    pub fn chi(&self, phi: &HeckeElement) -> Fe {
        // sum of x_l |suborbit l| in characteristic 2
        phi.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&x, &s)| if s % 2 == 1 { acc ^ x } else { acc })
    }

    /// The vector `phi(H)` in the coset basis.
    pub fn base_image(&self, phi: &HeckeElement) -> FieldMatrix {
        FieldMatrix::from_fn(&self.field, 1, self.degree(), |_, i| phi[self.sub[i]])
    }

    /// The `n x n` matrix of `phi` on row vectors.
    pub fn matrix(&self, phi: &HeckeElement) -> FieldMatrix {
        let n = self.degree();
        let cs = &self.cs;
        let mut m = FieldMatrix::zeros(&self.field, n, n);
        for j in 0..n {
            for i in 0..n {
                let c = phi[self.sub[i]];
                if c != 0 {
                    m.set(j, cs.act(i, cs.reps[j]), c);
                }
            }
        }
        m
    }

    fn combine(&self, powers: &[HeckeElement], p: &Poly) -> HeckeElement {
        let f = &self.field;
        let mut out = vec![0; self.dim()];
        for (k, &c) in p.coeffs().iter().enumerate() {
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(&powers[k]) {
                    *o ^= f.mul(c, x);
                }
            }
        }
        out
    }

    /// Powers `y^0 = unit, y, y^2, ...` up to the first dependency, and the
    /// minimal polynomial of `y` in the algebra with that unit.
    fn minimal_polynomial(
        &self,
        y: &HeckeElement,
        unit: &HeckeElement,
    ) -> (Vec<HeckeElement>, Poly) {
        let f = &self.field;
        let r = self.dim();
        let mut ech = Echelon::with_coordinates(f, r);
        let mut powers = vec![unit.clone()];
        let row = |x: &HeckeElement| FieldMatrix::from_fn(f, 1, r, |_, j| x[j]);
        ech.insert(&row(unit), 0);
        loop {
            let next = self.mul(y, powers.last().expect("nonempty"));
            let v = row(&next);
            if let Some(c) = ech.coordinates(&v, 0) {
                // y^m = sum c_k y^k, so X^m - sum c_k X^k (char 2: plus)
                let mut coeffs = c;
                coeffs.push(1);
                powers.push(next);
                return (powers, Poly::new(f, coeffs));
            }
            ech.insert(&v, 0);
            powers.push(next);
        }
    }

    /// Refines the identity to an idempotent `e` with `chi(e) = 1` that
    /// random elements of `eAe` no longer split. Each round writes the
    /// minimal polynomial of `y = exe` as `(X - chi(y))^k g` and keeps the
    /// part belonging to the root `chi(y)`; no factorisation is needed.
    /// `accept` is consulted after every `check_every` quiet rounds and
    /// may certify the current idempotent.
    pub fn chi_idempotent(
        &self,
        rng: &mut SeededRng,
        max_rounds: usize,
        check_every: usize,
        mut accept: impl FnMut(&HeckeElement) -> Result<bool>,
    ) -> Result<HeckeElement> {
        let f = self.field.clone();
        let mut e = self.one();
        let mut quiet = 0;
        for _ in 0..max_rounds {
            let x = self.random(rng);
            let y = self.mul(&e, &self.mul(&x, &e));
            let lambda = self.chi(&y);
            let (powers, m) = self.minimal_polynomial(&y, &e);
            let lin = Poly::linear(&f, lambda);
            let mut g = m.clone();
            let mut k = 0;
            loop {
                let (q, rem) = g.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                g = q;
                k += 1;
            }
            if g.deg() == 0 {
                quiet += 1;
                if quiet % check_every == 0 && accept(&e)? {
                    return Ok(e);
                }
                continue;
            }
            debug_assert!(k > 0, "chi(y) is a root of the minimal polynomial");
            let parts = crate::ffield::primary_idempotents(&[(lin, k), (g, 1)]);
            let t = parts[0].1.rem(&m);
            e = self.combine(&powers, &t);
            quiet = 0;
        }
        Err(Error::IterationCap {
            what: "hecke idempotent refinement",
            diagnostics: format!(
                "{max_rounds} rounds on an algebra of dimension {}",
                self.dim()
            ),
        })
    }
}
