//! Univariate polynomials over GF(2^e) and their factorisation
//! (square-free, distinct-degree, then equal-degree splitting with the
//! characteristic-2 trace map).

use std::sync::Arc;

use super::field::{Fe, Field};
use super::matrix::FieldMatrix;
use crate::rng::SeededRng;

/// Coefficients in increasing degree; never has trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    field: Arc<Field>,
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn new(field: &Arc<Field>, mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<Field>) -> Self {
        Poly::new(field, vec![])
    }

    pub fn one(field: &Arc<Field>) -> Self {
        Poly::new(field, vec![1])
    }

    /// `x`
    pub fn x(field: &Arc<Field>) -> Self {
        Poly::new(field, vec![0, 1])
    }

    /// `x - a`
    pub fn linear(field: &Arc<Field>, a: Fe) -> Self {
        Poly::new(field, vec![a, 1])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Fe {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn constant_term(&self) -> Fe {
        *self.coeffs.first().unwrap_or(&0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead());
        self.scale(inv)
    }

    pub fn scale(&self, c: Fe) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0) ^ other.coeffs.get(i).copied().unwrap_or(0)
            })
            .collect();
        Poly::new(&self.field, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] ^= self.field.mul(a, b);
            }
        }
        Poly::new(&self.field, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        if r.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] ^= f.mul(c, b);
            }
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.add(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.add(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Poly {
        // char 2: only odd-degree terms survive
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| if i % 2 == 1 { a } else { 0 })
            .collect();
        Poly::new(&self.field, c)
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    /// `self^k mod m`.
    pub fn pow_mod(&self, mut k: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &FieldMatrix) -> FieldMatrix {
        let n = m.rows();
        let mut acc = FieldMatrix::zeros(&self.field, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add_scalar(c);
        }
        acc
    }

    /// Square root of a polynomial that is a square (all odd coefficients zero).
    fn sqrt(&self) -> Poly {
        let e = self.field.degree() as u64;
        let half = |a: Fe| self.field.pow(a, 1u64 << (e - 1));
        Poly::new(
            &self.field,
            self.coeffs.iter().step_by(2).map(|&a| half(a)).collect(),
        )
    }

    /// Square-free factorisation: pairs `(g, multiplicity)` with `g` monic
    /// square-free and pairwise coprime.
    pub fn squarefree_factors(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        self.sff_into(1, &mut out);
        out
    }

    fn sff_into(&self, mult: usize, out: &mut Vec<(Poly, usize)>) {
        let f = self.monic();
        if f.deg() == 0 {
            return;
        }
        let d = f.derivative();
        if d.is_zero() {
            f.sqrt().sff_into(mult * 2, out);
            return;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while w.deg() > 0 {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if z.deg() > 0 {
                push_merge(out, z.monic(), i * mult);
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if c.deg() > 0 {
            c.sqrt().sff_into(mult * 2, out);
        }
    }

    /// Full factorisation into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self, rng: &mut SeededRng) -> Vec<(Poly, usize)> {
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (g, m) in self.squarefree_factors() {
            for (d, part) in g.distinct_degree() {
                for irr in part.equal_degree(d, rng) {
                    push_merge(&mut out, irr, m);
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.deg()
                .cmp(&b.0.deg())
                .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
        });
        out
    }

    /// For square-free monic input: products of all irreducible factors of
    /// each degree.
    fn distinct_degree(&self) -> Vec<(usize, Poly)> {
        let f = &self.field;
        let q = f.order() as u128;
        let mut out = Vec::new();
        let mut rest = self.monic();
        let x = Poly::x(f);
        let mut h = x.rem(&rest);
        let mut d = 0;
        while rest.deg() > 0 {
            d += 1;
            if 2 * d > rest.deg() {
                out.push((rest.deg(), rest.clone()));
                break;
            }
            h = h.pow_mod(q, &rest);
            let g = h.add(&x).gcd(&rest);
            if g.deg() > 0 {
                out.push((d, g.clone()));
                rest = rest.div_rem(&g).0;
                h = h.rem(&rest);
            }
        }
        out
    }

    /// Splits a square-free product of irreducibles of degree `d`.
    fn equal_degree(&self, d: usize, rng: &mut SeededRng) -> Vec<Poly> {
        let n = self.deg();
        if n == d {
            return vec![self.monic()];
        }
        let f = &self.field;
        let bits = f.degree() as usize * d;
        loop {
            // random a of degree < n; trace map a + a^2 + ... + a^(2^(bits-1))
            let a = Poly::new(f, (0..n).map(|_| rng.element(f)).collect());
            if a.deg() == 0 {
                continue;
            }
            let mut t = a.clone();
            let mut sq = a;
            for _ in 1..bits {
                sq = sq.mul_mod(&sq, self);
                t = t.add(&sq);
            }
            let g = t.gcd(self);
            if g.deg() > 0 && g.deg() < n {
                let h = self.div_rem(&g).0;
                let mut out = g.equal_degree(d, rng);
                out.extend(h.equal_degree(d, rng));
                return out;
            }
        }
    }
}

fn push_merge(out: &mut Vec<(Poly, usize)>, p: Poly, m: usize) {
    if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
        e.1 += m;
    } else {
        out.push((p, m));
    }
}

/// Characteristic polynomial via Hessenberg reduction, O(n^3).
pub fn char_poly(m: &FieldMatrix) -> Poly {
    assert!(m.is_square());
    let f = m.field().clone();
    let n = m.rows();
    let mut h = m.clone();
    // similarity transforms to upper Hessenberg form
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&r| h.get(r, c) != 0) else {
            continue;
        };
        if p != c + 1 {
            h.swap_rows(p, c + 1);
            swap_cols(&mut h, p, c + 1);
        }
        let inv = f.inv(h.get(c + 1, c));
        for r in c + 2..n {
            let factor = f.mul(h.get(r, c), inv);
            if factor != 0 {
                // row_r -= factor * row_{c+1}; col_{c+1} += factor * col_r
                h.axpy_row(r, c + 1, factor);
                for i in 0..n {
                    let v = h.get(i, r);
                    if v != 0 {
                        let cur = h.get(i, c + 1);
                        h.set(i, c + 1, cur ^ f.mul(factor, v));
                    }
                }
            }
        }
    }
    // recurrence on leading principal minors
    let mut polys: Vec<Poly> = vec![Poly::one(&f)];
    for k in 0..n {
        let mut pk = Poly::linear(&f, h.get(k, k)).mul(&polys[k]);
        let mut prod: Fe = 1;
        for i in (0..k).rev() {
            prod = f.mul(prod, h.get(i + 1, i));
            if prod == 0 {
                break;
            }
            let coef = f.mul(prod, h.get(i, k));
            if coef != 0 {
                pk = pk.add(&polys[i].scale(coef));
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

fn swap_cols(m: &mut FieldMatrix, a: usize, b: usize) {
    for r in 0..m.rows() {
        let (x, y) = (m.get(r, a), m.get(r, b));
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// Idempotent polynomials splitting `m = prod f_i^{a_i}` by the Chinese
/// remainder theorem: `e_i = 1 mod f_i^{a_i}` and `0 mod` the other parts.
/// Returns the primary parts paired with their idempotent polynomials.
pub fn primary_idempotents(factors: &[(Poly, usize)]) -> Vec<(Poly, Poly)> {
    let parts: Vec<Poly> = factors.iter().map(|(f, a)| f.pow(*a)).collect();
    let mut out = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let field = p.field().clone();
        let rest = parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(Poly::one(&field), |acc, (_, q)| acc.mul(q));
        // s*p + t*rest = 1  =>  t*rest is 1 mod p and 0 mod rest
        let (_, _, t) = p.ext_gcd(&rest);
        out.push((p.clone(), t.mul(&rest)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(e: u32) -> Arc<Field> {
        Field::gf(e).unwrap()
    }

    #[test]
    fn factor_x7_minus_1_over_gf2_and_gf8() {
        let f = gf(1);
        let mut rng = SeededRng::default();
        let mut c = vec![0; 8];
        c[0] = 1;
        c[7] = 1;
        let p = Poly::new(&f, c.clone());
        let fac = p.factor(&mut rng);
        let degs: Vec<usize> = fac.iter().map(|(q, _)| q.deg()).collect();
        assert_eq!(degs, vec![1, 3, 3]);
        let f8 = gf(3);
        let fac8 = Poly::new(&f8, c).factor(&mut rng);
        assert_eq!(fac8.len(), 7);
        assert!(fac8.iter().all(|(q, m)| q.deg() == 1 && *m == 1));
    }

    #[test]
    fn squarefree_handles_squares() {
        let f = gf(2);
        let mut rng = SeededRng::default();
        // (x+1)^4 (x^2+x+w)
        let a = Poly::linear(&f, 1).pow(4);
        let b = Poly::new(&f, vec![2, 1, 1]);
        let p = a.mul(&b);
        let fac = p.factor(&mut rng);
        let prod = fac
            .iter()
            .fold(Poly::one(&f), |acc, (q, m)| acc.mul(&q.pow(*m)));
        assert_eq!(prod, p.monic());
        assert!(fac.iter().any(|(q, m)| q.deg() == 1 && *m == 4));
    }

    #[test]
    fn char_poly_matches_cayley_hamilton() {
        let f = gf(2);
        let mut rng = SeededRng::new(7);
        for n in [1, 2, 5, 9] {
            let m = FieldMatrix::from_fn(&f, n, n, |_, _| 0);
            let m = {
                let mut m = m;
                for r in 0..n {
                    for c in 0..n {
                        m.set(r, c, rng.element(&f));
                    }
                }
                m
            };
            let p = char_poly(&m);
            assert_eq!(p.deg(), n);
            assert!(p.eval_matrix(&m).is_zero());
        }
    }

    #[test]
    fn crt_idempotents() {
        let f = gf(2);
        let mut rng = SeededRng::default();
        let p = Poly::linear(&f, 1)
            .pow(2)
            .mul(&Poly::linear(&f, 2))
            .mul(&Poly::linear(&f, 3));
        let fac = p.factor(&mut rng);
        let ids = primary_idempotents(&fac);
        let total = ids.iter().fold(Poly::zero(&f), |acc, (_, e)| acc.add(e));
        assert!(total.add(&Poly::one(&f)).rem(&p).is_zero());
        for (_, e) in &ids {
            assert_eq!(e.mul(e).rem(&p), e.rem(&p));
        }
    }
}
