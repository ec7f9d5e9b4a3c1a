//! Second cohomology with coefficients in C2 by explicit cocycle algebra,
//! central extensions built from cocycles, and their classification.
//!
//! A normalised cocycle is determined by its values `alpha(g, s)` on the
//! generators `s`: the identity at `(g, h, s)` gives
//! `alpha(g, hs) = alpha(g, h) + alpha(gh, s) + alpha(h, s)`, so walking a
//! Schreier tree expresses every entry as a linear form in those values.
//! The cocycle space is then cut out by the consistency conditions on the
//! non-tree edges.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::ffield::{Echelon, Field, FieldMatrix};
use crate::groups::{
    catalog_group, extension_rule, iso_type_2group, small_generating_set, Elem, Group, IsoType2,
    QuotientMap, Subgroup,
};
use crate::rng::SeededRng;

/// Largest base group for cocycle computations.
pub const H2_ORDER_CAP: usize = 64;
/// Largest base group for the extension classifier.
pub const CLASSIFY_ORDER_CAP: usize = 32;
/// Random triples checked when the base is too large for an exhaustive pass.
const SAMPLED_TRIPLES: usize = 100_000;

/// A function `G x G -> {0, 1}` stored as a bit matrix.
#[derive(Clone)]
pub struct Cocycle {
    base: Arc<Group>,
    bits: Vec<u64>,
}

impl PartialEq for Cocycle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.base, &other.base) && self.bits == other.bits
    }
}
impl Eq for Cocycle {}

impl fmt::Debug for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones = self.bits.iter().map(|w| w.count_ones()).sum::<u32>();
        write!(
            f,
            "Cocycle on {} ({} nonzero entries)",
            self.base.name(),
            ones
        )
    }
}

impl Cocycle {
    pub fn zero(base: &Arc<Group>) -> Cocycle {
        let n = base.order();
        Cocycle {
            base: base.clone(),
            bits: vec![0; (n * n).div_ceil(64)],
        }
    }

    pub fn from_fn(base: &Arc<Group>, f: impl Fn(Elem, Elem) -> bool) -> Cocycle {
        let mut c = Cocycle::zero(base);
        for g in base.elements() {
            for h in base.elements() {
                if f(g, h) {
                    c.set(g, h, true);
                }
            }
        }
        c
    }

    /// The coboundary `(g, h) -> beta(g) + beta(h) + beta(gh)`.
    pub fn coboundary(base: &Arc<Group>, beta: &[bool]) -> Result<Cocycle> {
        if beta.len() != base.order() {
            return Err(Error::Dimension("1-cochain length".into()));
        }
        Ok(Cocycle::from_fn(base, |g, h| {
            beta[g as usize] ^ beta[h as usize] ^ beta[base.mul(g, h) as usize]
        }))
    }

    pub fn base(&self) -> &Arc<Group> {
        &self.base
    }

    #[inline]
    pub fn get(&self, g: Elem, h: Elem) -> bool {
        let i = g as usize * self.base.order() + h as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, g: Elem, h: Elem, v: bool) {
        let i = g as usize * self.base.order() + h as usize;
        if v {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn add(&self, other: &Cocycle) -> Result<Cocycle> {
        if !Arc::ptr_eq(&self.base, &other.base) {
            return Err(Error::InvalidParameter(
                "cocycles on different groups".into(),
            ));
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Cocycle {
            base: self.base.clone(),
            bits,
        })
    }

    pub fn is_normalized(&self) -> bool {
        self.base
            .elements()
            .all(|g| !self.get(0, g) && !self.get(g, 0))
    }

    fn identity_holds(&self, g: Elem, h: Elem, k: Elem) -> bool {
        let b = &self.base;
        self.get(g, h) ^ self.get(b.mul(g, h), k) == self.get(h, k) ^ self.get(g, b.mul(h, k))
    }

    /// The cocycle identity, over all triples for bases of order at most 64
    /// and on random triples above that.
    pub fn satisfies_identity(&self, rng: &mut SeededRng) -> bool {
        let n = self.base.order();
        if n <= H2_ORDER_CAP {
            let b = &self.base;
            b.elements().all(|g| {
                b.elements()
                    .all(|h| b.elements().all(|k| self.identity_holds(g, h, k)))
            })
        } else {
            (0..SAMPLED_TRIPLES).all(|_| {
                let (g, h, k) = (
                    rng.below(n) as Elem,
                    rng.below(n) as Elem,
                    rng.below(n) as Elem,
                );
                self.identity_holds(g, h, k)
            })
        }
    }

    pub fn is_valid(&self, rng: &mut SeededRng) -> bool {
        self.is_normalized() && self.satisfies_identity(rng)
    }
}

/// The parameters `r^2 = t^a, s^2 = t^b, (rs)^m = t^c` of an extension of
/// a dihedral group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PresentationCocycleParams {
    pub a: u8,
    pub b: u8,
    pub c: u8,
}

impl PresentationCocycleParams {
    pub fn new(a: u8, b: u8, c: u8) -> Result<Self> {
        if a > 1 || b > 1 || c > 1 {
            return Err(Error::InvalidParameter(format!(
                "parameters ({a},{b},{c}) must be 0 or 1"
            )));
        }
        Ok(PresentationCocycleParams { a, b, c })
    }

    /// All eight parameter triples, in binary order of `abc`.
    pub fn all() -> impl Iterator<Item = PresentationCocycleParams> {
        (0..8u8).map(|k| PresentationCocycleParams {
            a: k >> 2 & 1,
            b: k >> 1 & 1,
            c: k & 1,
        })
    }
}

/// Cocycles as vectors of their values on `G x S`.
#[derive(Debug)]
struct CocycleSpace {
    base: Arc<Group>,
    gens: Vec<Elem>,
    /// Words per linear form.
    w: usize,
    /// `forms[(g * n + h) * w ..]` expresses `alpha(g, h)`.
    forms: Vec<u64>,
    nvars: usize,
    /// Coboundaries (independent ones first), then class representatives.
    quotient: Echelon,
    boundary_rank: usize,
    reps: FieldMatrix,
}

impl CocycleSpace {
    fn var(&self, g: Elem, s: usize) -> usize {
        g as usize * self.gens.len() + s
    }

    fn build(base: &Arc<Group>) -> Result<CocycleSpace> {
        let n = base.order();
        check_cap("base group order for H^2", n, H2_ORDER_CAP)?;
        let gens = small_generating_set(base);
        let ns = gens.len();
        let nvars = n * ns;
        let w = nvars.div_ceil(64).max(1);
        let gf2 = Field::gf(1)?;
        let var = |g: Elem, s: usize| g as usize * ns + s;
        // Schreier tree for the chosen generators
        let mut parent = vec![(Elem::MAX, usize::MAX); n];
        parent[0] = (0, usize::MAX);
        let mut order = vec![0 as Elem];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (s, &t) in gens.iter().enumerate() {
                let y = base.mul(x, t);
                if parent[y as usize].0 == Elem::MAX {
                    parent[y as usize] = (x, s);
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut forms = vec![0u64; n * n * w];
        let flip = |forms: &mut [u64], at: usize, v: usize| forms[at * w + v / 64] ^= 1 << (v % 64);
        for g in 0..n as Elem {
            for &y in &order[1..] {
                let (x, s) = parent[y as usize];
                let (dst, src) = (
                    (g as usize * n + y as usize) * w,
                    (g as usize * n + x as usize) * w,
                );
                forms.copy_within(src..src + w, dst);
                let at = g as usize * n + y as usize;
                flip(&mut forms, at, var(base.mul(g, x), s));
                flip(&mut forms, at, var(x, s));
            }
        }
        // consistency on every edge, and alpha(1, s) = 0
        let mut eqs = Echelon::new(&gf2, nvars);
        let mut row = FieldMatrix::zeros(&gf2, 1, nvars);
        let mut push = |eqs: &mut Echelon, bitsv: &[u64]| {
            if bitsv.iter().all(|&b| b == 0) {
                return;
            }
            for v in 0..nvars {
                row.set(0, v, (bitsv[v / 64] >> (v % 64) & 1) as u8 as _);
            }
            eqs.insert(&row, 0);
        };
        let mut buf = vec![0u64; w];
        for s in 0..ns {
            buf.fill(0);
            buf[var(0, s) / 64] ^= 1 << (var(0, s) % 64);
            push(&mut eqs, &buf);
        }
        for g in 0..n as Elem {
            for x in 0..n as Elem {
                for (s, &t) in gens.iter().enumerate() {
                    let y = base.mul(x, t);
                    let fy = (g as usize * n + y as usize) * w;
                    let fx = (g as usize * n + x as usize) * w;
                    for k in 0..w {
                        buf[k] = forms[fy + k] ^ forms[fx + k];
                    }
                    let v1 = var(base.mul(g, x), s);
                    let v2 = var(x, s);
                    buf[v1 / 64] ^= 1 << (v1 % 64);
                    buf[v2 / 64] ^= 1 << (v2 % 64);
                    push(&mut eqs, &buf);
                }
            }
        }
        let cocycles = eqs.echelon_rows().nullspace_basis();
        // coboundaries of the point masses beta_x
        let mut quotient = Echelon::with_coordinates(&gf2, nvars);
        for x in 1..n as Elem {
            let mut r = FieldMatrix::zeros(&gf2, 1, nvars);
            for g in 0..n as Elem {
                for (s, &t) in gens.iter().enumerate() {
                    let v = (g == x) ^ (t == x) ^ (base.mul(g, t) == x);
                    if v {
                        r.set(0, var(g, s), 1);
                    }
                }
            }
            quotient.insert(&r, 0);
        }
        let boundary_rank = quotient.len();
        let mut reps = FieldMatrix::zeros(&gf2, 0, nvars);
        for i in 0..cocycles.rows() {
            if quotient.insert(&cocycles, i) {
                reps.push_row_from(&cocycles, i);
            }
        }
        if boundary_rank + reps.rows() != cocycles.rows() {
            return Err(Error::Structural("coboundaries are not cocycles".into()));
        }
        Ok(CocycleSpace {
            base: base.clone(),
            gens,
            w,
            forms,
            nvars,
            quotient,
            boundary_rank,
            reps,
        })
    }

    fn rank(&self) -> usize {
        self.reps.rows()
    }

    fn table(&self, u: &FieldMatrix, r: usize) -> Cocycle {
        let n = self.base.order();
        let mut uw = vec![0u64; self.w];
        for v in 0..self.nvars {
            if u.get(r, v) != 0 {
                uw[v / 64] |= 1 << (v % 64);
            }
        }
        Cocycle::from_fn(&self.base, |g, h| {
            let at = (g as usize * n + h as usize) * self.w;
            self.forms[at..at + self.w]
                .iter()
                .zip(&uw)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 1
        })
    }

    fn values(&self, c: &Cocycle) -> FieldMatrix {
        let gf2 = self.reps.field().clone();
        let mut u = FieldMatrix::zeros(&gf2, 1, self.nvars);
        for g in self.base.elements() {
            for (s, &t) in self.gens.iter().enumerate() {
                if c.get(g, t) {
                    u.set(0, self.var(g, s), 1);
                }
            }
        }
        u
    }

    /// Class coordinates of a cocycle in the representative basis.
    fn class_of(&self, c: &Cocycle) -> Result<Vec<u8>> {
        let u = self.values(c);
        let coords = self
            .quotient
            .coordinates(&u, 0)
            .ok_or_else(|| Error::InvalidParameter("not a normalised cocycle".into()))?;
        // the recovered table must match, otherwise c is not a cocycle
        if self.table(&u, 0) != *c {
            return Err(Error::InvalidParameter("not a normalised cocycle".into()));
        }
        Ok(coords[self.boundary_rank..]
            .iter()
            .map(|&x| x as u8)
            .collect())
    }
}

/// Representatives of a basis of `H^2(G, C2)`.
#[derive(Clone, Debug)]
pub struct H2Basis {
    pub base: Arc<Group>,
    pub basis: Vec<Cocycle>,
    pub rank: usize,
    space: Arc<CocycleSpace>,
}

impl H2Basis {
    /// Coordinates of the class of `c` in `basis`.
    pub fn class_of(&self, c: &Cocycle) -> Result<Vec<u8>> {
        if !Arc::ptr_eq(c.base(), &self.base) {
            return Err(Error::InvalidParameter(
                "cocycle on a different group".into(),
            ));
        }
        self.space.class_of(c)
    }

    /// The representative `sum bits[i] * basis[i]`.
    pub fn combination(&self, bits: &[u8]) -> Cocycle {
        let mut c = Cocycle::zero(&self.base);
        for (b, rep) in bits.iter().zip(&self.basis) {
            if *b != 0 {
                c = c.add(rep).expect("same base");
            }
        }
        c
    }

    /// Number of cohomology classes, `2^rank`.
    pub fn class_count(&self) -> usize {
        1 << self.rank
    }

    /// Dimension of the space of normalised coboundaries.
    pub fn coboundary_rank(&self) -> usize {
        self.space.boundary_rank
    }
}

pub fn h2_basis(g: &Arc<Group>) -> Result<H2Basis> {
    let space = CocycleSpace::build(g)?;
    let basis = (0..space.rank())
        .map(|i| space.table(&space.reps, i))
        .collect();
    Ok(H2Basis {
        base: g.clone(),
        basis,
        rank: space.rank(),
        space: Arc::new(space),
    })
}

/// Restriction `H^2(G) -> H^2(P)` in the bases of `h2_basis`.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// Acts on row vectors of class coordinates.
    pub matrix: FieldMatrix,
    pub source: H2Basis,
    pub target: H2Basis,
    /// `P` as a standalone group, element `x` sitting at `embedding[x]` in `G`.
    pub embedding: Vec<Elem>,
}

impl Restriction {
    pub fn restrict(&self, alpha: &Cocycle) -> Cocycle {
        Cocycle::from_fn(&self.target.base, |x, y| {
            alpha.get(self.embedding[x as usize], self.embedding[y as usize])
        })
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.rank
    }
}

pub fn restriction_h2(g: &Arc<Group>, p: &Subgroup) -> Result<Restriction> {
    if !Arc::ptr_eq(p.parent(), g) {
        return Err(Error::InvalidParameter("subgroup of another group".into()));
    }
    let source = h2_basis(g)?;
    let (pg, embedding) = p.to_group(format!("{}|P", g.name()))?;
    let target = h2_basis(&pg)?;
    let gf2 = Field::gf(1)?;
    let mut r = Restriction {
        matrix: FieldMatrix::zeros(&gf2, source.rank, target.rank),
        source,
        target,
        embedding,
    };
    for i in 0..r.source.rank {
        let res = r.restrict(&r.source.basis[i]);
        for (j, b) in r.target.class_of(&res)?.into_iter().enumerate() {
            r.matrix.set(i, j, b as _);
        }
    }
    Ok(r)
}

/// The middle group on `G x {0, 1}`, `(g, e)(h, d) = (gh, e + d + alpha(g, h))`,
/// with element `(g, e)` at index `g + |G| e`, and its projection onto `G`.
pub fn extension_from_cocycle(alpha: &Cocycle) -> Result<(Arc<Group>, QuotientMap)> {
    let base = alpha.base().clone();
    let n = base.order();
    let rule = |u: usize, v: usize| {
        let (g, e) = (u % n, u / n);
        let (h, d) = (v % n, v / n);
        let t = e ^ d ^ alpha.get(g as Elem, h as Elem) as usize;
        base.mul(g as Elem, h as Elem) as usize + n * t
    };
    let mut gens: Vec<usize> = base
        .gens()
        .iter()
        .map(|&s| s as usize)
        .filter(|&s| s != 0)
        .collect();
    gens.push(n);
    let name = format!("{}.2", base.name());
    let mid = Arc::new(Group::from_mul_rule(name, 2 * n, rule, &gens)?);
    let kernel = Subgroup::generated(&mid, &[n as Elem]);
    let projection = mid.elements().map(|x| x % n as Elem).collect();
    let q = QuotientMap {
        source: mid.clone(),
        kernel,
        target: base,
        projection,
    };
    Ok((mid, q))
}

/// The dihedral group of order `2^nminus1` in the catalog, with elements
/// `x^i s^j` at index `i + m j`, `m = 2^(nminus1 - 1)`.
pub fn dihedral_base(nminus1: u32) -> Result<Arc<Group>> {
    if !(2..=6).contains(&nminus1) {
        return Err(Error::InvalidParameter(format!(
            "n - 1 = {nminus1} outside 2..=6"
        )));
    }
    catalog_group(&format!("D{}", 1usize << nminus1))
}

/// The cocycle read off from the section `x^i s^j -> (rs)^i s^j` of the
/// extension `<r, s, t | r^2 = t^a, s^2 = t^b, (rs)^m = t^c>`.
pub fn presentation_cocycle(nminus1: u32, params: PresentationCocycleParams) -> Result<Cocycle> {
    let base = dihedral_base(nminus1)?;
    let m = base.order() / 2;
    let rule = extension_rule(m, params.a as usize, params.b as usize, params.c as usize);
    Ok(Cocycle::from_fn(&base, |g, h| {
        rule(g as usize, h as usize) >= 2 * m
    }))
}

/// One class of central extensions.
#[derive(Clone, Debug)]
pub struct ExtensionClass {
    pub index: usize,
    pub coords: Vec<u8>,
    pub cocycle: Cocycle,
    pub order: usize,
    /// Set when the middle group is a 2-group.
    pub iso: Option<IsoType2>,
    pub iso_type: String,
}

fn invariant_signature(g: &Arc<Group>) -> String {
    let mut hist = std::collections::BTreeMap::new();
    for x in g.elements() {
        *hist.entry(g.element_order(x)).or_insert(0usize) += 1;
    }
    let parts: Vec<String> = hist.iter().map(|(o, c)| format!("{o}:{c}")).collect();
    format!("order{} [{}]", g.order(), parts.join(" "))
}

/// Every class of `H^2(gbar, C2)` with the iso-type of its middle group.
/// Entry `i` is the class with coordinates given by the bits of `i`.
pub fn classify_central_extensions(gbar: &Arc<Group>) -> Result<Vec<ExtensionClass>> {
    check_cap(
        "base group order for classification",
        gbar.order(),
        CLASSIFY_ORDER_CAP,
    )?;
    let h = h2_basis(gbar)?;
    let mut out = Vec::with_capacity(h.class_count());
    for index in 0..h.class_count() {
        let coords: Vec<u8> = (0..h.rank).map(|i| (index >> i & 1) as u8).collect();
        let cocycle = h.combination(&coords);
        let (mid, _) = extension_from_cocycle(&cocycle)?;
        let (iso, iso_type) = if mid.order().is_power_of_two() {
            let t = iso_type_2group(&mid)?;
            let s = t.to_string();
            (Some(t), s)
        } else {
            (None, invariant_signature(&mid))
        };
        out.push(ExtensionClass {
            index,
            coords,
            cocycle,
            order: mid.order(),
            iso,
            iso_type,
        });
    }
    Ok(out)
}

/// The unique class of extensions of the dihedral group of order
/// `2^nminus1` whose middle group is generalised quaternion.
pub fn unique_quaternion_class(nminus1: u32) -> Result<Cocycle> {
    if !(2..=4).contains(&nminus1) {
        return Err(Error::InvalidParameter(format!(
            "n - 1 = {nminus1} outside 2..=4"
        )));
    }
    let base = dihedral_base(nminus1)?;
    let classes = classify_central_extensions(&base)?;
    let mut q = classes
        .into_iter()
        .filter(|c| c.iso.as_ref().is_some_and(IsoType2::is_quaternion));
    let first = q
        .next()
        .ok_or_else(|| Error::Structural("no quaternion extension class".into()))?;
    if q.next().is_some() {
        return Err(Error::Structural(
            "several quaternion extension classes".into(),
        ));
    }
    Ok(first.cocycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_by_enumeration() {
        // all 16 tables on C2; normalised cocycles are those with
        // alpha(1, *) = alpha(*, 1) = 0, leaving alpha(s, s) free
        let c2 = catalog_group("C2").unwrap();
        let mut rng = SeededRng::default();
        let mut count = 0;
        for k in 0..16u32 {
            let c = Cocycle::from_fn(&c2, |g, h| k >> (2 * g + h) & 1 == 1);
            if c.is_valid(&mut rng) {
                count += 1;
            }
        }
        assert_eq!(count, 2);
        assert_eq!(h2_basis(&c2).unwrap().rank, 1);
    }
}
