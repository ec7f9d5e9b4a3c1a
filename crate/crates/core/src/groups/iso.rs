//! Brute-force isomorphism search and identification of small 2-groups.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::catalog::extension_of_dihedral;
use super::group::{Elem, Group};
use super::structure::{center, classes, derived_subgroup, exponent};
use super::subgroup::Subgroup;
use crate::error::{check_cap, Error, Result};

/// Largest 2-group handled by `iso_type_2group`.
pub const TWO_GROUP_CAP: usize = 64;

fn order_histogram(g: &Group) -> Vec<usize> {
    let mut h = vec![0; g.order() + 1];
    for x in g.elements() {
        h[g.element_order(x)] += 1;
    }
    h
}

/// A short generating set, chosen greedily from elements of large order.
pub fn small_generating_set(g: &Arc<Group>) -> Vec<Elem> {
    let mut elems: Vec<(usize, Elem)> = g.elements().map(|x| (g.element_order(x), x)).collect();
    elems.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut gens = Vec::new();
    let mut cur = Subgroup::trivial(g);
    for (_, x) in elems {
        if cur.is_whole() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = Subgroup::generated(g, &gens);
        }
    }
    gens
}

/// Extends `gens[i] -> imgs[i]` along the Cayley graph of `<gens>`;
/// `None` when the assignment is not a homomorphism.
fn extend_hom(g: &Group, h: &Group, gens: &[Elem], imgs: &[Elem]) -> Option<Vec<Elem>> {
    let mut map = vec![Elem::MAX; g.order()];
    map[0] = 0;
    let mut queue = vec![0 as Elem];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x as usize];
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = h.mul(fx, t);
            match map[y as usize] {
                Elem::MAX => {
                    map[y as usize] = fy;
                    queue.push(y);
                }
                v if v != fy => return None,
                _ => {}
            }
        }
        i += 1;
    }
    Some(map)
}

/// An isomorphism `g -> h` as an element map, if one exists. The first
/// generator's image ranges over class representatives only, since inner
/// automorphisms of `h` can move it there.
pub fn find_isomorphism(g: &Arc<Group>, h: &Arc<Group>) -> Result<Option<Vec<Elem>>> {
    if g.order() != h.order() {
        return Ok(None);
    }
    check_cap("isomorphism search order", g.order(), 20_000)?;
    if order_histogram(g) != order_histogram(h) {
        return Ok(None);
    }
    let gens = small_generating_set(g);
    if gens.is_empty() {
        return Ok(Some(vec![0]));
    }
    let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
    let hcl = classes(h)?;
    let first: Vec<Elem> = hcl
        .classes
        .iter()
        .map(|c| c[0])
        .filter(|&y| h.element_order(y) == orders[0])
        .collect();
    let by_order: Vec<Vec<Elem>> = orders
        .iter()
        .map(|&o| h.elements().filter(|&y| h.element_order(y) == o).collect())
        .collect();
    let mut imgs = Vec::with_capacity(gens.len());
    fn search(
        g: &Group,
        h: &Group,
        gens: &[Elem],
        cands: &[Vec<Elem>],
        first: &[Elem],
        imgs: &mut Vec<Elem>,
    ) -> Option<Vec<Elem>> {
        let i = imgs.len();
        let pool = if i == 0 { first } else { &cands[i] };
        for &y in pool {
            imgs.push(y);
            if let Some(map) = extend_hom(g, h, &gens[..=i], imgs) {
                if i + 1 == gens.len() {
                    let mut seen = vec![false; h.order()];
                    if map
                        .iter()
                        .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
                    {
                        return Some(map);
                    }
                } else if let Some(m) = search(g, h, gens, cands, first, imgs) {
                    return Some(m);
                }
            }
            imgs.pop();
        }
        None
    }
    Ok(search(g, h, &gens, &by_order, &first, &mut imgs))
}

pub fn are_isomorphic(g: &Arc<Group>, h: &Arc<Group>) -> Result<bool> {
    Ok(find_isomorphism(g, h)?.is_some())
}

/// Isomorphism types of 2-groups of order at most 64 that the extension
/// classification produces. Orders are of the whole group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IsoType2 {
    Trivial,
    Cyclic(usize),
    ElementaryAbelian(u32),
    Abelian(Vec<usize>),
    Dihedral(usize),
    SemiDihedral(usize),
    Quaternion(usize),
    C2xDihedral(usize),
    /// `C_m : C_4` with the generator of order 4 inverting.
    CyclicByC4(usize),
    /// `(C_m x C_2) : C_2`.
    CyclicC2ByC2(usize),
    Other {
        order: usize,
        signature: String,
    },
}

impl fmt::Display for IsoType2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoType2::Trivial => write!(f, "1"),
            IsoType2::Cyclic(n) => write!(f, "C{n}"),
            IsoType2::ElementaryAbelian(r) => write!(f, "C2^{r}"),
            IsoType2::Abelian(inv) => {
                let parts: Vec<String> = inv.iter().map(|n| format!("C{n}")).collect();
                write!(f, "{}", parts.join("x"))
            }
            IsoType2::Dihedral(n) => write!(f, "D{n}"),
            IsoType2::SemiDihedral(n) => write!(f, "SD{n}"),
            IsoType2::Quaternion(n) => write!(f, "Q{n}"),
            IsoType2::C2xDihedral(n) => write!(f, "C2xD{}", n / 2),
            IsoType2::CyclicByC4(n) => write!(f, "C{}:C4", n / 4),
            IsoType2::CyclicC2ByC2(n) => write!(f, "(C{}xC2):C2", n / 4),
            IsoType2::Other { order, signature } => write!(f, "other{order}[{signature}]"),
        }
    }
}

impl IsoType2 {
    pub fn is_quaternion(&self) -> bool {
        matches!(self, IsoType2::Quaternion(_))
    }

    pub fn is_dihedral(&self) -> bool {
        matches!(self, IsoType2::Dihedral(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Invariants {
    order: usize,
    exponent: usize,
    center: usize,
    abelianization: usize,
    histogram: Vec<usize>,
}

fn invariants(g: &Arc<Group>) -> Result<Invariants> {
    Ok(Invariants {
        order: g.order(),
        exponent: exponent(g),
        center: center(g)?.order(),
        abelianization: g.order() / derived_subgroup(g).order(),
        histogram: order_histogram(g),
    })
}

/// Cyclic invariants of an abelian 2-group from its order histogram.
fn abelian_invariants(g: &Group) -> Vec<usize> {
    let h = order_histogram(g);
    // a_i = #{x : x^(2^i) = 1}; the number of cyclic factors of order >= 2^i
    // is log2(a_i / a_(i-1))
    let mut a = vec![1usize];
    let mut k = 2;
    while a.last() != Some(&g.order()) {
        let cnt: usize = (1..=k)
            .filter(|d| k % d == 0)
            .map(|d| h.get(d).copied().unwrap_or(0))
            .sum();
        a.push(cnt);
        k *= 2;
    }
    let ge: Vec<u32> = a
        .windows(2)
        .map(|w| (w[1] / w[0]).trailing_zeros())
        .collect();
    let mut inv = Vec::new();
    for (i, &c) in ge.iter().enumerate() {
        let next = ge.get(i + 1).copied().unwrap_or(0);
        for _ in 0..c - next {
            inv.push(1usize << (i + 1));
        }
    }
    inv.sort_unstable();
    inv
}

/// The iso-type of a 2-group: invariants first, then a brute-force
/// isomorphism test against reference constructions where invariants
/// leave several candidates.
pub fn iso_type_2group(g: &Arc<Group>) -> Result<IsoType2> {
    let n = g.order();
    if !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "order {n} is not a power of 2"
        )));
    }
    check_cap("2-group order", n, TWO_GROUP_CAP)?;
    if n == 1 {
        return Ok(IsoType2::Trivial);
    }
    if g.is_abelian() {
        let inv = abelian_invariants(g);
        return Ok(if inv.len() == 1 {
            IsoType2::Cyclic(n)
        } else if inv.iter().all(|&c| c == 2) {
            IsoType2::ElementaryAbelian(inv.len() as u32)
        } else {
            IsoType2::Abelian(inv)
        });
    }
    let involutions = order_histogram(g)[2];
    if involutions == 1 {
        return Ok(IsoType2::Quaternion(n));
    }
    let inv = invariants(g)?;
    let m = n / 4;
    let refs = [
        (IsoType2::Dihedral(n), (0, 0, 1)),
        (IsoType2::SemiDihedral(n), (0, 1, 1)),
        (IsoType2::C2xDihedral(n), (0, 0, 0)),
        (IsoType2::CyclicC2ByC2(n), (0, 1, 0)),
        (IsoType2::CyclicByC4(n), (1, 1, 0)),
    ];
    for (ty, (a, b, c)) in refs {
        let r = Arc::new(extension_of_dihedral(m, a, b, c)?);
        if !r.is_abelian() && invariants(&r)? == inv && are_isomorphic(g, &r)? {
            return Ok(ty);
        }
    }
    Ok(IsoType2::Other {
        order: n,
        signature: format!(
            "exp{} z{} ab{} inv{}",
            inv.exponent, inv.center, inv.abelianization, involutions
        ),
    })
}
