use std::collections::HashMap;
use std::sync::Arc;

use super::group::{Elem, Group};
use super::subgroup::Subgroup;
use crate::error::{check_cap, Error, Result};
use crate::rng::SeededRng;

/// Scan-based operations refuse groups above this order.
pub const SCAN_LIMIT: usize = 100_000;

/// Odd-core iteration is run only up to this order.
pub const ODD_CORE_LIMIT: usize = 10_000;

/// Conjugacy classes, each sorted, with representatives the smallest member.
#[derive(Clone, Debug)]
pub struct Classes {
    pub classes: Vec<Vec<Elem>>,
    pub class_of: Vec<u32>,
}

impl Classes {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn rep(&self, i: usize) -> Elem {
        self.classes[i][0]
    }
}

pub fn classes(g: &Group) -> Result<&Classes> {
    check_cap("group order for class computation", g.order(), SCAN_LIMIT)?;
    Ok(g.classes.get_or_init(|| {
        let n = g.order();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n as Elem {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[x as usize] = id;
            let mut orbit = vec![x];
            let mut i = 0;
            while i < orbit.len() {
                let y = orbit[i];
                for &s in g.gens() {
                    let z = g.conj(y, s);
                    if class_of[z as usize] == u32::MAX {
                        class_of[z as usize] = id;
                        orbit.push(z);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        Classes { classes, class_of }
    }))
}

pub fn center(g: &Arc<Group>) -> Result<Subgroup> {
    check_cap("group order", g.order(), SCAN_LIMIT)?;
    let m: Vec<Elem> = g
        .elements()
        .filter(|&x| g.gens().iter().all(|&s| g.commute(x, s)))
        .collect();
    Subgroup::from_members(g, &m)
}

/// Elements commuting with every member of `s`.
pub fn centralizer(g: &Arc<Group>, s: &Subgroup) -> Result<Subgroup> {
    check_cap("group order", g.order(), SCAN_LIMIT)?;
    let m: Vec<Elem> = g
        .elements()
        .filter(|&x| s.gens().iter().all(|&y| g.commute(x, y)))
        .collect();
    Subgroup::from_members(g, &m)
}

pub fn normalizer(g: &Arc<Group>, s: &Subgroup) -> Result<Subgroup> {
    check_cap("group order", g.order(), SCAN_LIMIT)?;
    let m: Vec<Elem> = g.elements().filter(|&x| s.is_normalized_by(x)).collect();
    Subgroup::from_members(g, &m)
}

pub fn two_part(n: usize) -> usize {
    1 << n.trailing_zeros()
}

/// A Sylow 2-subgroup grown through normalisers: at each step an element
/// of even order modulo the current subgroup is found inside its
/// normaliser, scanning cyclically from a seeded starting point.
pub fn sylow2(g: &Arc<Group>, rng: &mut SeededRng) -> Result<Subgroup> {
    let target = two_part(g.order());
    let mut s = Subgroup::trivial(g);
    while s.order() < target {
        let n = normalizer(g, &s)?;
        let members = n.members();
        let start = rng.below(members.len());
        let mut grown = None;
        for k in 0..members.len() {
            let y = members[(start + k) % members.len()];
            if s.contains(y) {
                continue;
            }
            let mut m = 1;
            let mut z = y;
            while !s.contains(z) {
                z = g.mul(z, y);
                m += 1;
            }
            if m % 2 == 0 {
                let x = g.pow(y, m as u64 / 2);
                grown = Some(x);
                break;
            }
        }
        let x =
            grown.ok_or_else(|| Error::Structural("normaliser quotient has odd order".into()))?;
        let mut gens = s.gens().to_vec();
        gens.push(x);
        s = Subgroup::generated(g, &gens);
        debug_assert!(s.order().is_power_of_two());
    }
    Ok(s)
}

/// The largest normal subgroup of odd order.
pub fn odd_core(g: &Arc<Group>) -> Result<Subgroup> {
    check_cap("group order for odd core", g.order(), ODD_CORE_LIMIT)?;
    let cl = classes(g)?;
    let mut core = Subgroup::trivial(g);
    loop {
        let mut changed = false;
        for c in &cl.classes {
            let x = c[0];
            if core.contains(x) || g.element_order(x).is_multiple_of(2) {
                continue;
            }
            let mut gens = core.gens().to_vec();
            gens.extend_from_slice(c);
            let t = Subgroup::generated(g, &gens);
            if t.order() % 2 == 1 {
                core = Subgroup::from_members(g, t.members())?;
                changed = true;
            }
        }
        if !changed {
            return Ok(core);
        }
    }
}

pub fn exponent(g: &Group) -> usize {
    g.elements().map(|x| g.element_order(x)).fold(1, lcm)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn derived_subgroup(g: &Arc<Group>) -> Subgroup {
    let mut comms = Vec::new();
    for &a in g.gens() {
        for &b in g.gens() {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            comms.push(c);
        }
    }
    // normal closure of the generator commutators
    let mut s = Subgroup::generated(g, &comms);
    loop {
        let mut gens = s.gens().to_vec();
        let before = s.order();
        for &c in s.gens() {
            for &x in g.gens() {
                let y = g.conj(c, x);
                if !s.contains(y) {
                    gens.push(y);
                }
            }
        }
        s = Subgroup::generated(g, &gens);
        if s.order() == before {
            return s;
        }
    }
}

/// For a 2-group: the Frattini subgroup, generated by all squares.
pub fn frattini_2group(g: &Arc<Group>) -> Subgroup {
    let sq: Vec<Elem> = g.elements().map(|x| g.mul(x, x)).collect();
    let mut uniq = sq.clone();
    uniq.sort_unstable();
    uniq.dedup();
    let t = Subgroup::from_members(g, &[0]).unwrap();
    let mut gens = Vec::new();
    let mut cur = t;
    for x in uniq {
        if !cur.contains(x) {
            gens.push(x);
            cur = Subgroup::generated(g, &gens);
        }
    }
    cur
}

/// Index-2 subgroups of a 2-group `q` (given as a subgroup of `g`).
pub fn maximal_subgroups_2group(q: &Subgroup) -> Result<Vec<Subgroup>> {
    let g = q.parent();
    if q.order() == 1 {
        return Ok(Vec::new());
    }
    // squares generate the Frattini subgroup of a 2-group
    let mut phi = Subgroup::trivial(g);
    for &x in q.members() {
        let y = g.mul(x, x);
        if !phi.contains(y) {
            let mut gens = phi.gens().to_vec();
            gens.push(y);
            phi = Subgroup::generated(g, &gens);
        }
    }
    let mut basis: Vec<Elem> = Vec::new();
    let mut span = phi.clone();
    for &x in q.members() {
        if !span.contains(x) {
            basis.push(x);
            let mut gens = span.gens().to_vec();
            gens.push(x);
            span = Subgroup::generated(g, &gens);
        }
    }
    let d = basis.len();
    if d > 6 {
        return Err(Error::cap("Frattini quotient rank", d, 6));
    }
    let mut out = Vec::new();
    for f in 1u32..(1 << d) {
        let mut gens = phi.gens().to_vec();
        let ones: Vec<usize> = (0..d).filter(|&i| f >> i & 1 == 1).collect();
        for i in 0..d {
            if f >> i & 1 == 0 {
                gens.push(basis[i]);
            }
        }
        for w in ones.windows(2) {
            gens.push(g.mul(basis[w[0]], basis[w[1]]));
        }
        out.push(Subgroup::generated(g, &gens));
    }
    Ok(out)
}

/// All subgroups of a small group `p` (given as a subgroup), one per
/// `p`-conjugacy class, ordered by increasing order.
pub fn subgroup_classes(p: &Subgroup, cap: usize) -> Result<Vec<Subgroup>> {
    check_cap("subgroup lattice base", p.order(), cap)?;
    let g = p.parent();
    let mut all: Vec<Subgroup> = Vec::new();
    let mut seen: HashMap<Vec<Elem>, ()> = HashMap::new();
    let mut push = |s: Subgroup, all: &mut Vec<Subgroup>| {
        if seen.insert(s.members().to_vec(), ()).is_none() {
            all.push(s);
        }
    };
    for &x in p.members() {
        push(Subgroup::generated(g, &[x]), &mut all);
    }
    let mut i = 0;
    while i < all.len() {
        for &x in p.members() {
            if !all[i].contains(x) {
                let mut gens = all[i].gens().to_vec();
                gens.push(x);
                push(Subgroup::generated(g, &gens), &mut all);
            }
        }
        i += 1;
    }
    all.sort_by_key(|s| (s.order(), s.members().to_vec()));
    let mut reps: Vec<Subgroup> = Vec::new();
    for s in all {
        let dup = reps
            .iter()
            .any(|r| r.order() == s.order() && p.members().iter().any(|&x| r.conjugate(x) == s));
        if !dup {
            reps.push(s);
        }
    }
    Ok(reps)
}

/// Whether `a` and `b` are conjugate in the parent group; returns a
/// conjugating element `x` with `x^-1 a x = b`.
pub fn conjugating_element(a: &Subgroup, b: &Subgroup) -> Result<Option<Elem>> {
    let g = a.parent();
    check_cap("group order", g.order(), SCAN_LIMIT)?;
    if a.order() != b.order() {
        return Ok(None);
    }
    Ok(g.elements()
        .find(|&x| a.gens().iter().all(|&s| b.contains(g.conj(s, x)))))
}

/// A surjection with central kernel, the target realised as a permutation
/// group on which the projection is recorded element by element.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub source: Arc<Group>,
    pub kernel: Subgroup,
    pub target: Arc<Group>,
    pub projection: Vec<Elem>,
}

impl QuotientMap {
    pub fn project(&self, x: Elem) -> Elem {
        self.projection[x as usize]
    }

    /// Image of a subgroup of the source.
    pub fn image(&self, s: &Subgroup) -> Subgroup {
        let gens: Vec<Elem> = s.gens().iter().map(|&x| self.project(x)).collect();
        Subgroup::generated(&self.target, &gens)
    }

    /// Some preimage of each target element.
    pub fn section(&self) -> Vec<Elem> {
        let mut sec = vec![Elem::MAX; self.target.order()];
        for x in self.source.elements() {
            let y = self.project(x) as usize;
            if sec[y] == Elem::MAX {
                sec[y] = x;
            }
        }
        sec
    }
}

/// `G / Z` for a central subgroup `Z`. The target acts on the `Z`-orbits of
/// points when that action is faithful for `G/Z`, otherwise regularly on
/// the cosets.
pub fn central_quotient(g: &Arc<Group>, z: &Subgroup) -> Result<QuotientMap> {
    if !Arc::ptr_eq(z.parent(), g) {
        return Err(Error::InvalidParameter(
            "kernel lives in another group".into(),
        ));
    }
    if !z
        .members()
        .iter()
        .all(|&x| g.gens().iter().all(|&s| g.commute(x, s)))
    {
        return Err(Error::NotCentral);
    }
    let want = g.order() / z.order();
    let name = format!("{}/Z{}", g.name(), z.order());
    // orbits of Z on points
    let d = g.degree();
    let mut block = vec![u16::MAX; d];
    let mut nb = 0u16;
    for p in 0..d {
        if block[p] == u16::MAX {
            for &x in z.members() {
                block[g.perm(x)[p] as usize] = nb;
            }
            nb += 1;
        }
    }
    let rep_of: Vec<usize> = {
        let mut r = vec![usize::MAX; nb as usize];
        for p in 0..d {
            if r[block[p] as usize] == usize::MAX {
                r[block[p] as usize] = p;
            }
        }
        r
    };
    let on_blocks = |x: Elem| -> Vec<u16> {
        rep_of
            .iter()
            .map(|&p| block[g.perm(x)[p] as usize])
            .collect()
    };
    let gens: Vec<Vec<u16>> = g.gens().iter().map(|&s| on_blocks(s)).collect();
    let t = Group::from_perm_gens(name.clone(), nb as usize, &gens)?;
    let (target, projection) = if t.order() == want {
        let proj = g
            .elements()
            .map(|x| t.lookup(&on_blocks(x)).expect("image element"))
            .collect();
        (t, proj)
    } else {
        let (coset_of, reps) = z.right_cosets();
        let gens: Vec<Vec<u16>> = g
            .gens()
            .iter()
            .map(|&s| {
                reps.iter()
                    .map(|&r| coset_of[g.mul(r, s) as usize] as u16)
                    .collect()
            })
            .collect();
        let t = Group::from_perm_gens(name, reps.len(), &gens)?;
        let proj = g
            .elements()
            .map(|x| {
                let img: Vec<u16> = reps
                    .iter()
                    .map(|&r| coset_of[g.mul(r, x) as usize] as u16)
                    .collect();
                t.lookup(&img).expect("image element")
            })
            .collect();
        (t, proj)
    };
    if target.order() != want {
        return Err(Error::Structural("quotient order mismatch".into()));
    }
    Ok(QuotientMap {
        source: g.clone(),
        kernel: z.clone(),
        target: Arc::new(target),
        projection,
    })
}
