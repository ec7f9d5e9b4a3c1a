//! Named groups. Each family registers a name prefix and a constructor;
//! `X*Y` builds direct products of catalog entries.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::group::Group;
use super::matgroups;
use crate::error::{Error, Result};

/// A family of catalog groups sharing a name prefix.
pub trait GroupFamily: Send + Sync {
    fn prefix(&self) -> &'static str;
    /// Whether the family takes a numeric parameter after its prefix.
    fn parametrised(&self) -> bool {
        true
    }
    fn build(&self, param: usize) -> Result<Group>;
}

/// `x^i s^j t^e` with `x^m = t^c`, `s^2 = t^b`, `s x s^-1 = x^-1 t^(a+b)`,
/// `t` central of order 2; index `i + m j + 2m e`. Taking `x = rs` this is
/// the central extension of the dihedral group of order `2m` by
/// `r^2 = t^a, s^2 = t^b, (rs)^m = t^c`.
pub fn extension_rule(m: usize, a: usize, b: usize, c: usize) -> impl Fn(usize, usize) -> usize {
    move |u, v| {
        let (i, j, e) = (u % m, (u / m) % 2, u / (2 * m));
        let (k, l, d) = (v % m, (v / m) % 2, v / (2 * m));
        let mut t = e + d;
        let mut ex = if j == 0 {
            (i + k) as i64
        } else {
            t += k * (a + b);
            i as i64 - k as i64
        };
        let mut jj = j + l;
        if jj == 2 {
            jj = 0;
            t += b;
        }
        let q = ex.div_euclid(m as i64);
        ex = ex.rem_euclid(m as i64);
        t += (q.rem_euclid(2) as usize) * c;
        ex as usize + m * jj + 2 * m * (t % 2)
    }
}

/// The extension group above, as a permutation group on itself.
pub fn extension_of_dihedral(m: usize, a: usize, b: usize, c: usize) -> Result<Group> {
    let n = 4 * m;
    let gens = [1 % n, m, 2 * m];
    Group::from_mul_rule(
        format!("Ext{}({a}{b}{c})", n),
        n,
        extension_rule(m, a, b, c),
        &gens,
    )
}

/// Rotation-reflection normal form `x^i s^j`, index `i + m j`.
pub fn dihedral_rule(m: usize) -> impl Fn(usize, usize) -> usize {
    move |u, v| {
        let (i, j) = (u % m, u / m);
        let (k, l) = (v % m, v / m);
        let ex = if j == 0 { i + k } else { i + m - k };
        ex % m + m * ((j + l) % 2)
    }
}

struct Cyclic;
impl GroupFamily for Cyclic {
    fn prefix(&self) -> &'static str {
        "C"
    }
    fn build(&self, m: usize) -> Result<Group> {
        if m == 0 {
            return Err(Error::InvalidParameter("C0".into()));
        }
        Group::from_mul_rule(format!("C{m}"), m, move |a, b| (a + b) % m, &[1 % m])
    }
}

struct Dihedral;
impl GroupFamily for Dihedral {
    fn prefix(&self) -> &'static str {
        "D"
    }
    fn build(&self, n: usize) -> Result<Group> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "D{n}: order must be even and at least 4"
            )));
        }
        let m = n / 2;
        Group::from_mul_rule(format!("D{n}"), n, dihedral_rule(m), &[1, m])
    }
}

struct Quaternion;
impl GroupFamily for Quaternion {
    fn prefix(&self) -> &'static str {
        "Q"
    }
    fn build(&self, n: usize) -> Result<Group> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "Q{n}: order must be a power of 2, at least 8"
            )));
        }
        Ok(extension_of_dihedral(n / 4, 1, 1, 1)?.with_name(format!("Q{n}")))
    }
}

fn symmetric_like(n: usize, even: bool) -> Result<Group> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidParameter(format!("degree {n} outside 1..=8")));
    }
    let name = format!("{}{n}", if even { "A" } else { "S" });
    let mut gens: Vec<Vec<u16>> = Vec::new();
    if even {
        for i in 2..n {
            let mut p: Vec<u16> = (0..n as u16).collect();
            p[0] = 1;
            p[1] = i as u16;
            p[i] = 0;
            gens.push(p);
        }
    } else if n > 1 {
        let mut t: Vec<u16> = (0..n as u16).collect();
        t.swap(0, 1);
        gens.push(t);
        gens.push((0..n as u16).map(|i| (i + 1) % n as u16).collect());
    }
    if gens.is_empty() {
        gens.push((0..n as u16).collect());
    }
    Group::from_perm_gens(name, n, &gens)
}

struct Alternating;
impl GroupFamily for Alternating {
    fn prefix(&self) -> &'static str {
        "A"
    }
    fn build(&self, n: usize) -> Result<Group> {
        symmetric_like(n, true)
    }
}

struct Symmetric;
impl GroupFamily for Symmetric {
    fn prefix(&self) -> &'static str {
        "S"
    }
    fn build(&self, n: usize) -> Result<Group> {
        symmetric_like(n, false)
    }
}

struct Sl2;
impl GroupFamily for Sl2 {
    fn prefix(&self) -> &'static str {
        "SL2_"
    }
    fn build(&self, q: usize) -> Result<Group> {
        matgroups::sl2(q)
    }
}

struct Psl2;
impl GroupFamily for Psl2 {
    fn prefix(&self) -> &'static str {
        "PSL2_"
    }
    fn build(&self, q: usize) -> Result<Group> {
        matgroups::psl2(q)
    }
}

struct Pgl2;
impl GroupFamily for Pgl2 {
    fn prefix(&self) -> &'static str {
        "PGL2_"
    }
    fn build(&self, q: usize) -> Result<Group> {
        matgroups::pgl2(q)
    }
}

struct TwoPgl2;
impl GroupFamily for TwoPgl2 {
    fn prefix(&self) -> &'static str {
        "2PGL2_"
    }
    fn build(&self, q: usize) -> Result<Group> {
        matgroups::two_pgl2(q)
    }
}

struct TwoA7;
impl GroupFamily for TwoA7 {
    fn prefix(&self) -> &'static str {
        "2A7"
    }
    fn parametrised(&self) -> bool {
        false
    }
    fn build(&self, _: usize) -> Result<Group> {
        matgroups::double_cover_a7()
    }
}

struct Klein;
impl GroupFamily for Klein {
    fn prefix(&self) -> &'static str {
        "V4"
    }
    fn parametrised(&self) -> bool {
        false
    }
    fn build(&self, _: usize) -> Result<Group> {
        Ok(Dihedral.build(4)?.with_name("V4"))
    }
}

pub struct Catalog {
    families: Vec<Box<dyn GroupFamily>>,
    cache: Mutex<HashMap<String, Arc<Group>>>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog {
            families: Vec::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn register(&mut self, f: Box<dyn GroupFamily>) {
        self.families.push(f);
    }

    pub fn with_builtin() -> Self {
        let mut c = Catalog::new();
        c.register(Box::new(Cyclic));
        c.register(Box::new(Dihedral));
        c.register(Box::new(Quaternion));
        c.register(Box::new(Alternating));
        c.register(Box::new(Symmetric));
        c.register(Box::new(Sl2));
        c.register(Box::new(Psl2));
        c.register(Box::new(Pgl2));
        c.register(Box::new(TwoPgl2));
        c.register(Box::new(TwoA7));
        c.register(Box::new(Klein));
        c
    }

    pub fn prefixes(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.prefix()).collect()
    }

    fn build_simple(&self, name: &str) -> Result<Group> {
        for f in &self.families {
            let Some(rest) = name.strip_prefix(f.prefix()) else {
                continue;
            };
            if !f.parametrised() {
                if rest.is_empty() {
                    return f.build(0);
                }
                continue;
            }
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                let p: usize = rest.parse().map_err(|_| Error::UnknownGroup(name.into()))?;
                return f.build(p);
            }
        }
        Err(Error::UnknownGroup(name.into()))
    }

    /// Looks up (and memoises) a catalog group by name.
    pub fn get(&self, name: &str) -> Result<Arc<Group>> {
        let name = name.trim();
        if let Some(g) = self.cache.lock().expect("catalog lock").get(name) {
            return Ok(g.clone());
        }
        let g = if name.contains('*') {
            let mut parts = name.split('*');
            let first = self.get(parts.next().unwrap_or(""))?;
            let mut acc = first;
            for p in parts {
                let h = self.get(p)?;
                acc = Arc::new(Group::direct_product(&acc, &h)?);
            }
            acc
        } else {
            Arc::new(self.build_simple(name)?)
        };
        self.cache
            .lock()
            .expect("catalog lock")
            .insert(name.to_string(), g.clone());
        Ok(g)
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::with_builtin()
    }
}

/// The shared built-in catalog.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(Catalog::with_builtin)
}

pub fn catalog_group(name: &str) -> Result<Arc<Group>> {
    catalog().get(name)
}
