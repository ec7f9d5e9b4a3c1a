use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{check_cap, Error, Result};

/// Index of an element inside its group's enumeration; 0 is the identity.
pub type Elem = u32;

/// Hard ceiling on enumerated group orders.
pub const MAX_ORDER: usize = 200_000;

/// Groups up to this order get a lazily built multiplication table.
const TABLE_LIMIT: usize = 4096;

/// A finite group realised as permutations (right action, `p^(ab) = (p^a)^b`)
/// with every element enumerated.
pub struct Group {
    name: String,
    degree: usize,
    perms: Vec<u16>,
    index: HashMap<Box<[u16]>, Elem>,
    gens: Vec<Elem>,
    cayley: Vec<Vec<Elem>>,
    tree: Vec<(Elem, u8)>,
    /// Breadth-first enumeration; parents precede children.
    bfs: Vec<Elem>,
    /// Schreier words, flattened: `words[word_at[x]..word_at[x + 1]]`
    /// spells `x`.
    words: Vec<u8>,
    word_at: Vec<u32>,
    inverse: Vec<Elem>,
    factors: Option<(Arc<Group>, Arc<Group>)>,
    table: OnceLock<Vec<Elem>>,
    pub(crate) classes: OnceLock<super::structure::Classes>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (order {}, degree {})",
            self.name,
            self.order(),
            self.degree
        )
    }
}

fn compose_into(a: &[u16], b: &[u16], out: &mut [u16]) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = b[x as usize];
    }
}

impl Group {
    /// Closure of the given permutations. Generators equal to the identity
    /// are kept so that generator indices stay aligned with the caller.
    pub fn from_perm_gens(
        name: impl Into<String>,
        degree: usize,
        gens: &[Vec<u16>],
    ) -> Result<Group> {
        if degree > u16::MAX as usize {
            return Err(Error::cap("permutation degree", degree, u16::MAX as usize));
        }
        for g in gens {
            if g.len() != degree {
                return Err(Error::InvalidParameter("generator degree mismatch".into()));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::InvalidParameter(
                        "generator is not a permutation".into(),
                    ));
                }
            }
        }
        let mut perms: Vec<u16> = (0..degree as u16).collect();
        let mut index = HashMap::new();
        index.insert(perms.clone().into_boxed_slice(), 0);
        let mut tree = vec![(0, u8::MAX)];
        let mut buf = vec![0u16; degree];
        let mut i = 0;
        while i < tree.len() {
            for (s, g) in gens.iter().enumerate() {
                compose_into(&perms[i * degree..(i + 1) * degree], g, &mut buf);
                if !index.contains_key(buf.as_slice()) {
                    let n = tree.len();
                    check_cap("group order", n + 1, MAX_ORDER)?;
                    index.insert(buf.clone().into_boxed_slice(), n as Elem);
                    perms.extend_from_slice(&buf);
                    tree.push((i as Elem, s as u8));
                }
            }
            i += 1;
        }
        let gen_elems = gens.iter().map(|g| index[g.as_slice()]).collect();
        Ok(Group::finish(
            name.into(),
            degree,
            perms,
            index,
            gen_elems,
            None,
        ))
    }

    /// Regular representation of a group given by a multiplication rule on
    /// `0..n`, with 0 the identity. Element `i` keeps index `i`.
    pub fn from_mul_rule(
        name: impl Into<String>,
        n: usize,
        mul: impl Fn(usize, usize) -> usize,
        gens: &[usize],
    ) -> Result<Group> {
        check_cap("group order", n, 4096)?;
        let mut perms = vec![0u16; n * n];
        for i in 0..n {
            for p in 0..n {
                let v = mul(p, i);
                if v >= n {
                    return Err(Error::InvalidParameter(
                        "multiplication rule leaves the carrier".into(),
                    ));
                }
                perms[i * n + p] = v as u16;
            }
        }
        let mut index = HashMap::with_capacity(n);
        for i in 0..n {
            let key: Box<[u16]> = perms[i * n..(i + 1) * n].into();
            if index.insert(key, i as Elem).is_some() {
                return Err(Error::Structural(
                    "multiplication rule is not a group law".into(),
                ));
            }
        }
        if perms[..n].iter().enumerate().any(|(p, &v)| v as usize != p) {
            return Err(Error::Structural("element 0 is not the identity".into()));
        }
        // associativity against generators implies it everywhere
        for &s in gens {
            for i in 0..n {
                let m = index[&perms[i * n..(i + 1) * n]] as usize;
                if (0..n).any(|p| mul(mul(p, m), s) != mul(p, mul(m, s))) {
                    return Err(Error::Structural(
                        "multiplication rule is not associative".into(),
                    ));
                }
            }
        }
        let g = Group::finish(
            name.into(),
            n,
            perms,
            index,
            gens.iter().map(|&x| x as Elem).collect(),
            None,
        );
        if g.tree.iter().skip(1).any(|t| t.1 == u8::MAX) {
            return Err(Error::Structural(
                "generators do not generate the carrier".into(),
            ));
        }
        Ok(g)
    }

    /// Direct product acting on the disjoint union of the two point sets.
    /// Element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &Arc<Group>, b: &Arc<Group>) -> Result<Group> {
        let n = a.order() * b.order();
        check_cap("group order", n, MAX_ORDER)?;
        let degree = a.degree + b.degree;
        check_cap("permutation degree", degree, u16::MAX as usize)?;
        let mut perms = Vec::with_capacity(n * degree);
        let mut index = HashMap::with_capacity(n);
        for x in 0..a.order() {
            for y in 0..b.order() {
                let start = perms.len();
                perms.extend_from_slice(a.perm(x as Elem));
                perms.extend(b.perm(y as Elem).iter().map(|&p| p + a.degree as u16));
                index.insert(perms[start..].into(), (x * b.order() + y) as Elem);
            }
        }
        let mut gens: Vec<Elem> = a.gens.iter().map(|&g| g * b.order() as Elem).collect();
        gens.extend(b.gens.iter().copied());
        let name = format!("{}*{}", a.name, b.name);
        Ok(Group::finish(
            name,
            degree,
            perms,
            index,
            gens,
            Some((a.clone(), b.clone())),
        ))
    }

    fn finish(
        name: String,
        degree: usize,
        perms: Vec<u16>,
        index: HashMap<Box<[u16]>, Elem>,
        gens: Vec<Elem>,
        factors: Option<(Arc<Group>, Arc<Group>)>,
    ) -> Group {
        let n = index.len();
        let mut g = Group {
            name,
            degree,
            perms,
            index,
            gens,
            cayley: Vec::new(),
            tree: Vec::new(),
            bfs: Vec::new(),
            words: Vec::new(),
            word_at: Vec::new(),
            inverse: Vec::new(),
            factors,
            table: OnceLock::new(),
            classes: OnceLock::new(),
        };
        let mut buf = vec![0u16; degree];
        g.cayley = g
            .gens
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|x| {
                        compose_into(g.perm(x as Elem), g.perm(s), &mut buf);
                        g.index[buf.as_slice()]
                    })
                    .collect()
            })
            .collect();
        // breadth-first Schreier tree, so words are short
        let mut tree = vec![(0, u8::MAX); n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = vec![0 as Elem];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (s, table) in g.cayley.iter().enumerate() {
                let y = table[x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    tree[y as usize] = (x, s as u8);
                    queue.push(y);
                }
            }
            i += 1;
        }
        let mut spans = vec![(0u32, 0u32); n];
        let mut words = Vec::new();
        for &y in &queue[1..] {
            let (x, s) = tree[y as usize];
            let (a, b) = spans[x as usize];
            let start = words.len() as u32;
            words.extend_from_within(a as usize..b as usize);
            words.push(s);
            spans[y as usize] = (start, words.len() as u32);
        }
        // re-lay out by element index so spans are contiguous
        let mut flat = Vec::with_capacity(words.len());
        let mut word_at = Vec::with_capacity(n + 1);
        for &(a, b) in &spans {
            word_at.push(flat.len() as u32);
            flat.extend_from_slice(&words[a as usize..b as usize]);
        }
        word_at.push(flat.len() as u32);
        g.words = flat;
        g.word_at = word_at;
        g.bfs = queue;
        g.tree = tree;
        g.inverse = (0..n)
            .map(|x| {
                let p = g.perm(x as Elem);
                for (i, &v) in p.iter().enumerate() {
                    buf[v as usize] = i as u16;
                }
                g.index[buf.as_slice()]
            })
            .collect();
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.inverse.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order() as Elem
    }

    pub fn perm(&self, x: Elem) -> &[u16] {
        let d = self.degree;
        &self.perms[x as usize * d..(x as usize + 1) * d]
    }

    /// The element with the given permutation image, if present.
    pub fn lookup(&self, perm: &[u16]) -> Option<Elem> {
        self.index.get(perm).copied()
    }

    pub fn factors(&self) -> Option<&(Arc<Group>, Arc<Group>)> {
        self.factors.as_ref()
    }

    /// Right multiplication by the `s`-th generator.
    #[inline]
    pub fn mul_gen(&self, x: Elem, s: usize) -> Elem {
        self.cayley[s][x as usize]
    }

    pub fn cayley(&self, s: usize) -> &[Elem] {
        &self.cayley[s]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = self.table.get() {
            return t[a as usize * self.order() + b as usize];
        }
        if let Some((f, g)) = &self.factors {
            let m = g.order() as Elem;
            return f.mul(a / m, b / m) * m + g.mul(a % m, b % m);
        }
        if self.order() <= TABLE_LIMIT {
            return self.table()[a as usize * self.order() + b as usize];
        }
        let w =
            &self.words[self.word_at[b as usize] as usize..self.word_at[b as usize + 1] as usize];
        w.iter()
            .fold(a, |acc, &s| self.cayley[s as usize][acc as usize])
    }

    fn table(&self) -> &Vec<Elem> {
        self.table.get_or_init(|| {
            let n = self.order();
            let mut t = vec![0; n * n];
            for a in 0..n {
                let row = &mut t[a * n..(a + 1) * n];
                row[0] = a as Elem;
                for &y in &self.bfs[1..] {
                    let (x, s) = self.tree[y as usize];
                    row[y as usize] = self.cayley[s as usize][row[x as usize] as usize];
                }
            }
            t
        })
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inverse[x as usize]
    }

    /// `x^-1 y x`
    pub fn conj(&self, y: Elem, x: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), y), x)
    }

    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.commute(a, b)))
    }

    /// Generator indices whose product, left to right, is `x`.
    pub fn word(&self, x: Elem) -> Vec<usize> {
        let (a, b) = (
            self.word_at[x as usize] as usize,
            self.word_at[x as usize + 1] as usize,
        );
        self.words[a..b].iter().map(|&s| s as usize).collect()
    }

    /// Elements in breadth-first order with their tree parent and
    /// generator: `x = parent * gen`. The identity comes first, without parent.
    pub fn bfs_order(&self) -> Vec<(Elem, Elem, usize)> {
        let n = self.order();
        let mut children: Vec<Vec<Elem>> = vec![Vec::new(); n];
        for x in 1..n {
            children[self.tree[x].0 as usize].push(x as Elem);
        }
        let mut out = vec![(0, 0, usize::MAX)];
        let mut i = 0;
        while i < out.len() {
            let x = out[i].0;
            for &c in &children[x as usize] {
                out.push((c, x, self.tree[c as usize].1 as usize));
            }
            i += 1;
        }
        out
    }

    /// Projections of a direct-product element onto its factors.
    pub fn split(&self, x: Elem) -> Option<(Elem, Elem)> {
        self.factors
            .as_ref()
            .map(|(_, g)| (x / g.order() as Elem, x % g.order() as Elem))
    }

    /// The direct-product element with the given coordinates.
    pub fn pair(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.factors
            .as_ref()
            .map(|(_, g)| a * g.order() as Elem + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Group {
        Group::from_mul_rule(format!("C{n}"), n, |a, b| (a + b) % n, &[1]).unwrap()
    }

    #[test]
    fn closure_and_words() {
        // S3 on three points
        let g = Group::from_perm_gens("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        for x in g.elements() {
            let w = g.word(x);
            let y = w.iter().fold(0, |acc, &s| g.mul_gen(acc, s));
            assert_eq!(x, y);
            assert_eq!(g.mul(x, g.inv(x)), 0);
        }
        assert!(!g.is_abelian());
    }

    #[test]
    fn product_indexing() {
        let a = Arc::new(cyclic(4));
        let b = Arc::new(cyclic(3));
        let p = Group::direct_product(&a, &b).unwrap();
        assert_eq!(p.order(), 12);
        assert!(p.is_abelian());
        assert_eq!(p.element_order(p.pair(1, 1).unwrap()), 12);
        let x = p.pair(3, 2).unwrap();
        assert_eq!(p.split(x), Some((3, 2)));
    }

    #[test]
    fn bad_rule_rejected() {
        assert!(Group::from_mul_rule("bad", 3, |a, b| (a * b) % 3, &[1]).is_err());
    }
}
