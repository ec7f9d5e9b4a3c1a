use std::fmt;
use std::sync::Arc;

use super::group::{Elem, Group};
use crate::error::{Error, Result};

/// A subgroup of an enumerated group, stored as a sorted member list plus a
/// membership bitset over the parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<Group>,
    members: Vec<Elem>,
    mask: Vec<u64>,
    gens: Vec<Elem>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup(order {} of {})",
            self.order(),
            self.parent.name()
        )
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// The subgroup generated by `gens`. Generators already in the span of
    /// earlier ones are dropped.
    pub fn generated(parent: &Arc<Group>, gens: &[Elem]) -> Subgroup {
        let n = parent.order();
        let mut mask = vec![0u64; n.div_ceil(64)];
        let mut members = vec![0 as Elem];
        mask[0] |= 1;
        let mut kept: Vec<Elem> = Vec::new();
        for &g in gens {
            if mask[g as usize / 64] >> (g % 64) & 1 == 1 {
                continue;
            }
            kept.push(g);
            // the new span is a union of cosets of the old one; re-close
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for &h in &kept {
                    let y = parent.mul(x, h);
                    if mask[y as usize / 64] >> (y % 64) & 1 == 0 {
                        mask[y as usize / 64] |= 1 << (y % 64);
                        members.push(y);
                    }
                }
                i += 1;
            }
        }
        members.sort_unstable();
        Subgroup {
            parent: parent.clone(),
            members,
            mask,
            gens: kept,
        }
    }

    pub fn trivial(parent: &Arc<Group>) -> Subgroup {
        Subgroup::generated(parent, &[])
    }

    pub fn whole(parent: &Arc<Group>) -> Subgroup {
        Subgroup::generated(parent, parent.gens())
    }

    /// Builds from a member list already known to be a subgroup; closure is
    /// verified, and generators are chosen greedily.
    pub fn from_members(parent: &Arc<Group>, members: &[Elem]) -> Result<Subgroup> {
        let mut gens = Vec::new();
        let mut cur = Subgroup::trivial(parent);
        for &x in members {
            if !cur.contains(x) {
                gens.push(x);
                cur = Subgroup::generated(parent, &gens);
            }
        }
        if cur.order() != members.len() {
            return Err(Error::Structural(
                "member list is not closed under multiplication".into(),
            ));
        }
        Ok(cur)
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x as usize / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    /// `x^-1 S x`
    pub fn conjugate(&self, x: Elem) -> Subgroup {
        let g = &self.parent;
        let gens: Vec<Elem> = self.gens.iter().map(|&s| g.conj(s, x)).collect();
        Subgroup::generated(g, &gens)
    }

    pub fn is_normalized_by(&self, x: Elem) -> bool {
        self.gens
            .iter()
            .all(|&s| self.contains(self.parent.conj(s, x)))
    }

    pub fn is_normal(&self) -> bool {
        self.parent.gens().iter().all(|&x| self.is_normalized_by(x))
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        Subgroup::generated(&self.parent, &gens)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let m: Vec<Elem> = self
            .members
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup::from_members(&self.parent, &m).expect("intersection of subgroups is a subgroup")
    }

    /// The subgroup as a standalone group, with the map from its element
    /// indices to parent indices.
    pub fn to_group(&self, name: impl Into<String>) -> Result<(Arc<Group>, Vec<Elem>)> {
        let gens: Vec<Vec<u16>> = if self.gens.is_empty() {
            vec![self.parent.perm(0).to_vec()]
        } else {
            self.gens
                .iter()
                .map(|&g| self.parent.perm(g).to_vec())
                .collect()
        };
        let h = Group::from_perm_gens(name, self.parent.degree(), &gens)?;
        let emb = h
            .elements()
            .map(|x| {
                self.parent
                    .lookup(h.perm(x))
                    .expect("subgroup element in parent")
            })
            .collect();
        Ok((Arc::new(h), emb))
    }

    /// Right cosets `S x`: the coset index of every parent element and one
    /// representative per coset (the first element met in index order).
    pub fn right_cosets(&self) -> (Vec<u32>, Vec<Elem>) {
        let g = &self.parent;
        let mut coset_of = vec![u32::MAX; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if coset_of[x as usize] == u32::MAX {
                let id = reps.len() as u32;
                reps.push(x);
                for &s in &self.members {
                    coset_of[g.mul(s, x) as usize] = id;
                }
            }
        }
        (coset_of, reps)
    }

    /// Right transversal of `self` inside a supergroup `big`.
    pub fn right_transversal_in(&self, big: &Subgroup) -> Result<Vec<Elem>> {
        if !self.is_subgroup_of(big) {
            return Err(Error::InvalidParameter(
                "not a subgroup of the given overgroup".into(),
            ));
        }
        let g = &self.parent;
        let mut covered = vec![false; g.order()];
        let mut out = Vec::new();
        for &x in &big.members {
            if !covered[x as usize] {
                out.push(x);
                for &s in &self.members {
                    covered[g.mul(s, x) as usize] = true;
                }
            }
        }
        Ok(out)
    }
}
