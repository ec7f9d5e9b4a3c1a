//! Direct-product bookkeeping: Sylow identifications and diagonal subgroups.

use std::collections::HashMap;
use std::sync::Arc;

use super::group::{Elem, Group};
use super::iso::find_isomorphism;
use super::structure::QuotientMap;
use super::subgroup::Subgroup;
use crate::error::{Error, Result};

/// An isomorphism `phi: P -> P'` between subgroups of two groups, stored
/// on parent element indices.
#[derive(Clone, Debug)]
pub struct Identification {
    pub left: Subgroup,
    pub right: Subgroup,
    phi: HashMap<Elem, Elem>,
}

impl Identification {
    /// Searches for an isomorphism between the two subgroups.
    pub fn search(left: &Subgroup, right: &Subgroup) -> Result<Identification> {
        let (lg, lemb) = left.to_group("P")?;
        let (rg, remb) = right.to_group("P'")?;
        let map = find_isomorphism(&lg, &rg)?.ok_or_else(|| {
            Error::NoIsomorphism(format!(
                "subgroups of order {} and {}",
                left.order(),
                right.order()
            ))
        })?;
        let phi = lg
            .elements()
            .map(|x| (lemb[x as usize], remb[map[x as usize] as usize]))
            .collect();
        Ok(Identification {
            left: left.clone(),
            right: right.clone(),
            phi,
        })
    }

    /// The identity identification of a subgroup with itself.
    pub fn identity(p: &Subgroup) -> Identification {
        let phi = p.members().iter().map(|&x| (x, x)).collect();
        Identification {
            left: p.clone(),
            right: p.clone(),
            phi,
        }
    }

    pub fn apply(&self, u: Elem) -> Elem {
        self.phi[&u]
    }

    pub fn order(&self) -> usize {
        self.left.order()
    }

    /// Restriction to a subgroup `q` of the left side.
    pub fn restrict(&self, q: &Subgroup) -> Result<Identification> {
        if !q.is_subgroup_of(&self.left) {
            return Err(Error::InvalidParameter(
                "restriction to a non-subgroup".into(),
            ));
        }
        let img: Vec<Elem> = q.gens().iter().map(|&u| self.apply(u)).collect();
        let right = Subgroup::generated(self.right.parent(), &img);
        let phi = q.members().iter().map(|&u| (u, self.apply(u))).collect();
        Ok(Identification {
            left: q.clone(),
            right,
            phi,
        })
    }

    /// The induced identification of images in two quotients. The kernels
    /// must correspond under `phi`.
    pub fn push_through(&self, ql: &QuotientMap, qr: &QuotientMap) -> Result<Identification> {
        let left = ql.image(&self.left);
        let right = qr.image(&self.right);
        let mut phi = HashMap::new();
        for &u in self.left.members() {
            let a = ql.project(u);
            let b = qr.project(self.apply(u));
            if let Some(&old) = phi.get(&a) {
                if old != b {
                    return Err(Error::Structural(
                        "kernels do not correspond under the identification".into(),
                    ));
                }
            }
            phi.insert(a, b);
        }
        Ok(Identification { left, right, phi })
    }
}

/// `{(u, phi(u)) : u in P}` inside the direct product.
pub fn diagonal_subgroup(prod: &Arc<Group>, id: &Identification) -> Result<Subgroup> {
    let gens: Vec<Elem> = id
        .left
        .gens()
        .iter()
        .map(|&u| {
            prod.pair(u, id.apply(u))
                .ok_or_else(|| Error::InvalidParameter("not a direct product".into()))
        })
        .collect::<Result<_>>()?;
    let d = Subgroup::generated(prod, &gens);
    if d.order() != id.order() {
        return Err(Error::Structural(
            "diagonal subgroup has the wrong order".into(),
        ));
    }
    Ok(d)
}

/// `A x B` inside the direct product, from subgroups of each factor.
pub fn product_subgroup(prod: &Arc<Group>, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    let mut gens = Vec::new();
    for &x in a.gens() {
        gens.push(
            prod.pair(x, 0)
                .ok_or_else(|| Error::InvalidParameter("not a direct product".into()))?,
        );
    }
    for &y in b.gens() {
        gens.push(
            prod.pair(0, y)
                .ok_or_else(|| Error::InvalidParameter("not a direct product".into()))?,
        );
    }
    Ok(Subgroup::generated(prod, &gens))
}
