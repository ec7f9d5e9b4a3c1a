//! Naming subgroups on the command line.

use std::sync::Arc;

use blockmorita_core::groups::{
    are_isomorphic, catalog_group, center, derived_subgroup, diagonal_subgroup, sylow2, Elem,
    Group, Subgroup,
};
use blockmorita_core::rng::SeededRng;
use blockmorita_core::scott::sylow_identification;
use blockmorita_core::{Error, Result};

/// Above this order, catalog-name lookups would scan too many pairs.
pub const SEARCH_ORDER_CAP: usize = 2000;

/// Resolves a subgroup of `g`:
/// `whole`, `trivial`, `sylow`, `center`, `derived`, `diag` (the diagonal
/// Sylow subgroup of a product `X*Y`), or a catalog name, located as a
/// 2-generated subgroup isomorphic to that group.
pub fn resolve_subgroup(g: &Arc<Group>, spec: &str, rng: &mut SeededRng) -> Result<Subgroup> {
    match spec {
        "whole" => Ok(Subgroup::whole(g)),
        "trivial" | "1" => Ok(Subgroup::trivial(g)),
        "sylow" | "sylow2" => sylow2(g, rng),
        "center" | "Z" => center(g),
        "derived" => Ok(derived_subgroup(g)),
        "diag" => {
            let (a, b) = g.factors().cloned().ok_or_else(|| {
                Error::InvalidParameter(format!("{} is not a product X*Y", g.name()))
            })?;
            let id = sylow_identification(&a, &b, rng)?;
            diagonal_subgroup(g, &id)
        }
        name => find_isomorphic(g, &catalog_group(name)?),
    }
}

fn find_isomorphic(g: &Arc<Group>, h: &Arc<Group>) -> Result<Subgroup> {
    if !g.order().is_multiple_of(h.order()) {
        return Err(Error::InvalidParameter(format!(
            "|{}| does not divide |{}|",
            h.name(),
            g.name()
        )));
    }
    blockmorita_core::error::check_cap(
        "group order for subgroup search",
        g.order(),
        SEARCH_ORDER_CAP,
    )?;
    let mut orders = std::collections::BTreeSet::new();
    for x in h.elements() {
        orders.insert(h.element_order(x));
    }
    let cands: Vec<Elem> = g
        .elements()
        .filter(|&x| orders.contains(&g.element_order(x)))
        .collect();
    for (i, &x) in cands.iter().enumerate() {
        for &y in &cands[i..] {
            let s = Subgroup::generated(g, &[x, y]);
            if s.order() != h.order() {
                continue;
            }
            let (sg, _) = s.to_group("candidate")?;
            if are_isomorphic(&sg, h)? {
                return Ok(s);
            }
        }
    }
    Err(Error::InvalidParameter(format!(
        "no 2-generated subgroup of {} isomorphic to {}",
        g.name(),
        h.name()
    )))
}
