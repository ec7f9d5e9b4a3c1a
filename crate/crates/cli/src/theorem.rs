//! Theorem instances: reduce a group with quaternion Sylow 2-subgroup to
//! its central quotient, place the quotient's principal block in the
//! dihedral list, and run the Morita check against a representative.

use std::sync::Arc;

use blockmorita_core::ffield::Field;
use blockmorita_core::groups::{
    catalog_group, center, central_quotient, iso_type_2group, odd_core, prime_power, sylow2,
    two_part, Group, IsoType2,
};
use blockmorita_core::rng::SeededRng;
use blockmorita_core::scott::{
    is_morita_bimodule, principal_block_simples, scott_bimodule, sylow_identification, MoritaReport,
};
use blockmorita_core::{Error, Result};
use serde::Serialize;

/// Order of the one sporadic entry of the dihedral list.
const A7_ORDER: usize = 2520;

/// Position of a principal block in the dihedral list, cases 1 to 6,
/// with the odd prime power `q` for the linear cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralCase {
    pub case: u8,
    pub q: Option<usize>,
    /// `log2` of the order of the dihedral Sylow subgroup.
    pub defect: u32,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremInstanceReport {
    pub input_group: String,
    pub odd_core_trivial: bool,
    pub center_order: usize,
    pub sylow_iso_type: String,
    pub n: u32,
    pub quotient_order: usize,
    pub quotient_sylow_iso_type: String,
    pub dihedral_quotient_class: DihedralCase,
    pub representative: String,
    pub representative_class: DihedralCase,
    /// The representative, when its quotient sits in the same case.
    pub matched_representative: Option<String>,
    pub quaternion_level_verdict: bool,
    /// The verdict agrees with the case comparison.
    pub consistent: bool,
    pub morita: MoritaReport,
}

/// The reduction data of one group.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub odd_core_trivial: bool,
    pub center_order: usize,
    pub sylow: IsoType2,
    pub n: u32,
    pub quotient: Arc<Group>,
    pub quotient_sylow: IsoType2,
    pub class: DihedralCase,
}

fn is_dihedral_like(t: &IsoType2) -> bool {
    t.is_dihedral() || *t == IsoType2::ElementaryAbelian(2)
}

pub fn reduce(g: &Arc<Group>, rng: &mut SeededRng) -> Result<Reduction> {
    let odd_core_trivial = odd_core(g)?.order() == 1;
    if !odd_core_trivial {
        return Err(Error::Structural(format!(
            "{}: the largest normal subgroup of odd order is not trivial",
            g.name()
        )));
    }
    let p = sylow2(g, rng)?;
    let (pg, _) = p.to_group("P")?;
    let sylow = iso_type_2group(&pg)?;
    if !sylow.is_quaternion() {
        return Err(Error::Structural(format!(
            "{}: Sylow 2-subgroup is {sylow}, not quaternion",
            g.name()
        )));
    }
    let n = p.order().trailing_zeros();
    let z = center(g)?;
    if z.order() != 2 {
        return Err(Error::Structural(format!(
            "{}: centre of order {} although the odd core is trivial and the Sylow subgroup is quaternion",
            g.name(),
            z.order()
        )));
    }
    let qm = central_quotient(g, &z)?;
    let quotient = qm.target.clone();
    let (pbar, _) = qm.image(&p).to_group("P/Z")?;
    let quotient_sylow = iso_type_2group(&pbar)?;
    if !is_dihedral_like(&quotient_sylow) {
        return Err(Error::Structural(format!(
            "{}: P/Z is {quotient_sylow}, not dihedral",
            g.name()
        )));
    }
    let class = classify_dihedral(&quotient, rng)?;
    Ok(Reduction {
        odd_core_trivial,
        center_order: z.order(),
        sylow,
        n,
        quotient,
        quotient_sylow,
        class,
    })
}

fn solve_q(order: usize, factor: usize) -> Option<usize> {
    // q (q^2 - 1) / factor = order with q an odd prime power
    let mut q = 3usize;
    while q * (q * q - 1) / factor <= order {
        if q * (q * q - 1) / factor == order && prime_power(q).is_some() {
            return Some(q);
        }
        q += 2;
    }
    None
}

/// Places the principal block of `gbar`, a group with dihedral (or Klein
/// four) Sylow 2-subgroup and no odd normal subgroup, in the list by
/// invariants: the number of simple modules, the group order and `q` mod 4.
pub fn classify_dihedral(gbar: &Arc<Group>, rng: &mut SeededRng) -> Result<DihedralCase> {
    let order = gbar.order();
    let defect = two_part(order).trailing_zeros();
    if order.is_power_of_two() {
        return Ok(DihedralCase {
            case: 1,
            q: None,
            defect,
        });
    }
    if order == A7_ORDER && defect == 3 {
        return Ok(DihedralCase {
            case: 2,
            q: None,
            defect,
        });
    }
    let (simples, _) = principal_block_simples(gbar, rng)?;
    let (case, q) = match simples.len() {
        3 => {
            let q = solve_q(order, 2).ok_or_else(|| not_listed(gbar, 3))?;
            (if q % 4 == 1 { 3 } else { 4 }, q)
        }
        2 => {
            let q = solve_q(order, 1).ok_or_else(|| not_listed(gbar, 2))?;
            (if q % 4 == 1 { 5 } else { 6 }, q)
        }
        l => return Err(not_listed(gbar, l)),
    };
    let want = match case {
        3 => two_part(q - 1),
        4 => two_part(q + 1),
        5 => 2 * two_part(q - 1),
        _ => 2 * two_part(q + 1),
    };
    if want != 1 << defect {
        return Err(Error::Structural(format!(
            "{}: case ({case}) with q = {q} predicts a Sylow subgroup of order {want}, found {}",
            gbar.name(),
            1usize << defect
        )));
    }
    Ok(DihedralCase {
        case,
        q: Some(q),
        defect,
    })
}

fn not_listed(g: &Group, l: usize) -> Error {
    Error::Structural(format!(
        "{} (order {}, {l} simple modules in the principal block) is not in the dihedral list",
        g.name(),
        g.order()
    ))
}

/// Runs the reduction on both groups and the Morita check on
/// `Sc(G x H, Delta P)`.
pub fn verify_theorem(
    group: &str,
    representative: &str,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<TheoremInstanceReport> {
    let g = catalog_group(group)?;
    let h = catalog_group(representative)?;
    let rg = reduce(&g, rng)?;
    let rh = reduce(&h, rng)?;
    let id = sylow_identification(&g, &h, rng)?;
    let bim = scott_bimodule(&id, field, rng)?;
    let morita = is_morita_bimodule(bim.module(), rng)?;
    let same_case = rg.class.case == rh.class.case && rg.n == rh.n;
    Ok(TheoremInstanceReport {
        input_group: group.to_string(),
        odd_core_trivial: rg.odd_core_trivial,
        center_order: rg.center_order,
        sylow_iso_type: rg.sylow.to_string(),
        n: rg.n,
        quotient_order: rg.quotient.order(),
        quotient_sylow_iso_type: rg.quotient_sylow.to_string(),
        dihedral_quotient_class: rg.class,
        representative: representative.to_string(),
        representative_class: rh.class,
        matched_representative: same_case.then(|| representative.to_string()),
        quaternion_level_verdict: morita.verdict,
        consistent: morita.verdict == same_case,
        morita,
    })
}
