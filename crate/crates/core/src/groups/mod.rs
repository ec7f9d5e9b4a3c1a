//! Finite groups as enumerated permutation groups: the catalog, subgroups,
//! quotients and structural invariants.

mod catalog;
mod embedded;
mod group;
mod iso;
mod matgroups;
mod oddfield;
mod product;
mod structure;
mod subgroup;

pub use catalog::{
    catalog, catalog_group, dihedral_rule, extension_of_dihedral, extension_rule, Catalog,
    GroupFamily,
};
pub use embedded::Embedded;
pub use group::{Elem, Group, MAX_ORDER};
pub use iso::{
    are_isomorphic, find_isomorphism, iso_type_2group, small_generating_set, IsoType2,
    TWO_GROUP_CAP,
};
pub use matgroups::{
    clifford_generators, clifford_relations_hold, double_cover_a7, pgl2, psl2, sl2, sl2_order,
    two_pgl2,
};
pub use oddfield::{prime_power, OddField};
pub use product::{diagonal_subgroup, product_subgroup, Identification};
pub use structure::{
    center, central_quotient, centralizer, classes, conjugating_element, derived_subgroup,
    exponent, frattini_2group, lcm, maximal_subgroups_2group, normalizer, odd_core,
    subgroup_classes, sylow2, two_part, Classes, QuotientMap, ODD_CORE_LIMIT, SCAN_LIMIT,
};
pub use subgroup::Subgroup;
