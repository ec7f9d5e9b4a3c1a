use std::sync::Arc;

use blockmorita_core::ffield::Field;
use blockmorita_core::groups::*;
use blockmorita_core::modrep::*;
use blockmorita_core::rng::SeededRng;
use proptest::prelude::*;

fn group(name: &str) -> Arc<Group> {
    catalog_group(name).unwrap()
}

fn gf(e: u32) -> Arc<Field> {
    Field::gf(e).unwrap()
}

fn involution(g: &Arc<Group>) -> Elem {
    g.elements().find(|&x| g.element_order(x) == 2).unwrap()
}

#[test]
fn permutation_module_of_a4_over_v4_splits_into_three_lines() {
    let g = group("A4");
    let v4 = derived_subgroup(&g);
    assert_eq!(v4.order(), 4);
    let m = GModule::permutation_module(&v4, &gf(2)).unwrap();
    let d = decompose(&m, &mut SeededRng::default()).unwrap();
    assert_eq!(d.dims(), vec![1, 1, 1]);
    // the three lines are pairwise non-isomorphic
    assert_eq!(d.summands.len(), 3);
    // over GF(2) the two nontrivial characters merge into one simple of dim 2
    let m2 = GModule::permutation_module(&v4, &gf(1)).unwrap();
    let mut d2 = decompose(&m2, &mut SeededRng::default()).unwrap().dims();
    d2.sort();
    assert_eq!(d2, vec![1, 2]);
}

#[test]
fn permutation_module_of_s3_over_c2() {
    let g = group("S3");
    let h = Subgroup::generated(&g, &[involution(&g)]);
    let m = GModule::permutation_module(&h, &gf(1)).unwrap();
    let mut rng = SeededRng::default();
    let mut dims = decompose(&m, &mut rng).unwrap().dims();
    dims.sort();
    assert_eq!(dims, vec![1, 2]);
    assert_eq!(
        hom_dim(&GModule::trivial(&g, &gf(1)), &m, &mut rng).unwrap(),
        1
    );
}

#[test]
fn regular_module_of_c3_over_gf4_has_three_distinct_factors() {
    let g = group("C3");
    let m = GModule::regular(&g, &gf(2)).unwrap();
    let res = chop(&m, &mut SeededRng::default()).unwrap();
    assert_eq!(res.factors.len(), 3);
    assert!(res
        .factors
        .iter()
        .all(|(s, k, e)| s.dim() == 1 && *k == 1 && *e == 1));
    // over GF(2) the two nontrivial characters are conjugate
    let m1 = GModule::regular(&g, &gf(1)).unwrap();
    let res1 = chop(&m1, &mut SeededRng::default()).unwrap();
    let mut dims: Vec<_> = res1.factors.iter().map(|(s, _, e)| (s.dim(), *e)).collect();
    dims.sort();
    assert_eq!(dims, vec![(1, 1), (2, 2)]);
    assert_eq!(splitting_degree(&m1, &mut SeededRng::default()).unwrap(), 2);
}

#[test]
fn regular_modules_of_two_groups_are_indecomposable() {
    for name in ["C4", "V4", "D8", "Q8"] {
        let g = group(name);
        let m = GModule::regular(&g, &gf(1)).unwrap();
        let mut rng = SeededRng::default();
        assert!(is_indecomposable(&m, &mut rng).unwrap(), "{name}");
        let res = chop(&m, &mut rng).unwrap();
        assert_eq!(res.factors.len(), 1, "{name}");
        assert_eq!(res.factors[0].1, g.order(), "{name}");
    }
}

#[test]
fn a5_simples_over_gf4() {
    // classical: the 2-modular simples of A5 over GF(4) have dims 1, 2, 2, 4
    let g = group("A5");
    let m = GModule::regular(&g, &gf(2)).unwrap();
    let res = chop(&m, &mut SeededRng::default()).unwrap();
    let mut dims: Vec<_> = res.factors.iter().map(|(s, _, _)| s.dim()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 2, 2, 4]);
    assert!(res.is_absolutely_irreducible());
    // multiplicity of S in kG is dim S times dim P(S); the 4 is projective
    let four = res.factors.iter().find(|(s, _, _)| s.dim() == 4).unwrap();
    assert_eq!(four.1, 4);
}

/// Oracle: dim Hom(k, k[H\G]) = dim k[H\G]^G = number of G-orbits = 1,
/// and dim Hom(k[H\G], k[K\G]) = number of (H, K) double cosets.
fn double_cosets(h: &Subgroup, k: &Subgroup) -> usize {
    let g = h.parent();
    let mut seen = vec![false; g.order()];
    let mut count = 0;
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        count += 1;
        for &a in h.members() {
            for &b in k.members() {
                seen[g.mul(g.mul(a, x), b) as usize] = true;
            }
        }
    }
    count
}

#[test]
fn hom_between_permutation_modules_counts_double_cosets() {
    let mut rng = SeededRng::default();
    for name in ["S4", "A5", "D8", "SL2_3"] {
        let g = group(name);
        let p = sylow2(&g, &mut rng).unwrap();
        let c = Subgroup::generated(&g, &[involution(&g)]);
        let f = gf(1);
        let mp = GModule::permutation_module(&p, &f).unwrap();
        let mc = GModule::permutation_module(&c, &f).unwrap();
        assert_eq!(
            hom_dim(&GModule::trivial(&g, &f), &mp, &mut rng).unwrap(),
            1,
            "{name}"
        );
        assert_eq!(
            hom_dim(&mp, &mc, &mut rng).unwrap(),
            double_cosets(&p, &c),
            "{name}"
        );
        // the generic engine agrees with the fixed-point fast path
        let gp = GModule::new(&g, &f, mp.matrices().to_vec()).unwrap();
        let gc = GModule::new(&g, &f, mc.matrices().to_vec()).unwrap();
        assert_eq!(
            hom_basis(&gp, &gc, &mut rng).unwrap().len(),
            double_cosets(&p, &c),
            "{name}"
        );
    }
}

#[test]
fn hom_basis_elements_commute_with_the_action() {
    let g = group("S4");
    let mut rng = SeededRng::default();
    let h = Subgroup::generated(&g, &[involution(&g)]);
    let v = GModule::permutation_module(&h, &gf(1)).unwrap();
    let v = GModule::new(&g, &gf(1), v.matrices().to_vec()).unwrap();
    let w = v.tensor(&v.dual()).unwrap();
    let basis = hom_basis(&v, &w, &mut rng).unwrap();
    assert!(!basis.is_empty());
    for phi in &basis {
        for s in 0..g.gens().len() {
            let lhs = v.gen_matrix(s).mul(phi);
            let rhs = phi.mul(w.gen_matrix(s));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn double_dual_and_induction() {
    let mut rng = SeededRng::default();
    let g = group("A4");
    let f = gf(2);
    let v4 = derived_subgroup(&g);
    let m = GModule::permutation_module(&v4, &f).unwrap();
    let m = GModule::new(&g, &f, m.matrices().to_vec()).unwrap();
    let r = m.tensor(&GModule::regular(&g, &f).unwrap()).unwrap();
    assert!(is_isomorphic(&m.dual().dual(), &m, &mut rng).unwrap());

    let h = Subgroup::generated(&g, &[involution(&g)]);
    let emb = Embedded::new(&h, "H").unwrap();
    let triv = GModule::trivial(&emb.group, &f);
    let ind = triv.induce(&emb).unwrap();
    let perm = GModule::permutation_module(&h, &f).unwrap();
    assert_eq!(ind.dim(), perm.dim());
    assert!(is_isomorphic(&ind, &perm, &mut rng).unwrap());
    // restriction of the regular module is free
    let res = r.restrict(&emb).unwrap();
    assert_eq!(res.dim(), 12 * 3);
}

#[test]
fn non_isomorphic_modules_are_told_apart() {
    let mut rng = SeededRng::default();
    let g = group("S3");
    let f = gf(1);
    let c2 = Subgroup::generated(&g, &[involution(&g)]);
    let c3 = derived_subgroup(&g);
    // k[S3/C2] = k + 2 while k[S3/C3] is uniserial with two trivial factors
    let a = GModule::permutation_module(&c2, &f).unwrap();
    let t = GModule::trivial(&g, &f);
    let b = GModule::permutation_module(&c3, &f)
        .unwrap()
        .direct_sum(&t)
        .unwrap();
    assert_eq!(a.dim(), b.dim());
    assert!(!is_isomorphic(&a, &b, &mut rng).unwrap());
    assert!(!is_isomorphic(
        &b,
        &t.direct_sum(&t).unwrap().direct_sum(&t).unwrap(),
        &mut rng
    )
    .unwrap());
    assert!(is_indecomposable(&GModule::permutation_module(&c3, &f).unwrap(), &mut rng).unwrap());
}

#[test]
fn brauer_quotient_of_regular_module_vanishes() {
    let g = group("S4");
    let f = gf(1);
    let q = Subgroup::generated(&g, &[involution(&g)]);
    let reg = GModule::regular(&g, &f).unwrap();
    assert_eq!(brauer_quotient(&reg, &q).unwrap().module.dim(), 0);
    let triv = GModule::trivial(&g, &f);
    let bq = brauer_quotient(&triv, &q).unwrap();
    assert_eq!(bq.module.dim(), 1);
}

#[test]
fn decomposition_is_a_direct_sum() {
    let mut rng = SeededRng::default();
    let g = group("S4");
    let f = gf(1);
    let h = derived_subgroup(&g);
    let m = GModule::permutation_module(&h, &f).unwrap();
    let d = decompose(&m, &mut rng).unwrap();
    assert_eq!(d.total_dim(), m.dim());
    let p = d.change_of_basis().unwrap();
    assert!(p.is_invertible());
    for s in &d.summands {
        for emb in &s.embeddings {
            // each embedding spans a submodule isomorphic to the summand
            let sub = m.submodule(emb).unwrap();
            assert!(is_isomorphic(&sub, &s.module, &mut rng).unwrap());
        }
    }
}

#[test]
fn decomposition_is_deterministic() {
    let g = group("A4");
    let f = gf(2);
    let h = Subgroup::generated(&g, &[involution(&g)]);
    let m = GModule::permutation_module(&h, &f).unwrap();
    let a = decompose(&m, &mut SeededRng::new(7)).unwrap();
    let b = decompose(&m, &mut SeededRng::new(7)).unwrap();
    assert_eq!(a.dims(), b.dims());
    assert_eq!(a.change_of_basis(), b.change_of_basis());
}

#[test]
fn engines_are_registered_by_name() {
    let reg = EngineRegistry::default();
    assert_eq!(reg.names(), vec!["group-algebra", "hecke", "spin"]);
    assert!(reg.get("hecke").is_some());
    assert!(reg.get("commutant").is_none());
}

#[test]
fn modules_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let g = group("A4");
    let f = gf(2);
    let h = derived_subgroup(&g);
    let m = GModule::permutation_module(&h, &f).unwrap();
    let m = GModule::new(&g, &f, m.matrices().to_vec()).unwrap();
    let path = save_module(&m, dir.path()).unwrap();
    assert!(path.to_string_lossy().ends_with(".gmod"));
    assert_eq!(
        path.file_stem().unwrap().to_string_lossy(),
        header_of(&m).unwrap().digest()
    );
    let back = load_module(&path, &g).unwrap();
    assert_eq!(back.matrices(), m.matrices());
    assert!(load_module(&path, &group("S4")).is_err());
}

#[test]
fn kernel_must_act_trivially_to_push_down() {
    let g = group("SL2_3");
    let z = center(&g).unwrap();
    let qm = central_quotient(&g, &z).unwrap();
    let f = gf(2);
    let m = GModule::permutation_module(&z, &f).unwrap();
    let pushed = m.push_to_quotient(&qm).unwrap();
    assert_eq!(pushed.dim(), 12);
    assert!(GModule::regular(&g, &f)
        .unwrap()
        .push_to_quotient(&qm)
        .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brauer_quotient_of_permutation_module_counts_fixed_cosets(seed in 0u64..1000, gi in 0usize..4) {
        let name = ["S4", "A4", "D8", "SL2_3"][gi];
        let g = group(name);
        let mut rng = SeededRng::new(seed);
        let p = sylow2(&g, &mut rng).unwrap();
        let subs = subgroup_classes(&p, 64).unwrap();
        let h = &subs[seed as usize % subs.len()];
        let q = &subs[(seed as usize / 7) % subs.len()];
        let m = GModule::permutation_module(h, &gf(1)).unwrap();
        let bq = brauer_quotient(&m, q).unwrap();
        prop_assert_eq!(bq.module.dim(), fixed_coset_count(h, q));
    }

    #[test]
    fn hom_dim_is_additive(seed in 0u64..1000) {
        let g = group("S3");
        let f = gf(1);
        let mut rng = SeededRng::new(seed);
        let c2 = Subgroup::generated(&g, &[involution(&g)]);
        let a = GModule::permutation_module(&c2, &f).unwrap();
        let a = GModule::new(&g, &f, a.matrices().to_vec()).unwrap();
        let t = GModule::trivial(&g, &f);
        let lhs = hom_dim(&a.direct_sum(&t).unwrap(), &a, &mut rng).unwrap();
        let rhs = hom_dim(&a, &a, &mut rng).unwrap() + hom_dim(&t, &a, &mut rng).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
