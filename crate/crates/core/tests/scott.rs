use std::sync::Arc;

use blockmorita_core::ffield::Field;
use blockmorita_core::groups::*;
use blockmorita_core::modrep::*;
use blockmorita_core::rng::SeededRng;
use blockmorita_core::scott::*;

fn group(name: &str) -> Arc<Group> {
    catalog_group(name).unwrap()
}

fn gf(e: u32) -> Arc<Field> {
    Field::gf(e).unwrap()
}

fn involution(g: &Arc<Group>) -> Elem {
    g.elements().find(|&x| g.element_order(x) == 2).unwrap()
}

/// A subgroup of `g` isomorphic to the standalone group `h`, by search.
fn subgroup_like(g: &Arc<Group>, order: usize, pred: impl Fn(&Subgroup) -> bool) -> Subgroup {
    for x in g.elements() {
        for y in g.elements() {
            let s = Subgroup::generated(g, &[x, y]);
            if s.order() == order && pred(&s) {
                return s;
            }
        }
    }
    panic!("no subgroup of order {order}");
}

#[test]
fn scott_of_whole_group_is_trivial() {
    let mut rng = SeededRng::default();
    for name in ["S4", "A5", "Q8"] {
        let g = group(name);
        let sc = scott_module(&Subgroup::whole(&g), &gf(1), &mut rng).unwrap();
        assert_eq!(sc.dim(), 1, "{name}");
    }
}

#[test]
fn small_scott_modules() {
    let mut rng = SeededRng::default();
    let a4 = group("A4");
    let v4 = derived_subgroup(&a4);
    let sc = scott_module(&v4, &gf(2), &mut rng).unwrap();
    assert_eq!(sc.dim(), 1);
    assert!(sc.certificate.unique);

    let s3 = group("S3");
    let c2 = Subgroup::generated(&s3, &[involution(&s3)]);
    let sc = scott_module(&c2, &gf(1), &mut rng).unwrap();
    assert_eq!(sc.dim(), 1);
    match &sc.certificate.method {
        ScottMethod::FullDecomposition { summand_dims } => assert_eq!(summand_dims, &vec![1, 2]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn scott_depends_only_on_a_sylow_subgroup() {
    let mut rng = SeededRng::default();
    let s4 = group("S4");
    let s3 = subgroup_like(&s4, 6, |s| {
        !s.members()
            .iter()
            .all(|&a| s.members().iter().all(|&b| s4.commute(a, b)))
    });
    assert!(scott_equals_sylow_scott(&s3, &gf(1), &mut rng).unwrap());
    let a5 = group("A5");
    let a4 = subgroup_like(&a5, 12, |_| true);
    assert!(scott_equals_sylow_scott(&a4, &gf(2), &mut rng).unwrap());
}

#[test]
fn scott_modules_are_self_dual_with_sylow_vertex() {
    let mut rng = SeededRng::default();
    for (name, e) in [("S4", 1), ("A5", 2), ("SL2_3", 2), ("A4", 2)] {
        let g = group(name);
        let p = sylow2(&g, &mut rng).unwrap();
        for h in [Subgroup::generated(&g, &[involution(&g)]), p.clone()] {
            let sc = scott_module(&h, &gf(e), &mut rng).unwrap();
            assert!(
                is_isomorphic(&sc.module, &sc.module.dual(), &mut rng).unwrap(),
                "{name}"
            );
            let v = vertex_by_brauer(&sc.module, &p).unwrap();
            assert_eq!(v.order(), h.order(), "{name}");
        }
    }
}

#[test]
fn vertices_of_trivial_and_projective_modules() {
    let mut rng = SeededRng::default();
    let g = group("A4");
    let p = sylow2(&g, &mut rng).unwrap();
    let t = GModule::trivial(&g, &gf(1));
    assert_eq!(vertex_by_brauer(&t, &p).unwrap().order(), 4);
    // the principal block projective cover of k: the free summand
    let reg = GModule::regular(&g, &gf(2)).unwrap();
    let d = decompose(&reg, &mut rng).unwrap();
    assert_eq!(
        vertex_by_brauer(&d.summands[0].module, &p).unwrap().order(),
        1
    );
}

#[test]
fn scott_quotient_push() {
    let mut rng = SeededRng::default();
    for name in ["SL2_3", "SL2_5", "Q16"] {
        let g = group(name);
        let q = sylow2(&g, &mut rng).unwrap();
        let z = center(&g).unwrap();
        assert_eq!(z.order(), 2, "{name}");
        assert!(
            verify_scott_quotient_push(&q, &z, &gf(2), &mut rng).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn self_scott_bimodules_are_the_principal_blocks() {
    let mut rng = SeededRng::default();
    for (name, dim) in [("Q8", 8), ("SL2_3", 24), ("A4", 12), ("A5", 44)] {
        let g = group(name);
        let p = sylow2(&g, &mut rng).unwrap();
        let id = Identification::identity(&p);
        let b = scott_bimodule(&id, &gf(2), &mut rng).unwrap();
        assert_eq!(b.scott.dim(), dim, "{name}");
        let bl = principal_block_bimodule(&b.product, &gf(2), &mut rng).unwrap();
        assert!(is_isomorphic(b.module(), &bl, &mut rng).unwrap(), "{name}");
        let report = is_morita_bimodule(b.module(), &mut rng).unwrap();
        assert!(report.verdict, "{name}: {report:?}");
        let oracle = tensor_oracle_verdict(b.module(), &mut rng).unwrap();
        assert!(oracle.verdict, "{name}: {oracle:?}");
    }
}

#[test]
fn tensor_with_the_regular_bimodule_is_the_identity() {
    // kD8 is a single block, so B_0(kD8) is the regular bimodule
    let mut rng = SeededRng::default();
    let g = group("D8");
    let f = gf(1);
    let gg = product_group(&g, &g).unwrap();
    let reg = principal_block_bimodule(&gg, &f, &mut rng).unwrap();
    assert_eq!(reg.dim(), 8);
    let id = sylow_identification(&g, &group("S4"), &mut rng).unwrap();
    let n = scott_bimodule(&id, &f, &mut rng).unwrap();
    let out = tensor_oracle(&reg, n.module(), &n.product).unwrap();
    assert_eq!(out.dim(), n.scott.dim());
    assert!(is_isomorphic(&out, n.module(), &mut rng).unwrap());
}

#[test]
fn negative_control_a4_a5() {
    let mut rng = SeededRng::default();
    let id = sylow_identification(&group("A4"), &group("A5"), &mut rng).unwrap();
    let b = scott_bimodule(&id, &gf(2), &mut rng).unwrap();
    assert_eq!(b.scott.permutation_dim(), 180);
    let report = is_morita_bimodule(b.module(), &mut rng).unwrap();
    assert!(!report.verdict, "{report:?}");
    let oracle = tensor_oracle_verdict(b.module(), &mut rng);
    if let Ok(o) = oracle {
        assert!(!o.verdict);
    }
}

#[test]
fn brauer_indecomposability_of_self_bimodule() {
    let mut rng = SeededRng::default();
    let g = group("SL2_3");
    let p = sylow2(&g, &mut rng).unwrap();
    let b = scott_bimodule(&Identification::identity(&p), &gf(2), &mut rng).unwrap();
    assert!(brauer_indecomposable(b.module(), &b.diagonal, &mut rng).unwrap());
}

#[test]
fn criteria_are_registered_by_name() {
    let reg = CriterionRegistry::default();
    assert_eq!(reg.names(), vec!["progenerator", "tensor-oracle"]);
    assert!(reg.get("tensor-oracle").is_some());
}
