use std::sync::Arc;

use blockmorita_core::groups::*;
use blockmorita_core::rng::SeededRng;

fn sylow_type(name: &str) -> IsoType2 {
    let g = catalog_group(name).unwrap();
    let p = sylow2(&g, &mut SeededRng::default()).unwrap();
    assert_eq!(p.order(), two_part(g.order()));
    let (pg, _) = p.to_group("P").unwrap();
    iso_type_2group(&pg).unwrap()
}

#[test]
fn catalog_orders() {
    for (name, n) in [
        ("C6", 6),
        ("D8", 8),
        ("Q16", 16),
        ("A5", 60),
        ("S4", 24),
        ("SL2_3", 24),
        ("SL2_5", 120),
        ("PSL2_11", 660),
        ("PGL2_7", 336),
        ("2PGL2_3", 48),
        ("SL2_9", 720),
        ("A4*PSL2_11", 7920),
    ] {
        assert_eq!(catalog_group(name).unwrap().order(), n, "{name}");
    }
    assert!(catalog_group("SL2_4").is_err());
    assert!(catalog_group("SL2_15").is_err());
    assert!(catalog_group("Z7").is_err());
}

#[test]
fn quaternion_has_one_involution() {
    let q = catalog_group("Q8").unwrap();
    let inv = q.elements().filter(|&x| q.element_order(x) == 2).count();
    assert_eq!(inv, 1);
    assert_eq!(iso_type_2group(&q).unwrap(), IsoType2::Quaternion(8));
}

#[test]
fn sylow_types_over_small_fields() {
    // classical values: SL2(q) has quaternion Sylow 2-subgroups of order
    // 2(q^2-1)_2, PSL2(q) dihedral or Klein four, PGL2(q) dihedral
    for q in [3usize, 5, 7, 9, 11, 13] {
        let s = two_part(q * q - 1);
        assert_eq!(
            sylow_type(&format!("SL2_{q}")),
            IsoType2::Quaternion(s),
            "SL2_{q}"
        );
        let ps = sylow_type(&format!("PSL2_{q}"));
        if s / 2 == 4 {
            assert_eq!(ps, IsoType2::ElementaryAbelian(2), "PSL2_{q}");
        } else {
            assert_eq!(ps, IsoType2::Dihedral(s / 2), "PSL2_{q}");
        }
        assert_eq!(
            sylow_type(&format!("PGL2_{q}")),
            IsoType2::Dihedral(s),
            "PGL2_{q}"
        );
        assert_eq!(
            sylow_type(&format!("2PGL2_{q}")),
            IsoType2::Quaternion(2 * s),
            "2PGL2_{q}"
        );
    }
}

#[test]
fn double_cover_of_a7() {
    let g = catalog_group("2A7").unwrap();
    assert_eq!(g.order(), 5040);
    assert_eq!(center(&g).unwrap().order(), 2);
    assert_eq!(sylow_type("2A7"), IsoType2::Quaternion(16));
    assert_eq!(odd_core(&g).unwrap().order(), 1);
}

#[test]
fn two_pgl_quotient_is_s4() {
    let g = catalog_group("2PGL2_3").unwrap();
    let z = center(&g).unwrap();
    assert_eq!(z.order(), 2);
    let q = central_quotient(&g, &z).unwrap();
    let s4 = catalog_group("S4").unwrap();
    assert!(are_isomorphic(&q.target, &s4).unwrap());
}

#[test]
fn central_quotients() {
    let q8 = catalog_group("Q16").unwrap();
    let z = center(&q8).unwrap();
    let d = central_quotient(&q8, &z).unwrap();
    assert_eq!(iso_type_2group(&d.target).unwrap(), IsoType2::Dihedral(8));
    let sl = catalog_group("SL2_3").unwrap();
    let z = center(&sl).unwrap();
    let a = central_quotient(&sl, &z).unwrap();
    assert!(are_isomorphic(&a.target, &catalog_group("A4").unwrap()).unwrap());
    // projection is a homomorphism with the right kernel
    for x in sl.elements() {
        for y in sl.elements().step_by(5) {
            assert_eq!(
                a.project(sl.mul(x, y)),
                a.target.mul(a.project(x), a.project(y))
            );
        }
        assert_eq!(a.project(x) == 0, z.contains(x));
    }
}

#[test]
fn odd_core_of_products() {
    let g = catalog_group("Q8*C3").unwrap();
    let o = odd_core(&g).unwrap();
    assert_eq!(o.order(), 3);
    assert!(o.is_normal());
    assert_eq!(
        odd_core(&catalog_group("SL2_5").unwrap()).unwrap().order(),
        1
    );
    assert_eq!(odd_core(&catalog_group("S4").unwrap()).unwrap().order(), 1);
}

#[test]
fn extension_references_are_distinct() {
    let n = 16;
    let m = n / 4;
    let mut seen = Vec::new();
    for (a, b, c) in [
        (0, 0, 1),
        (0, 1, 1),
        (0, 0, 0),
        (0, 1, 0),
        (1, 1, 0),
        (1, 1, 1),
    ] {
        let g = Arc::new(extension_of_dihedral(m, a, b, c).unwrap());
        let t = iso_type_2group(&g).unwrap();
        assert!(!seen.contains(&t), "{t}");
        seen.push(t);
    }
    let names: Vec<String> = seen.iter().map(|t| t.to_string()).collect();
    assert_eq!(
        names,
        ["D16", "SD16", "C2xD8", "(C4xC2):C2", "C4:C4", "Q16"]
    );
}

#[test]
fn diagonal_sylow() {
    let g = catalog_group("SL2_3").unwrap();
    let h = catalog_group("SL2_11").unwrap();
    let prod = catalog_group("SL2_3*SL2_11").unwrap();
    let mut rng = SeededRng::default();
    let p = sylow2(&g, &mut rng).unwrap();
    let ph = sylow2(&h, &mut rng).unwrap();
    let id = Identification::search(&p, &ph).unwrap();
    let d = diagonal_subgroup(&prod, &id).unwrap();
    assert_eq!(d.order(), 8);
    for &x in d.members() {
        let (a, b) = prod.split(x).unwrap();
        assert_eq!(id.apply(a), b);
    }
    // phi is a homomorphism
    for &u in p.members() {
        for &v in p.members() {
            assert_eq!(id.apply(g.mul(u, v)), h.mul(id.apply(u), id.apply(v)));
        }
    }
}

#[test]
fn maximal_subgroups_of_dihedral() {
    let d = catalog_group("D16").unwrap();
    let w = Subgroup::whole(&d);
    let max = maximal_subgroups_2group(&w).unwrap();
    assert_eq!(max.len(), 3);
    assert!(max.iter().all(|m| m.order() == 8 && m.is_normal()));
    assert_eq!(frattini_2group(&d).order(), 4);
}
