use std::collections::BTreeMap;
use std::sync::Arc;

use blockmorita_core::cohom2::*;
use blockmorita_core::ffield::{Field, FieldMatrix};
use blockmorita_core::groups::*;
use blockmorita_core::rng::SeededRng;
use proptest::prelude::*;

/// Independent oracle: dim Z^2 from the full |G|^3 system over all |G|^2
/// table entries, dim B^2 from the span of all coboundaries.
fn brute_force_rank(g: &Arc<Group>) -> usize {
    let n = g.order();
    let f = Field::gf(1).unwrap();
    let idx = |a: Elem, b: Elem| a as usize * n + b as usize;
    let mut rows = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                let mut r = vec![0u8; n * n];
                for i in [
                    idx(a, b),
                    idx(g.mul(a, b), c),
                    idx(b, c),
                    idx(a, g.mul(b, c)),
                ] {
                    r[i] ^= 1;
                }
                rows.push(r);
            }
        }
        for i in [idx(0, a), idx(a, 0)] {
            let mut r = vec![0u8; n * n];
            r[i] = 1;
            rows.push(r);
        }
    }
    let m = FieldMatrix::from_fn(&f, rows.len(), n * n, |i, j| rows[i][j] as _);
    let z = n * n - m.rank();
    let b = FieldMatrix::from_fn(&f, n - 1, n * n, |x, j| {
        let x = x as Elem + 1;
        let (a, c) = ((j / n) as Elem, (j % n) as Elem);
        ((a == x) ^ (c == x) ^ (g.mul(a, c) == x)) as _
    });
    z - b.rank()
}

fn group(name: &str) -> Arc<Group> {
    catalog_group(name).unwrap()
}

#[test]
fn ranks_match_brute_force() {
    for name in ["C2", "C4", "V4", "S3", "D8", "Q8", "C2*C2*C2"] {
        let g = group(name);
        assert_eq!(h2_basis(&g).unwrap().rank, brute_force_rank(&g), "{name}");
    }
}

#[test]
fn dihedral_ranks_are_three() {
    for name in ["V4", "D4", "D8", "D16", "D32"] {
        assert_eq!(h2_basis(&group(name)).unwrap().rank, 3, "{name}");
    }
    assert_eq!(h2_basis(&group("C2")).unwrap().rank, 1);
}

#[test]
fn ranks_by_universal_coefficients() {
    // rank = rank of (G^ab)_2 plus rank of the 2-part of the Schur multiplier
    for (name, r) in [
        ("A4", 1),
        ("S4", 2),
        ("SL2_3", 0),
        ("Q8", 2),
        ("A5", 1),
        ("2PGL2_3", 1),
        ("Q16", 2),
    ] {
        assert_eq!(h2_basis(&group(name)).unwrap().rank, r, "{name}");
    }
}

#[test]
fn basis_representatives_are_cocycles() {
    let mut rng = SeededRng::default();
    for name in ["V4", "D8", "D16", "S4", "A4", "Q8"] {
        let h = h2_basis(&group(name)).unwrap();
        for c in &h.basis {
            assert!(c.is_valid(&mut rng), "{name}");
        }
        for (i, c) in h.basis.iter().enumerate() {
            let mut e = vec![0; h.rank];
            e[i] = 1;
            assert_eq!(h.class_of(c).unwrap(), e);
        }
    }
}

#[test]
fn non_cocycles_are_rejected() {
    let g = group("V4");
    let h = h2_basis(&g).unwrap();
    let mut c = h.basis[0].clone();
    c.set(1, 2, !c.get(1, 2));
    assert!(h.class_of(&c).is_err());
}

fn multiset(name: &str) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for c in classify_central_extensions(&group(name)).unwrap() {
        *m.entry(c.iso_type).or_insert(0) += 1;
    }
    m
}

fn expect(pairs: &[(&str, usize)]) -> BTreeMap<String, usize> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[test]
fn classification_v4() {
    assert_eq!(
        multiset("V4"),
        expect(&[("C2^3", 1), ("D8", 3), ("C2xC4", 3), ("Q8", 1)])
    );
}

#[test]
fn classification_d8() {
    assert_eq!(
        multiset("D8"),
        expect(&[
            ("C2xD8", 1),
            ("D16", 1),
            ("(C4xC2):C2", 2),
            ("SD16", 2),
            ("C4:C4", 1),
            ("Q16", 1)
        ])
    );
}

#[test]
fn classification_d16() {
    assert_eq!(
        multiset("D16"),
        expect(&[
            ("C2xD16", 1),
            ("D32", 1),
            ("(C8xC2):C2", 2),
            ("SD32", 2),
            ("C8:C4", 1),
            ("Q32", 1)
        ])
    );
}

#[test]
fn classification_c2() {
    assert_eq!(multiset("C2"), expect(&[("C2^2", 1), ("C4", 1)]));
}

#[test]
fn presentation_cocycles() {
    let mut rng = SeededRng::default();
    for nm1 in 2..=4 {
        let base = dihedral_base(nm1).unwrap();
        let h = h2_basis(&base).unwrap();
        let mut classes = Vec::new();
        for p in PresentationCocycleParams::all() {
            let c = presentation_cocycle(nm1, p).unwrap();
            assert!(c.is_valid(&mut rng));
            classes.push(h.class_of(&c).unwrap());
        }
        classes.sort();
        classes.dedup();
        assert_eq!(classes.len(), 8, "n-1 = {nm1}");
        let n = 1usize << (nm1 + 1);
        let q =
            presentation_cocycle(nm1, PresentationCocycleParams::new(1, 1, 1).unwrap()).unwrap();
        let (mid, _) = extension_from_cocycle(&q).unwrap();
        assert_eq!(iso_type_2group(&mid).unwrap(), IsoType2::Quaternion(n));
        let d =
            presentation_cocycle(nm1, PresentationCocycleParams::new(0, 0, 1).unwrap()).unwrap();
        let (mid, _) = extension_from_cocycle(&d).unwrap();
        let want = if n == 8 {
            IsoType2::Dihedral(8)
        } else {
            IsoType2::Dihedral(n)
        };
        assert_eq!(iso_type_2group(&mid).unwrap(), want);
        let z =
            presentation_cocycle(nm1, PresentationCocycleParams::new(0, 0, 0).unwrap()).unwrap();
        assert_eq!(h.class_of(&z).unwrap(), vec![0; 3]);
        assert_eq!(
            h.class_of(&unique_quaternion_class(nm1).unwrap()).unwrap(),
            h.class_of(&q).unwrap()
        );
    }
}

#[test]
fn trivial_cocycle_gives_direct_product() {
    let g = group("D8");
    let (mid, q) = extension_from_cocycle(&Cocycle::zero(&g)).unwrap();
    assert_eq!(mid.order(), 16);
    assert_eq!(iso_type_2group(&mid).unwrap(), IsoType2::C2xDihedral(16));
    assert_eq!(q.kernel.order(), 2);
    for x in mid.elements() {
        for y in mid.elements() {
            assert_eq!(q.project(mid.mul(x, y)), g.mul(q.project(x), q.project(y)));
        }
    }
}

#[test]
fn restriction_is_injective_on_battery() {
    let mut rng = SeededRng::default();
    for (gname, pname) in [
        ("S4", "D8"),
        ("A4", "V4"),
        ("SL2_3", "Q8"),
        ("A5", "V4"),
        ("2PGL2_3", "Q16"),
    ] {
        let g = group(gname);
        let p = sylow2(&g, &mut rng).unwrap();
        let (pg, _) = p.to_group("P").unwrap();
        assert!(are_isomorphic(&pg, &group(pname)).unwrap());
        let r = restriction_h2(&g, &p).unwrap();
        assert!(r.is_injective(), "{gname}");
    }
}

#[test]
fn restriction_to_whole_group_is_identity() {
    let g = group("D8");
    let r = restriction_h2(&g, &Subgroup::whole(&g)).unwrap();
    assert_eq!(r.matrix.rank(), 3);
    assert_eq!(r.target.rank, 3);
}

#[test]
fn size_cap() {
    let e = h2_basis(&group("S5")).unwrap_err();
    assert!(e.is_cap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cohomologous_cocycles_give_isomorphic_extensions(
        base in prop::sample::select(vec!["V4", "D8", "C4", "S3", "Q8"]),
        class in 0usize..8,
        beta_bits in any::<u64>(),
    ) {
        let g = group(base);
        let h = h2_basis(&g).unwrap();
        let coords: Vec<u8> = (0..h.rank).map(|i| (class >> i & 1) as u8).collect();
        let alpha = h.combination(&coords);
        let mut beta: Vec<bool> = (0..g.order()).map(|i| beta_bits >> (i % 64) & 1 == 1).collect();
        beta[0] = false;
        let shifted = alpha.add(&Cocycle::coboundary(&g, &beta).unwrap()).unwrap();
        prop_assert_eq!(h.class_of(&shifted).unwrap(), coords);
        let (m1, _) = extension_from_cocycle(&alpha).unwrap();
        let (m2, _) = extension_from_cocycle(&shifted).unwrap();
        prop_assert!(are_isomorphic(&m1, &m2).unwrap());
    }

    #[test]
    fn class_map_is_additive(base in prop::sample::select(vec!["V4", "D8", "S4", "Q8"]), a in 0usize..8, b in 0usize..8) {
        let g = group(base);
        let h = h2_basis(&g).unwrap();
        let ca: Vec<u8> = (0..h.rank).map(|i| (a >> i & 1) as u8).collect();
        let cb: Vec<u8> = (0..h.rank).map(|i| (b >> i & 1) as u8).collect();
        let sum = h.combination(&ca).add(&h.combination(&cb)).unwrap();
        let want: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(h.class_of(&sum).unwrap(), want);
    }

    #[test]
    fn restriction_is_linear(a in 0usize..4) {
        let g = group("S4");
        let p = sylow2(&g, &mut SeededRng::default()).unwrap();
        let r = restriction_h2(&g, &p).unwrap();
        let coords: Vec<u8> = (0..r.source.rank).map(|i| (a >> i & 1) as u8).collect();
        let alpha = r.source.combination(&coords);
        let got = r.target.class_of(&r.restrict(&alpha)).unwrap();
        let want: Vec<u8> = (0..r.target.rank)
            .map(|j| coords.iter().enumerate().fold(0, |acc, (i, &c)| acc ^ (c & r.matrix.get(i, j) as u8)))
            .collect();
        prop_assert_eq!(got, want);
    }
}
