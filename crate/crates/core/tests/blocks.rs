use std::sync::Arc;

use blockmorita_core::blocks::*;
use blockmorita_core::ffield::{Fe, Field};
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

/// Oracle: the product in kG itself, element by element.
fn group_algebra_square(e: &CentralIdempotent) -> Vec<Fe> {
    let g = &e.group;
    let f = &e.field;
    let c: Vec<Fe> = g.elements().map(|x| e.coefficient_of(x)).collect();
    let mut out = vec![0; g.order()];
    for x in g.elements() {
        if c[x as usize] == 0 {
            continue;
        }
        for y in g.elements() {
            if c[y as usize] != 0 {
                out[g.mul(x, y) as usize] ^= f.mul(c[x as usize], c[y as usize]);
            }
        }
    }
    out
}

#[test]
fn class_counts() {
    for (name, r) in [
        ("C4", 4),
        ("V4", 4),
        ("S3", 3),
        ("A5", 5),
        ("SL2_3", 7),
        ("S4", 5),
    ] {
        assert_eq!(
            center_basis(&group(name), &gf(1)).unwrap().dim(),
            r,
            "{name}"
        );
    }
}

#[test]
fn two_groups_have_one_block() {
    let mut rng = SeededRng::default();
    for name in ["C2", "D8", "Q8", "Q16", "C2*C2*C2"] {
        let g = group(name);
        let b = block_idempotents(&g, &gf(1), &mut rng).unwrap();
        assert_eq!(b.len(), 1, "{name}");
        assert_eq!(b[0].support(), vec![0], "{name}");
    }
}

#[test]
fn cyclic_three_over_gf4_has_three_blocks() {
    let g = group("C3");
    let f = gf(2);
    let mut rng = SeededRng::default();
    let blocks = block_idempotents(&g, &f, &mut rng).unwrap();
    assert_eq!(blocks.len(), 3);
    // explicit idempotents sum_x chi(x)^-1 x for the three characters of C3
    let t = g.gens()[0];
    let w = f.generator();
    assert_eq!(f.pow(w, 3), 1);
    let mut expected: Vec<Vec<Fe>> = (0..3u64)
        .map(|a| {
            let mut v = vec![0; 3];
            for i in 0..3u64 {
                v[g.pow(t, i) as usize] = f.pow(f.inv(w), a * i);
            }
            v
        })
        .collect();
    let mut got: Vec<Vec<Fe>> = blocks
        .iter()
        .map(|e| g.elements().map(|x| e.coefficient_of(x)).collect())
        .collect();
    expected.sort();
    got.sort();
    assert_eq!(got, expected);
    // over GF(2) the two nontrivial blocks are not yet separated
    assert!(block_idempotents(&g, &gf(1), &mut rng).is_err());
    assert_eq!(stable_field_degree(&g, 1).unwrap(), 2);
}

#[test]
fn idempotents_are_idempotent_in_the_group_algebra() {
    let mut rng = SeededRng::default();
    for (name, e) in [("S4", 1), ("A5", 2), ("SL2_5", 2), ("S3", 1), ("C6", 2)] {
        let g = group(name);
        let blocks = block_idempotents(&g, &gf(e), &mut rng).unwrap();
        let mut sum = vec![0; g.order()];
        for b in &blocks {
            let c: Vec<Fe> = g.elements().map(|x| b.coefficient_of(x)).collect();
            assert_eq!(group_algebra_square(b), c, "{name}");
            for (s, x) in sum.iter_mut().zip(&c) {
                *s ^= x;
            }
        }
        assert_eq!(sum[0], 1);
        assert!(sum[1..].iter().all(|&x| x == 0), "{name}");
        assert!(blocks[0].is_principal());
        assert!(blocks[1..].iter().all(|b| !b.is_principal()));
    }
}

#[test]
fn sl2_5_has_two_blocks_matching_simple_modules() {
    let g = group("SL2_5");
    let f = gf(2);
    let mut rng = SeededRng::default();
    let blocks = block_idempotents(&g, &f, &mut rng).unwrap();
    assert_eq!(blocks.len(), 2);
    // every simple module is acted on as identity by exactly one block
    let reg = GModule::regular(&g, &f).unwrap();
    let simples = chop(&reg, &mut rng).unwrap();
    let mut per_block = vec![0usize; 2];
    for (s, _) in simples.simples() {
        let hits: Vec<usize> = (0..2)
            .filter(|&i| block_component(s, &blocks[i]).unwrap().0.dim() == s.dim())
            .collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(block_component(s, &blocks[1 - hits[0]]).unwrap().0.dim(), 0);
        per_block[hits[0]] += 1;
    }
    assert_eq!(per_block, vec![3, 1]);
    let dims: Vec<usize> = blocks
        .iter()
        .map(|e| regular_component(e).unwrap().0.dim())
        .collect();
    assert_eq!(dims.iter().sum::<usize>(), 120);
    assert_eq!(dims, vec![88, 32]);
}

#[test]
fn sl2_3_has_a_single_block() {
    let g = group("SL2_3");
    let mut rng = SeededRng::default();
    for e in [1, 2] {
        assert_eq!(block_idempotents(&g, &gf(e), &mut rng).unwrap().len(), 1);
        assert_eq!(
            principal_idempotent(&g, &gf(e), &mut rng)
                .unwrap()
                .support(),
            vec![0]
        );
    }
}

#[test]
fn a5_principal_block() {
    let g = group("A5");
    let f = gf(2);
    let mut rng = SeededRng::default();
    let e = principal_idempotent(&g, &f, &mut rng).unwrap();
    // PIMs of heads 1, 2, 2' have dims 12, 8, 8; the 4 is projective
    assert_eq!(regular_component(&e).unwrap().0.dim(), 12 + 2 * 8 + 2 * 8);
    let c = cartan_matrix(&e, &mut rng).unwrap();
    let mut dims = c.simple_dims.clone();
    dims.sort();
    assert_eq!(dims, vec![1, 2, 2]);
    let triv = c.simple_dims.iter().position(|&d| d == 1).unwrap();
    let pk: usize = (0..3).map(|i| c.entries[i][triv] * c.simple_dims[i]).sum();
    assert_eq!(pk, 12);
    assert_eq!(c.determinant(), 4);
}

#[test]
fn a4_cartan_matrix() {
    let g = group("A4");
    let f = gf(2);
    let e = principal_idempotent(&g, &f, &mut SeededRng::new(1)).unwrap();
    let c = cartan_matrix(&e, &mut SeededRng::new(1)).unwrap();
    assert_eq!(c.size(), 3);
    assert_eq!(c.row_sums(), vec![4, 4, 4]);
    let other = cartan_matrix(&e, &mut SeededRng::new(99)).unwrap();
    assert_eq!(c.determinant(), other.determinant());
    assert!(c.permutation_congruent(&other));
    assert_eq!(
        c.entries
            .iter()
            .enumerate()
            .map(|(i, r)| r[i])
            .collect::<Vec<_>>(),
        vec![2, 2, 2]
    );

    let a5 = group("A5");
    let e5 = principal_idempotent(&a5, &f, &mut SeededRng::new(1)).unwrap();
    let c5 = cartan_matrix(&e5, &mut SeededRng::new(1)).unwrap();
    assert!(!c.permutation_congruent(&c5));
}

#[test]
fn two_group_cartan_matrix_is_the_order() {
    let g = group("D8");
    let e = principal_idempotent(&g, &gf(1), &mut SeededRng::default()).unwrap();
    let c = cartan_matrix(&e, &mut SeededRng::default()).unwrap();
    assert_eq!(c.entries, vec![vec![8]]);
}

#[test]
fn principal_idempotent_is_galois_stable() {
    let mut rng = SeededRng::default();
    for name in ["A5", "SL2_5", "S4", "PSL2_7"] {
        let g = group(name);
        let small = principal_idempotent(&g, &gf(2), &mut rng).unwrap();
        let big = principal_idempotent(&g, &gf(4), &mut rng).unwrap();
        assert_eq!(small.support(), big.support(), "{name}");
        assert!(small.is_rational() && big.is_rational(), "{name}");
    }
}

#[test]
fn block_component_of_trivial_module() {
    let g = group("A5");
    let f = gf(2);
    let mut rng = SeededRng::default();
    let blocks = block_idempotents(&g, &f, &mut rng).unwrap();
    let t = GModule::trivial(&g, &f);
    assert_eq!(block_component(&t, &blocks[0]).unwrap().0.dim(), 1);
    assert_eq!(block_component(&t, &blocks[1]).unwrap().0.dim(), 0);
}

#[test]
fn block_count_is_stable_under_doubling() {
    for name in ["A5", "C3", "C5", "S3", "PSL2_7"] {
        let g = group(name);
        let e = stable_field_degree(&g, 1).unwrap();
        let a = center_basis(&g, &gf(e)).unwrap().block_count();
        let b = center_basis(&g, &gf(2 * e)).unwrap().block_count();
        assert_eq!(a, b, "{name}");
        if e > 1 {
            assert!(center_basis(&g, &gf(1)).unwrap().block_count() <= a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn center_is_commutative(gi in 0usize..5) {
        let g = group(["S3", "A4", "D8", "SL2_3", "A5"][gi]);
        let z = center_basis(&g, &gf(1)).unwrap();
        let r = z.dim();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    prop_assert_eq!(z.structure_constant(i, j, k), z.structure_constant(j, i, k));
                }
            }
        }
    }

    #[test]
    fn block_components_partition_a_module(seed in 0u64..500, gi in 0usize..3) {
        let (name, e) = [("A5", 2), ("SL2_5", 2), ("S3", 1)][gi];
        let g = group(name);
        let f = gf(e);
        let mut rng = SeededRng::new(seed);
        let blocks = block_idempotents(&g, &f, &mut rng).unwrap();
        let h = Subgroup::generated(&g, &[g.elements().find(|&x| g.element_order(x) == 3).unwrap()]);
        let v = GModule::permutation_module(&h, &f).unwrap();
        let total: usize = blocks.iter().map(|b| block_component(&v, b).unwrap().0.dim()).sum();
        prop_assert_eq!(total, v.dim());
    }
}
