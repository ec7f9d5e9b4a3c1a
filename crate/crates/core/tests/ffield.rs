//! Randomized oracles for GF(2^e) arithmetic and dense matrices. The
//! oracle arithmetic is carry-less multiplication reduced by the field's
//! modulus, and Gaussian elimination on plain vectors.

use std::sync::Arc;

use blockmorita_core::ffield::{read_ffmx, write_ffmx, Fe, Field, FieldMatrix};
use proptest::prelude::*;

fn clmul_mod(a: u32, b: u32, modulus: u32, e: u32) -> u32 {
    let mut acc: u64 = 0;
    for i in 0..e {
        if b >> i & 1 == 1 {
            acc ^= (a as u64) << i;
        }
    }
    for bit in (e..2 * e).rev() {
        if acc >> bit & 1 == 1 {
            acc ^= (modulus as u64) << (bit - e);
        }
    }
    acc as u32
}

fn oracle_inv(a: u32, f: &Field) -> u32 {
    // a^(2^e - 2) by repeated oracle multiplication
    let (m, e) = (f.modulus(), f.degree());
    let mut r = 1;
    for _ in 0..(1u64 << e) - 2 {
        r = clmul_mod(r, a, m, e);
    }
    r
}

/// Rank by elimination on `Vec<Vec<u32>>` with oracle arithmetic.
fn oracle_rank(rows: &[Vec<u32>], f: &Field) -> usize {
    let (m, e) = (f.modulus(), f.degree());
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = oracle_inv(a[rank][c], f);
        let pivot: Vec<u32> = a[rank].iter().map(|&x| clmul_mod(x, inv, m, e)).collect();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= clmul_mod(k, y, m, e);
                }
            }
        }
        a[rank] = pivot;
        rank += 1;
    }
    rank
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
    (1u32..=16, 1..=max_dim, 1..=max_dim).prop_flat_map(|(e, r, c)| {
        let cell = 0u32..(1u32 << e);
        (
            Just(e),
            prop::collection::vec(prop::collection::vec(cell, c), r),
        )
    })
}

fn to_matrix(f: &Arc<Field>, rows: &[Vec<u32>]) -> FieldMatrix {
    FieldMatrix::from_rows(
        f,
        &rows
            .iter()
            .map(|r| r.iter().map(|&x| x as Fe).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_matches_carryless_oracle(e in 1u32..=16, a in any::<u32>(), b in any::<u32>()) {
        let f = Field::gf(e).unwrap();
        let mask = (1u32 << e) - 1;
        let (a, b) = (a & mask, b & mask);
        prop_assert_eq!(f.mul(a as Fe, b as Fe) as u32, clmul_mod(a, b, f.modulus(), e));
    }

    #[test]
    fn inverse_and_division(e in 1u32..=16, a in any::<u32>(), b in any::<u32>()) {
        let f = Field::gf(e).unwrap();
        let mask = (1u32 << e) - 1;
        let a = (a & mask).max(1) as Fe;
        let b = (b & mask) as Fe;
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        prop_assert_eq!(f.mul(f.div(b, a), a), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matrix_product_matches_naive((e, a) in matrix_strategy(9), seed in any::<u64>()) {
        let f = Field::gf(e).unwrap();
        let am = to_matrix(&f, &a);
        let mut rng = blockmorita_core::rng::SeededRng::new(seed);
        let bm = FieldMatrix::random(&f, am.cols(), 1 + (seed % 7) as usize, &mut rng);
        let p = am.mul(&bm);
        for i in 0..am.rows() {
            for j in 0..bm.cols() {
                let mut acc = 0u32;
                for k in 0..am.cols() {
                    acc ^= clmul_mod(am.get(i, k) as u32, bm.get(k, j) as u32, f.modulus(), e);
                }
                prop_assert_eq!(p.get(i, j) as u32, acc);
            }
        }
    }

    #[test]
    fn rank_matches_naive_elimination((e, a) in matrix_strategy(8)) {
        let f = Field::gf(e).unwrap();
        prop_assert_eq!(to_matrix(&f, &a).rank(), oracle_rank(&a, &f));
    }

    #[test]
    fn nullspaces_have_the_right_size((e, a) in matrix_strategy(8)) {
        let f = Field::gf(e).unwrap();
        let m = to_matrix(&f, &a);
        let r = m.rank();
        let n = m.nullspace_basis();
        prop_assert_eq!(n.rows(), m.cols() - r);
        prop_assert!(m.mul(&n.transpose()).is_zero());
        let l = m.left_nullspace_basis();
        prop_assert_eq!(l.rows(), m.rows() - r);
        prop_assert!(l.mul(&m).is_zero());
    }

    #[test]
    fn inverse_of_invertible((e, a) in matrix_strategy(8)) {
        let f = Field::gf(e).unwrap();
        let n = a.len().min(a[0].len());
        let sq: Vec<Vec<u32>> = a.iter().take(n).map(|r| r[..n].to_vec()).collect();
        let m = to_matrix(&f, &sq);
        match m.inverse() {
            Some(inv) => {
                prop_assert!(m.mul(&inv).is_identity());
                prop_assert!(inv.mul(&m).is_identity());
            }
            None => prop_assert!(oracle_rank(&sq, &f) < n),
        }
    }

    #[test]
    fn solve_reproduces_consistent_right_sides((e, a) in matrix_strategy(8), seed in any::<u64>()) {
        let f = Field::gf(e).unwrap();
        let m = to_matrix(&f, &a);
        let mut rng = blockmorita_core::rng::SeededRng::new(seed);
        let x = FieldMatrix::random(&f, m.cols(), 2, &mut rng);
        let b = m.mul(&x);
        let y = m.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(m.mul(&y), b);
    }

    #[test]
    fn ffmx_round_trip((e, a) in matrix_strategy(70)) {
        let f = Field::gf(e).unwrap();
        let m = to_matrix(&f, &a);
        let mut buf = Vec::new();
        write_ffmx(&m, &mut buf).unwrap();
        let back = read_ffmx(buf.as_slice()).unwrap();
        prop_assert_eq!(back, m);
    }
}

#[test]
fn ffmx_gf2_layout_is_word_packed() {
    let f = Field::gf(1).unwrap();
    // 2 x 70: bit i of word w is column 64 w + i
    let m = FieldMatrix::from_fn(&f, 2, 70, |r, c| ((r + c) % 3 == 0) as Fe);
    let mut buf = Vec::new();
    write_ffmx(&m, &mut buf).unwrap();
    assert_eq!(&buf[..4], b"FFMX");
    assert_eq!(u16::from_le_bytes([buf[4], buf[5]]), 1);
    assert_eq!(u16::from_le_bytes([buf[6], buf[7]]), 1);
    assert_eq!(u64::from_le_bytes(buf[8..16].try_into().unwrap()), 2);
    assert_eq!(u64::from_le_bytes(buf[16..24].try_into().unwrap()), 70);
    let payload = &buf[24..];
    assert_eq!(payload.len(), 2 * 2 * 8);
    for r in 0..2 {
        for c in 0..70 {
            let w = u64::from_le_bytes(payload[(r * 2 + c / 64) * 8..][..8].try_into().unwrap());
            assert_eq!((w >> (c % 64) & 1) as Fe, m.get(r, c));
        }
    }
}

#[test]
fn ffmx_wide_fields_use_two_bytes() {
    let f = Field::gf(12).unwrap();
    let m = FieldMatrix::from_fn(&f, 1, 3, |_, c| (0x0abc + c) as Fe);
    let mut buf = Vec::new();
    write_ffmx(&m, &mut buf).unwrap();
    assert_eq!(buf.len(), 24 + 6);
    assert_eq!(u16::from_le_bytes([buf[24], buf[25]]), 0x0abc);
}
