//! Matrix-group models over odd fields, converted into permutation groups
//! through their action on an orbit of row vectors (or projective points).

use std::collections::HashMap;

use super::group::Group;
use super::oddfield::OddField;
use crate::error::{check_cap, Error, Result};

type Mat = Vec<Vec<u16>>;

fn vec_mat(f: &OddField, v: &[u16], m: &Mat) -> Vec<u16> {
    let n = m[0].len();
    let mut out = vec![0u16; n];
    for (i, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for j in 0..n {
            out[j] = f.add(out[j], f.mul(a, m[i][j]));
        }
    }
    out
}

fn mat_mul(f: &OddField, a: &Mat, b: &Mat) -> Mat {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

/// Scales so that the first nonzero coordinate is 1.
fn projective_normal(f: &OddField, v: &[u16]) -> Vec<u16> {
    let lead = *v.iter().find(|&&x| x != 0).expect("nonzero vector");
    let inv = f.inv(lead);
    v.iter().map(|&x| f.mul(x, inv)).collect()
}

const ORBIT_LIMIT: usize = 20_000;

/// Orbit of `start` under the generators, optionally on projective points,
/// and each generator as a permutation of the orbit.
fn orbit_action(
    f: &OddField,
    gens: &[Mat],
    start: Vec<u16>,
    projective: bool,
) -> Result<(usize, Vec<Vec<u16>>)> {
    let norm = |v: Vec<u16>| {
        if projective {
            projective_normal(f, &v)
        } else {
            v
        }
    };
    let start = norm(start);
    let mut pts = vec![start.clone()];
    let mut idx: HashMap<Vec<u16>, usize> = HashMap::from([(start, 0)]);
    let mut images: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut i = 0;
    while i < pts.len() {
        for (s, g) in gens.iter().enumerate() {
            let w = norm(vec_mat(f, &pts[i], g));
            let j = match idx.get(&w) {
                Some(&j) => j,
                None => {
                    check_cap("vector orbit", pts.len() + 1, ORBIT_LIMIT)?;
                    idx.insert(w.clone(), pts.len());
                    pts.push(w);
                    pts.len() - 1
                }
            };
            images[s].push(j);
        }
        i += 1;
    }
    let perms = images
        .into_iter()
        .map(|im| im.into_iter().map(|j| j as u16).collect())
        .collect();
    Ok((pts.len(), perms))
}

/// Generators of SL2(q) with entries in the subfield generated by `omega`
/// (a generator of GF(q)*), written in the ambient field `f`.
fn sl2_gens(f: &OddField, omega: u16) -> Vec<Mat> {
    let one = 1;
    let zero = 0;
    let minus = f.neg(1);
    vec![
        vec![vec![one, one], vec![zero, one]],
        vec![vec![one, omega], vec![zero, one]],
        vec![vec![zero, minus], vec![one, zero]],
        vec![vec![omega, zero], vec![zero, f.inv(omega)]],
    ]
}

fn check_q(q: usize) -> Result<OddField> {
    if !(3..=13).contains(&q) || q.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "q = {q} must be an odd prime power at most 13"
        )));
    }
    OddField::new(q)
}

pub fn sl2_order(q: usize) -> usize {
    q * (q * q - 1)
}

/// SL2(q) on the nonzero vectors of GF(q)^2.
pub fn sl2(q: usize) -> Result<Group> {
    let f = check_q(q)?;
    let gens = sl2_gens(&f, f.primitive());
    let (deg, perms) = orbit_action(&f, &gens, vec![1, 0], false)?;
    finish(
        Group::from_perm_gens(format!("SL2_{q}"), deg, &perms)?,
        sl2_order(q),
    )
}

/// PSL2(q) on the projective line.
pub fn psl2(q: usize) -> Result<Group> {
    let f = check_q(q)?;
    let gens = sl2_gens(&f, f.primitive());
    let (deg, perms) = orbit_action(&f, &gens, vec![1, 0], true)?;
    finish(
        Group::from_perm_gens(format!("PSL2_{q}"), deg, &perms)?,
        sl2_order(q) / 2,
    )
}

/// PGL2(q) on the projective line.
pub fn pgl2(q: usize) -> Result<Group> {
    let f = check_q(q)?;
    let mut gens = sl2_gens(&f, f.primitive());
    gens.push(vec![vec![f.primitive(), 0], vec![0, 1]]);
    let (deg, perms) = orbit_action(&f, &gens, vec![1, 0], true)?;
    finish(
        Group::from_perm_gens(format!("PGL2_{q}"), deg, &perms)?,
        sl2_order(q),
    )
}

/// `<SL2(q), diag(mu, mu^-1)>` inside SL2(q^2), with `mu^2` a fixed
/// non-square of GF(q); acts on the orbit of `e1` in GF(q^2)^2.
pub fn two_pgl2(q: usize) -> Result<Group> {
    check_q(q)?;
    let f = OddField::new(q * q)?;
    // generator of GF(q)* inside GF(q^2)*
    let omega = f.power_of_primitive(q + 1);
    let mu = f.power_of_primitive(q.div_ceil(2));
    debug_assert_eq!(f.mul(mu, mu), omega);
    let mut gens = sl2_gens(&f, omega);
    gens.push(vec![vec![mu, 0], vec![0, f.inv(mu)]]);
    let (deg, perms) = orbit_action(&f, &gens, vec![1, 0], false)?;
    finish(
        Group::from_perm_gens(format!("2PGL2_{q}"), deg, &perms)?,
        2 * sl2_order(q),
    )
}

fn finish(g: Group, expected: usize) -> Result<Group> {
    if g.order() != expected {
        return Err(Error::Structural(format!(
            "{} has order {}, expected {expected}",
            g.name(),
            g.order()
        )));
    }
    Ok(g)
}

fn kron(f: &OddField, a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![0u16; n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = f.mul(a[i][j], b[k][l]);
                }
            }
        }
    }
    out
}

fn kron3(f: &OddField, a: &Mat, b: &Mat, c: &Mat) -> Mat {
    kron(f, &kron(f, a, b), c)
}

/// The Clifford elements `E1..E7` over GF(7): pairwise anticommuting, each
/// squaring to -1, as tensor products of 2x2 matrices.
pub fn clifford_generators() -> Result<Vec<Mat>> {
    let f = OddField::new(7)?;
    let m = |r: [[i64; 2]; 2]| -> Mat {
        r.iter()
            .map(|row| row.iter().map(|&x| f.from_int(x)).collect())
            .collect()
    };
    let id = m([[1, 0], [0, 1]]);
    let qi = m([[0, -1], [1, 0]]);
    let qj = m([[3, 2], [2, -3]]);
    let qk = mat_mul(&f, &qi, &qj);
    let s1 = m([[0, 1], [1, 0]]);
    let s3 = m([[1, 0], [0, -1]]);
    let eps = mat_mul(&f, &s1, &s3);
    Ok(vec![
        kron3(&f, &qi, &id, &id),
        kron3(&f, &qj, &id, &id),
        kron3(&f, &qk, &s1, &id),
        kron3(&f, &qk, &s3, &id),
        kron3(&f, &qk, &eps, &qi),
        kron3(&f, &qk, &eps, &qj),
        kron3(&f, &qk, &eps, &qk),
    ])
}

pub fn clifford_relations_hold(e: &[Mat]) -> Result<bool> {
    let f = OddField::new(7)?;
    let n = e[0].len();
    let minus_id: Mat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.neg(1) } else { 0 }).collect())
        .collect();
    for (a, ea) in e.iter().enumerate() {
        if mat_mul(&f, ea, ea) != minus_id {
            return Ok(false);
        }
        for eb in &e[a + 1..] {
            let ab = mat_mul(&f, ea, eb);
            let ba = mat_mul(&f, eb, ea);
            let neg_ba: Mat = ba
                .iter()
                .map(|r| r.iter().map(|&x| f.neg(x)).collect())
                .collect();
            if ab != neg_ba {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// 2.A7 from `s_i = c (E_i - E_(i+1))` with `c^2 = 1/2`; generated by the
/// products `s_i s_(i+1)`.
pub fn double_cover_a7() -> Result<Group> {
    let f = OddField::new(7)?;
    let e = clifford_generators()?;
    if !clifford_relations_hold(&e)? {
        return Err(Error::Structural("Clifford relations fail".into()));
    }
    let c = f.from_int(2);
    let s: Vec<Mat> = (0..6)
        .map(|i| {
            e[i].iter()
                .zip(&e[i + 1])
                .map(|(r1, r2)| {
                    r1.iter()
                        .zip(r2)
                        .map(|(&x, &y)| f.mul(c, f.sub(x, y)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let gens: Vec<Mat> = (0..5).map(|i| mat_mul(&f, &s[i], &s[i + 1])).collect();
    let mut start = vec![0u16; 8];
    start[0] = 1;
    let (deg, perms) = orbit_action(&f, &gens, start, false)?;
    finish(Group::from_perm_gens("2A7", deg, &perms)?, 5040)
}
