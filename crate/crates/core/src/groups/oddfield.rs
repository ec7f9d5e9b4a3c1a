//! Small fields GF(p^k) of odd characteristic, used only to build the
//! matrix-group models. Elements are encoded as base-p digit strings of the
//! polynomial residue; the modulus is the first primitive polynomial found
//! in lexicographic order, so the encoding is reproducible.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OddField {
    p: usize,
    k: usize,
    q: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Splits a prime power; `None` otherwise.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut m = q;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, k))
}

impl OddField {
    pub fn new(q: usize) -> Result<OddField> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        if p == 2 || q > 4096 {
            return Err(Error::InvalidParameter(format!(
                "odd field of order {q} unsupported"
            )));
        }
        let digits = |mut a: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &x| acc * p + x);
        let mut add = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        for a in 0..q {
            let da = digits(a);
            neg[a] = encode(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>()) as u16;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s) as u16;
            }
        }
        // modulus x^k + sum c_i x^i, c encoded as a field-sized integer
        for c in 0..q {
            let low = digits(c);
            if k > 1 && low[0] == 0 {
                continue;
            }
            let times_x = |a: usize| -> usize {
                let d = digits(a);
                let top = d[k - 1];
                let mut out = vec![0; k];
                for i in (1..k).rev() {
                    out[i] = d[i - 1];
                }
                for i in 0..k {
                    out[i] = (out[i] + p * p - top * low[i] % p) % p;
                }
                encode(&out)
            };
            let x = if k == 1 { (p - low[0]) % p } else { p };
            if x == 0 {
                continue;
            }
            let mut exp = vec![0u16; q - 1];
            let mut log = vec![0u16; q];
            let mut cur = 1usize;
            let mut ok = true;
            for i in 0..q - 1 {
                if i > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                exp[i] = cur as u16;
                log[cur] = i as u16;
                cur = if k == 1 { cur * x % p } else { times_x(cur) };
            }
            if ok && cur == 1 {
                return Ok(OddField {
                    p,
                    k,
                    q,
                    exp,
                    log,
                    add,
                    neg,
                });
            }
        }
        Err(Error::Structural(format!(
            "no primitive polynomial found for GF({q})"
        )))
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = (self.log[a as usize] as usize + self.log[b as usize] as usize) % (self.q - 1);
        self.exp[l]
    }

    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero");
        self.exp[(self.q - 1 - self.log[a as usize] as usize) % (self.q - 1)]
    }

    /// The fixed primitive element.
    pub fn primitive(&self) -> u16 {
        self.exp[1 % (self.q - 1)]
    }

    /// `g^i` for the fixed primitive element `g`.
    pub fn power_of_primitive(&self, i: usize) -> u16 {
        self.exp[i % (self.q - 1)]
    }

    pub fn from_int(&self, n: i64) -> u16 {
        // the prime subfield is encoded by 0..p
        n.rem_euclid(self.p as i64) as u16
    }

    pub fn is_square(&self, a: u16) -> bool {
        a == 0 || self.log[a as usize].is_multiple_of(2)
    }
}
