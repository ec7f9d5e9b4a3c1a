use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// A field element of GF(2^e), stored as the bit-encoded polynomial in the
/// generator modulo the defining polynomial.
pub type Fe = u16;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Conway polynomials over GF(2) for degrees 1..=16, bit-encoded
/// (bit i is the coefficient of x^i).
const CONWAY: [u32; 17] = [
    0,
    0b11,                // x + 1
    0b111,               // x^2 + x + 1
    0b1011,              // x^3 + x + 1
    0b10011,             // x^4 + x + 1
    0b100101,            // x^5 + x^2 + 1
    0b1011011,           // x^6 + x^4 + x^3 + x + 1
    0b10000011,          // x^7 + x + 1
    0b100011101,         // x^8 + x^4 + x^3 + x^2 + 1
    0b1000010001,        // x^9 + x^4 + 1
    0b10001101111,       // x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
    0b100000000101,      // x^11 + x^2 + 1
    0b1000011101011,     // x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
    0b10000000011011,    // x^13 + x^4 + x^3 + x + 1
    0b100000010101001,   // x^14 + x^7 + x^5 + x^3 + 1
    0b1000000000110101,  // x^15 + x^5 + x^4 + x^2 + 1
    0b10000000000101101, // x^16 + x^5 + x^3 + x^2 + 1
];

/// GF(2^e) with log/antilog tables. For e <= 8 a full multiplication table
/// is kept as well, since row operations on byte-stored matrices index it
/// directly.
pub struct Field {
    e: u32,
    modulus: u32,
    order: usize,
    exp: Vec<Fe>,
    log: Vec<u32>,
    mul8: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.e)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for Field {}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

/// Trial division against every polynomial of degree 1..=deg/2.
pub fn is_irreducible_gf2(p: u32) -> bool {
    let d = poly_degree(p);
    if d < 1 {
        return false;
    }
    if d == 1 {
        return true;
    }
    for q in 2u32..(1u32 << (d / 2 + 1)) {
        if poly_rem(p, q) == 0 {
            return false;
        }
    }
    true
}

static FIELDS: [OnceLock<Arc<Field>>; 17] = [const { OnceLock::new() }; 17];

impl Field {
    /// The shared instance of GF(2^e).
    pub fn gf(e: u32) -> Result<Arc<Field>> {
        if !(1..=MAX_DEGREE).contains(&e) {
            return Err(Error::FieldDegree(e));
        }
        Ok(FIELDS[e as usize]
            .get_or_init(|| Arc::new(Field::build(e).expect("hard-coded modulus is valid")))
            .clone())
    }

    fn build(e: u32) -> Result<Field> {
        let modulus = CONWAY[e as usize];
        if !is_irreducible_gf2(modulus) {
            return Err(Error::Structural(format!(
                "modulus {modulus:#b} is reducible"
            )));
        }
        let order = 1usize << e;
        let mut exp = vec![0 as Fe; 2 * order];
        let mut log = vec![0u32; order];
        let mut x: u32 = 1;
        for i in 0..order - 1 {
            if i > 0 && x == 1 {
                return Err(Error::Structural(format!(
                    "modulus {modulus:#b} is not primitive"
                )));
            }
            exp[i] = x as Fe;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << e) != 0 {
                x ^= modulus;
            }
        }
        if e > 1 && x != 1 {
            return Err(Error::Structural("generator order mismatch".into()));
        }
        for i in order - 1..2 * order {
            exp[i] = exp[i - (order - 1)];
        }
        let mut field = Field {
            e,
            modulus,
            order,
            exp,
            log,
            mul8: Vec::new(),
        };
        if e <= 8 {
            let mut t = vec![0u8; 256 * 256];
            for a in 0..order {
                for b in 0..order {
                    t[a * 256 + b] = field.mul(a as Fe, b as Fe) as u8;
                }
            }
            field.mul8 = t;
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, 2^e.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize] as usize;
        self.exp[(self.order - 1 - l) % (self.order - 1)]
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (k % (self.order as u64 - 1).max(1));
        self.exp[(l % (self.order as u64 - 1).max(1)) as usize]
    }

    /// The fixed primitive element (the class of x).
    pub fn generator(&self) -> Fe {
        if self.e == 1 {
            1
        } else {
            2
        }
    }

    /// Row of the multiplication table for `c`; only for e <= 8.
    #[inline]
    pub(crate) fn mul_row(&self, c: Fe) -> &[u8] {
        let s = c as usize * 256;
        &self.mul8[s..s + 256]
    }

    #[inline]
    pub(crate) fn log_of(&self, a: Fe) -> u32 {
        self.log[a as usize]
    }

    #[inline]
    pub(crate) fn exp_at(&self, i: usize) -> Fe {
        self.exp[i]
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.order).map(|x| x as Fe)
    }

    /// Image of `a` under the embedding into GF(2^big), which must be a
    /// multiple of this degree. Conway polynomials make the map the
    /// canonical one sending the generator to `g^((2^big-1)/(2^e-1))`.
    pub fn embed_into(&self, a: Fe, big: &Field) -> Result<Fe> {
        if !big.e.is_multiple_of(self.e) {
            return Err(Error::FieldMismatch);
        }
        if a == 0 {
            return Ok(0);
        }
        if self.e == 1 {
            return Ok(1);
        }
        let k = (big.order - 1) / (self.order - 1);
        let l = self.log[a as usize] as usize * k;
        Ok(big.exp[l % (big.order - 1)])
    }

    /// Frobenius-stable check used in tests: `x^(2^e) = x`.
    pub fn frobenius_fixes(&self, a: Fe) -> bool {
        let mut x = a;
        for _ in 0..self.e {
            x = self.mul(x, x);
        }
        x == a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_moduli_irreducible_and_primitive() {
        for e in 1..=MAX_DEGREE {
            let f = Field::gf(e).unwrap();
            assert_eq!(f.order(), 1 << e);
        }
    }

    #[test]
    fn frobenius_spot_check() {
        for e in [1, 2, 3, 4, 8, 11, 16] {
            let f = Field::gf(e).unwrap();
            let step = (f.order() / 97).max(1);
            for a in (0..f.order()).step_by(step) {
                assert!(f.frobenius_fixes(a as Fe));
            }
        }
    }

    #[test]
    fn inverse_and_distributivity() {
        let f = Field::gf(4).unwrap();
        for a in 1..16u16 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            for b in 0..16u16 {
                for c in 0..16u16 {
                    assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                }
            }
        }
    }

    #[test]
    fn subfield_embeddings_are_ring_maps() {
        for (small, big) in [
            (1, 2),
            (2, 4),
            (2, 6),
            (3, 6),
            (4, 8),
            (2, 8),
            (4, 12),
            (8, 16),
        ] {
            let s = Field::gf(small).unwrap();
            let b = Field::gf(big).unwrap();
            for x in s.elements() {
                for y in s.elements().step_by((s.order() / 16).max(1)) {
                    let ex = s.embed_into(x, &b).unwrap();
                    let ey = s.embed_into(y, &b).unwrap();
                    assert_eq!(s.embed_into(x ^ y, &b).unwrap(), ex ^ ey, "{small}->{big}");
                    assert_eq!(s.embed_into(s.mul(x, y), &b).unwrap(), b.mul(ex, ey));
                }
            }
        }
    }

    #[test]
    fn trial_division() {
        assert!(is_irreducible_gf2(0b111));
        assert!(!is_irreducible_gf2(0b101)); // (x+1)^2
        assert!(!is_irreducible_gf2(0b1111)); // (x+1)(x^2+x+1)
    }
}
