//! Arithmetic in GF(2^m) backed by log/antilog tables.

use crate::error::{Error, Result};

/// Default primitive polynomials, indexed by `m`. Bit `i` is the coefficient of `x^i`.
const DEFAULT_PRIMITIVE: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// The field GF(2^m) for `2 <= m <= 16`.
///
/// Elements are represented as `u16` bit patterns in the polynomial basis.
/// `antilog[i] = alpha^i` is stored twice over so that products of two logs never
/// need a modular reduction.
#[derive(Clone, Debug)]
pub struct GaloisField {
    m: u32,
    primitive_poly: u32,
    order: usize,
    log: Vec<u16>,
    antilog: Vec<u16>,
}

impl GaloisField {
    /// Builds the field, using the default primitive polynomial for `m` when `primitive_poly` is `None`.
    pub fn new(m: u32, primitive_poly: Option<u32>) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "field degree m={m} outside 2..=16"
            )));
        }
        let poly = primitive_poly.unwrap_or(DEFAULT_PRIMITIVE[m as usize]);
        if poly >> m != 1 {
            return Err(Error::NotPrimitive { m, poly });
        }
        let order = (1usize << m) - 1;
        let mut log = vec![0u16; order + 1];
        let mut antilog = vec![0u16; 2 * order];
        let mut seen = vec![false; order + 1];
        let mut x: u32 = 1;
        for i in 0..order {
            if seen[x as usize] {
                // alpha has order < 2^m - 1, so the polynomial is not primitive.
                return Err(Error::NotPrimitive { m, poly });
            }
            seen[x as usize] = true;
            antilog[i] = x as u16;
            antilog[i + order] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m & 1 == 1 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive { m, poly });
        }
        Ok(Self {
            m,
            primitive_poly: poly,
            order,
            log,
            antilog,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of nonzero elements, `2^m - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `alpha^e` for any integer exponent (reduced modulo the multiplicative order).
    #[inline]
    pub fn exp(&self, e: i64) -> u16 {
        self.antilog[e.rem_euclid(self.order as i64) as usize]
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, x: u16) -> usize {
        debug_assert!(x != 0, "log of zero");
        self.log[x as usize] as usize
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.antilog[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            None
        } else {
            Some(self.antilog[(self.order - self.log[a as usize] as usize) % self.order])
        }
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> Option<u16> {
        let bi = self.inv(b)?;
        Some(self.mul(a, bi))
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.log[a as usize] as u64 * (e % self.order as u64);
        self.antilog[(l % self.order as u64) as usize]
    }

    /// Binary minimal polynomial of `alpha^e`, as a bitmask (bit `i` = coefficient of `x^i`).
    pub fn minimal_polynomial(&self, e: usize) -> u64 {
        // Product over the cyclotomic coset of e, computed with GF(2^m) coefficients.
        let coset = self.cyclotomic_coset(e);
        let mut poly: Vec<u16> = vec![1];
        for &c in &coset {
            let root = self.exp(c as i64);
            let mut next = vec![0u16; poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i + 1] ^= p;
                next[i] ^= self.mul(p, root);
            }
            poly = next;
        }
        poly.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            debug_assert!(c <= 1, "minimal polynomial coefficient outside GF(2)");
            acc | ((c as u64) << i)
        })
    }

    /// The cyclotomic coset `{e, 2e, 4e, ...} mod 2^m - 1`.
    pub fn cyclotomic_coset(&self, e: usize) -> Vec<usize> {
        let mut coset = Vec::new();
        let mut c = e % self.order;
        loop {
            coset.push(c);
            c = (2 * c) % self.order;
            if c == coset[0] {
                break;
            }
        }
        coset
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gf16_defining_relation() {
        let f = GaloisField::new(4, None).unwrap();
        assert_eq!(f.primitive_poly(), 0x13);
        // alpha^4 = alpha + 1
        assert_eq!(f.exp(4), 0b0011);
        assert_eq!(f.exp(15), 1);
        assert_eq!(f.pow(2, 15), 1);
    }

    #[test]
    fn gf256_identity() {
        let f = GaloisField::new(8, None).unwrap();
        assert_eq!(f.order(), 255);
        assert_eq!(f.log(1), 0);
    }

    #[test]
    fn reducible_polynomial_rejected() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(matches!(
            GaloisField::new(4, Some(0b10101)),
            Err(Error::NotPrimitive { .. })
        ));
        // irreducible but not primitive: x^4 + x^3 + x^2 + x + 1 (alpha has order 5)
        assert!(GaloisField::new(4, Some(0b11111)).is_err());
        // wrong degree
        assert!(GaloisField::new(4, Some(0x25)).is_err());
        assert!(GaloisField::new(1, None).is_err());
        assert!(GaloisField::new(17, None).is_err());
    }

    #[test]
    fn all_default_polynomials_are_primitive() {
        for m in 2..=16 {
            let f = GaloisField::new(m, None).unwrap();
            assert_eq!(f.exp(f.order() as i64), 1);
        }
    }

    #[test]
    fn minimal_polynomials_gf16() {
        let f = GaloisField::new(4, None).unwrap();
        assert_eq!(f.minimal_polynomial(1), 0x13);
        // m3(x) = x^4 + x^3 + x^2 + x + 1
        assert_eq!(f.minimal_polynomial(3), 0x1F);
        // m5(x) = x^2 + x + 1
        assert_eq!(f.minimal_polynomial(5), 0x7);
    }

    proptest! {
        #[test]
        fn log_antilog_roundtrip(x in 1u16..256) {
            let f = GaloisField::new(8, None).unwrap();
            prop_assert_eq!(f.exp(f.log(x) as i64), x);
        }

        #[test]
        fn field_axioms(a in 0u16..512, b in 0u16..512, c in 0u16..512) {
            let f = GaloisField::new(9, None).unwrap();
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
