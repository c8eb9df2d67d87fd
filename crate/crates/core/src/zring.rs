//! Arithmetic in the ring of integers modulo `p^s`.
//!
//! Residues are plain `u64` values in `[0, p^s)`. [`RingSpec`] carries the
//! raw operations used by the matrix code; [`Residue`] is the ring-tagged
//! element used at API boundaries where mixing rings must be rejected.

use std::fmt;

use crate::error::{Error, Result};

/// The ring `Z_{p^s}` with `p` prime and `s >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    p: u64,
    s: u32,
    modulus: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl RingSpec {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroExponent);
        }
        let modulus = p.checked_pow(s).ok_or(Error::ModulusOverflow { p, s })?;
        Ok(RingSpec { p, s, modulus })
    }

    /// Shorthand for `Z_4`.
    pub fn z4() -> Self {
        RingSpec {
            p: 2,
            s: 2,
            modulus: 4,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^k` for `k <= s`.
    pub fn pow_p(&self, k: u32) -> u64 {
        debug_assert!(k <= self.s);
        self.p.pow(k)
    }

    /// `p^k mod p^s`, which is zero once `k >= s`.
    pub fn pow_p_reduced(&self, k: u32) -> u64 {
        if k >= self.s {
            0
        } else {
            self.p.pow(k)
        }
    }

    pub fn contains(&self, value: u64) -> bool {
        value < self.modulus
    }

    pub fn reduce(&self, value: u64) -> u64 {
        value % self.modulus
    }

    pub fn reduce_signed(&self, value: i64) -> u64 {
        (value as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub fn element(&self, value: u64) -> Result<Residue> {
        if self.contains(value) {
            Ok(Residue { value, ring: *self })
        } else {
            Err(Error::OutOfRange {
                value,
                modulus: self.modulus,
            })
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (sum, overflow) = a.overflowing_add(b);
        if overflow || sum >= self.modulus {
            sum.wrapping_sub(self.modulus)
        } else {
            sum
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.modulus <= u32::MAX as u64 {
            (a * b) % self.modulus
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    /// `acc + a*b`.
    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        self.add(acc, self.mul(a, b))
    }

    /// Largest `k <= s` with `p^k | a`; zero has valuation `s`.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.s;
        }
        let mut k = 0;
        let mut a = a;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            k += 1;
        }
        k
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let m = self.modulus as i128;
        let (mut r0, mut r1) = (m, a as i128);
        let (mut x0, mut x1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (x0, x1) = (x1, x0 - q * x1);
        }
        debug_assert_eq!(r0, 1);
        Some(x0.rem_euclid(m) as u64)
    }

    /// Additive order `p^(s - min valuation)` of a vector; the zero vector has order 1.
    pub fn vector_order(&self, v: &[u64]) -> u64 {
        let min_val = v.iter().map(|&x| self.valuation(x)).min().unwrap_or(self.s);
        self.pow_p(self.s - min_val)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 1 {
            write!(f, "Z_{}", self.p)
        } else {
            write!(f, "Z_{}^{}", self.p, self.s)
        }
    }
}

/// An element of `Z_{p^s}` tagged with its ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    ring: RingSpec,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    fn same_ring(&self, other: &Residue) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.modulus,
                right: other.ring.modulus,
            })
        }
    }

    pub fn checked_add(&self, other: &Residue) -> Result<Residue> {
        self.same_ring(other)?;
        Ok(Residue {
            value: self.ring.add(self.value, other.value),
            ring: self.ring,
        })
    }

    pub fn checked_mul(&self, other: &Residue) -> Result<Residue> {
        self.same_ring(other)?;
        Ok(Residue {
            value: self.ring.mul(self.value, other.value),
            ring: self.ring,
        })
    }

    pub fn neg(&self) -> Residue {
        Residue {
            value: self.ring.neg(self.value),
            ring: self.ring,
        }
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Order `o(u)` of a nonempty vector of residues over one ring.
pub fn element_order(u: &[Residue]) -> Result<u64> {
    let first = u.first().ok_or(Error::EmptyVector)?;
    let ring = first.ring;
    for x in &u[1..] {
        first.same_ring(x)?;
    }
    let values: Vec<u64> = u.iter().map(|x| x.value).collect();
    Ok(ring.vector_order(&values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_rings() -> Vec<RingSpec> {
        let mut rings = Vec::new();
        for p in [2u64, 3, 5, 7] {
            for s in 1..=6u32 {
                let r = RingSpec::new(p, s).unwrap();
                if r.modulus() <= 64 {
                    rings.push(r);
                }
            }
        }
        rings
    }

    #[test]
    fn construction_checks() {
        assert_eq!(RingSpec::new(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(RingSpec::new(1, 2), Err(Error::NotPrime(1)));
        assert_eq!(RingSpec::new(3, 0), Err(Error::ZeroExponent));
        assert!(matches!(
            RingSpec::new(2, 64),
            Err(Error::ModulusOverflow { .. })
        ));
        assert_eq!(RingSpec::new(2, 63).unwrap().modulus(), 1 << 63);
        assert_eq!(RingSpec::new(3, 10).unwrap().modulus(), 59049);
    }

    #[test]
    fn basic_examples() {
        let r = RingSpec::new(3, 2).unwrap();
        let a = r.element(5).unwrap();
        let b = r.element(7).unwrap();
        assert_eq!(a.checked_add(&b).unwrap().value(), 3);

        let r8 = RingSpec::new(2, 3).unwrap();
        let c = r8.element(5).unwrap();
        let d = r8.element(3).unwrap();
        assert_eq!(c.checked_mul(&d).unwrap().value(), 7);
        assert_eq!(r8.element(0).unwrap().neg().value(), 0);

        assert!(matches!(
            a.checked_add(&c),
            Err(Error::RingMismatch { left: 9, right: 8 })
        ));
        assert!(r8.element(8).is_err());
    }

    #[test]
    fn valuations() {
        let r8 = RingSpec::new(2, 3).unwrap();
        assert_eq!(r8.valuation(4), 2);
        assert_eq!(r8.valuation(0), 3);
        let r9 = RingSpec::new(3, 2).unwrap();
        assert_eq!(r9.valuation(6), 1);
    }

    #[test]
    fn orders() {
        let r8 = RingSpec::new(2, 3).unwrap();
        assert_eq!(element_order(&[r8.element(2).unwrap()]).unwrap(), 4);
        let zero = vec![r8.element(0).unwrap(); 3];
        assert_eq!(element_order(&zero).unwrap(), 1);
        assert_eq!(element_order(&[]), Err(Error::EmptyVector));

        // o((3,6)) over Z_9 by exhaustive multiplication.
        let r9 = RingSpec::new(3, 2).unwrap();
        let u = [3u64, 6];
        let brute = (1..=9u64)
            .find(|&m| u.iter().all(|&x| r9.mul(m % 9, x) == 0))
            .unwrap();
        assert_eq!(brute, 3);
        let tagged: Vec<_> = u.iter().map(|&x| r9.element(x).unwrap()).collect();
        assert_eq!(element_order(&tagged).unwrap(), 3);
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for r in small_rings() {
            let m = r.modulus();
            for a in 0..m {
                assert_eq!(r.add(a, r.neg(a)), 0);
                for b in 0..m {
                    for c in 0..m {
                        assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
                        assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn valuation_of_products_exhaustive() {
        for r in small_rings() {
            let m = r.modulus();
            for a in 0..m {
                for b in 0..m {
                    let expected = (r.valuation(a) + r.valuation(b)).min(r.s());
                    assert_eq!(r.valuation(r.mul(a, b)), expected, "{r}: {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn units_exhaustive() {
        for r in small_rings() {
            let m = r.modulus();
            for a in 0..m {
                let has_inverse = (0..m).any(|b| r.mul(a, b) == 1);
                assert_eq!(r.is_unit(a), has_inverse);
                assert_eq!(r.valuation(a) == 0, has_inverse);
                if let Some(inv) = r.inverse(a) {
                    assert_eq!(r.mul(a, inv), 1);
                } else {
                    assert!(!has_inverse);
                }
            }
        }
    }

    #[test]
    fn large_modulus_arithmetic() {
        let r = RingSpec::new(2, 63).unwrap();
        let m = r.modulus();
        assert_eq!(r.add(m - 1, m - 1), m - 2);
        assert_eq!(r.mul(m - 1, m - 1), 1);
        let r = RingSpec::new(4294967311, 1).unwrap();
        let m = r.modulus();
        assert_eq!(r.add(m - 1, 2), 1);
        assert_eq!(r.mul(m - 1, m - 1), 1);
        let inv = r.inverse(12345).unwrap();
        assert_eq!(r.mul(12345, inv), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn axioms_randomized(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
                                 s in 1u32..12, a: u64, b: u64, c: u64) {
                let r = RingSpec::new(p, s).unwrap();
                let (a, b, c) = (r.reduce(a), r.reduce(b), r.reduce(c));
                prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
                prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                prop_assert_eq!(r.add(a, r.neg(a)), 0);
                prop_assert_eq!(
                    r.valuation(r.mul(a, b)),
                    (r.valuation(a) + r.valuation(b)).min(s)
                );
            }
        }
    }
}
