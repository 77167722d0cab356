//! Arithmetic in prime fields GF(p) and binary extension fields GF(2^m).
//!
//! A [`GfContext`] is a small `Copy` descriptor; elements are plain canonical
//! residues ([`GfElement`]) and every operation goes through the context.
//! Elements enter a context through [`GfContext::element`], which rejects
//! values that are not canonical for that field.

use core::fmt;

use crate::error::{Error, Result};

/// A field element in canonical form: a residue in `[0, p)` for prime fields,
/// or a bitmask polynomial of degree `< m` for GF(2^m).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GfElement(u32);

impl GfElement {
    pub const ZERO: GfElement = GfElement(0);
    pub const ONE: GfElement = GfElement(1);

    #[inline]
    pub const fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::LowerHex for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl fmt::Display for GfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Prime,
    Binary { degree: u32 },
}

/// Irreducible (primitive) moduli for GF(2^m), indexed by m.
const BINARY_MODULI: [u32; 17] =
    [0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443, 0x8003, 0x1100b];

/// Arithmetic context for GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GfContext {
    q: u32,
    /// The prime itself for prime fields, or the modulus polynomial bitmask.
    modulus: u32,
    repr: Repr,
}

impl fmt::Display for GfContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Prime => write!(f, "GF({})", self.q),
            Repr::Binary { degree } => write!(f, "GF(2^{}) mod {:#x}", degree, self.modulus),
        }
    }
}

impl GfContext {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::UnsupportedFieldOrder(p));
        }
        Ok(GfContext { q: p as u32, modulus: p as u32, repr: Repr::Prime })
    }

    /// GF(2^m) with the fixed modulus from the built-in table.
    pub fn binary(m: u32) -> Result<Self> {
        if m == 0 || m > 16 {
            return Err(Error::UnsupportedFieldOrder(1u64 << m.min(63)));
        }
        Self::binary_with_modulus(m, BINARY_MODULI[m as usize])
    }

    /// GF(2^m) reduced modulo `modulus`, which must be irreducible of degree m.
    pub fn binary_with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if m == 0 || m > 16 {
            return Err(Error::UnsupportedFieldOrder(1u64 << m.min(63)));
        }
        if degree_of(modulus) != Some(m) || !is_irreducible_gf2(modulus) {
            return Err(Error::ReducibleModulus(modulus));
        }
        Ok(GfContext { q: 1 << m, modulus, repr: Repr::Binary { degree: m } })
    }

    /// GF(q) for a prime `q` or a power of two `q = 2^m` (table modulus).
    pub fn new(q: u64) -> Result<Self> {
        if q >= 4 && q.is_power_of_two() {
            Self::binary(q.trailing_zeros())
        } else {
            Self::prime(q)
        }
    }

    /// GF(q) with an explicit modulus. For prime fields the modulus must equal q.
    pub fn with_modulus(q: u64, modulus: u64) -> Result<Self> {
        if q >= 4 && q.is_power_of_two() {
            let m = q.trailing_zeros();
            if modulus > u32::MAX as u64 {
                return Err(Error::ReducibleModulus(u32::MAX));
            }
            Self::binary_with_modulus(m, modulus as u32)
        } else if modulus == q {
            Self::prime(q)
        } else {
            Err(Error::UnsupportedFieldOrder(q))
        }
    }

    #[inline]
    pub const fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub const fn modulus(&self) -> u32 {
        self.modulus
    }

    pub const fn is_binary(&self) -> bool {
        matches!(self.repr, Repr::Binary { .. })
    }

    pub const fn characteristic(&self) -> u32 {
        match self.repr {
            Repr::Prime => self.q,
            Repr::Binary { .. } => 2,
        }
    }

    /// Order of the multiplicative group, `q - 1`.
    pub const fn group_order(&self) -> u64 {
        self.q as u64 - 1
    }

    /// Validates a raw value as a canonical element of this field.
    pub fn element(&self, value: u64) -> Result<GfElement> {
        if value < self.q as u64 {
            Ok(GfElement(value as u32))
        } else {
            Err(Error::ContextMismatch { value, q: self.q })
        }
    }

    /// Image of an integer under the canonical ring map Z -> GF(q).
    pub fn from_int(&self, value: i64) -> GfElement {
        let p = self.characteristic() as i64;
        GfElement(value.rem_euclid(p) as u32)
    }

    /// All field elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GfElement> {
        (0..self.q).map(GfElement)
    }

    #[inline]
    pub fn add(&self, a: GfElement, b: GfElement) -> GfElement {
        match self.repr {
            Repr::Prime => {
                let s = a.0 as u64 + b.0 as u64;
                let q = self.q as u64;
                GfElement(if s >= q { s - q } else { s } as u32)
            }
            Repr::Binary { .. } => GfElement(a.0 ^ b.0),
        }
    }

    #[inline]
    pub fn neg(&self, a: GfElement) -> GfElement {
        match self.repr {
            Repr::Prime if a.0 != 0 => GfElement(self.q - a.0),
            _ => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: GfElement, b: GfElement) -> GfElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: GfElement, b: GfElement) -> GfElement {
        match self.repr {
            Repr::Prime => GfElement(((a.0 as u64 * b.0 as u64) % self.q as u64) as u32),
            Repr::Binary { degree } => GfElement(binary_mul(a.0, b.0, self.modulus, degree)),
        }
    }

    /// `acc + a * b`, the elimination kernel.
    #[inline]
    pub fn mul_add(&self, acc: GfElement, a: GfElement, b: GfElement) -> GfElement {
        self.add(acc, self.mul(a, b))
    }

    pub fn inv(&self, a: GfElement) -> Result<GfElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow_u64(a, self.group_order() - 1))
    }

    pub fn div(&self, a: GfElement, b: GfElement) -> Result<GfElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents invert first. `0^0 = 1`.
    pub fn pow(&self, a: GfElement, e: i64) -> Result<GfElement> {
        if e < 0 {
            let inv = self.inv(a)?;
            Ok(self.pow_u64(inv, e.unsigned_abs()))
        } else {
            Ok(self.pow_u64(a, e as u64))
        }
    }

    pub fn pow_u64(&self, a: GfElement, mut e: u64) -> GfElement {
        let mut base = a;
        let mut acc = GfElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: GfElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut order = self.group_order();
        for p in prime_factors(order) {
            while order % p == 0 && self.pow_u64(a, order / p) == GfElement::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    /// The smallest canonical element of multiplicative order exactly `n`.
    pub fn primitive_nth_root(&self, n: u64) -> Result<GfElement> {
        let group_order = self.group_order();
        if n == 0 || group_order % n != 0 {
            return Err(Error::NoRootOfUnity { n, group_order });
        }
        for candidate in 1..self.q {
            let g = GfElement(candidate);
            // The order test is cheap once a^n = 1 is known.
            if self.pow_u64(g, n) == GfElement::ONE && self.element_order(g)? == n {
                return Ok(g);
            }
        }
        unreachable!("a cyclic group of order q - 1 has elements of every order dividing q - 1")
    }
}

/// Smallest prime field GF(p) with `n | p - 1`.
pub fn smallest_field_for(n: u64) -> GfContext {
    let n = n.max(1);
    let mut p = n + 1;
    loop {
        if is_prime(p) {
            if let Ok(ctx) = GfContext::prime(p) {
                return ctx;
            }
        }
        p += n;
    }
}

#[inline]
fn binary_mul(mut a: u32, mut b: u32, modulus: u32, degree: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> degree) & 1 != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn degree_of(poly: u32) -> Option<u32> {
    if poly == 0 {
        None
    } else {
        Some(31 - poly.leading_zeros())
    }
}

fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = degree_of(b).expect("nonzero divisor");
    while let Some(da) = degree_of(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of degree
/// at most half the degree of `poly`.
pub(crate) fn is_irreducible_gf2(poly: u32) -> bool {
    let Some(m) = degree_of(poly) else { return false };
    if m == 0 {
        return false;
    }
    for k in 1..=m / 2 {
        for divisor in (1u32 << k)..(1u32 << (k + 1)) {
            if gf2_rem(poly, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> alloc::vec::Vec<u64> {
    let mut out = alloc::vec::Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf13() -> GfContext {
        GfContext::prime(13).unwrap()
    }

    fn gf16() -> GfContext {
        GfContext::binary(4).unwrap()
    }

    fn e(v: u32) -> GfElement {
        GfElement(v)
    }

    #[test]
    fn prime_field_basics() {
        let f = gf13();
        assert_eq!(f.add(e(7), e(9)), e(3));
        assert_eq!(f.mul(e(7), e(8)), e(4));
        assert_eq!(f.inv(e(2)).unwrap(), e(7));
        assert_eq!(f.inv(e(1)).unwrap(), e(1));
        assert_eq!(f.pow(e(2), 12).unwrap(), e(1));
        assert_eq!(f.pow(e(2), 6).unwrap(), e(12));
        assert_eq!(f.pow(e(2), -1).unwrap(), e(7));
        for a in f.elements() {
            assert_eq!(f.add(a, GfElement::ZERO), a);
            assert_eq!(f.mul(a, GfElement::ONE), a);
        }
    }

    #[test]
    fn binary_field_basics() {
        let f = gf16();
        assert_eq!(f.modulus(), 0x13);
        // x + x = 0
        assert_eq!(f.add(e(0b10), e(0b10)), GfElement::ZERO);
        // x^3 * x = x^4 = x + 1 mod x^4 + x + 1
        assert_eq!(f.mul(e(0b1000), e(0b10)), e(0b11));
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(f.inv(a).unwrap(), a), GfElement::ONE);
            assert_eq!(f.pow(a, 15).unwrap(), GfElement::ONE);
        }
    }

    #[test]
    fn zero_errors() {
        let f = gf13();
        assert_eq!(f.inv(GfElement::ZERO), Err(Error::ZeroInverse));
        assert_eq!(f.pow(GfElement::ZERO, -2), Err(Error::ZeroInverse));
        assert_eq!(f.pow(GfElement::ZERO, 0).unwrap(), GfElement::ONE);
        assert_eq!(f.element_order(GfElement::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn context_mismatch_rejected() {
        let f = gf13();
        assert!(matches!(f.element(13), Err(Error::ContextMismatch { value: 13, q: 13 })));
        assert!(gf16().element(16).is_err());
        assert_eq!(gf16().element(15).unwrap().value(), 15);
    }

    #[test]
    fn orders_and_roots() {
        let f = gf13();
        // Oracle: smallest e with 2^e = 1 by direct multiplication.
        let mut acc = e(2);
        let mut order = 1;
        while acc != GfElement::ONE {
            acc = f.mul(acc, e(2));
            order += 1;
        }
        assert_eq!(order, 12);
        assert_eq!(f.element_order(e(2)).unwrap(), 12);
        assert_eq!(f.element_order(GfElement::ONE).unwrap(), 1);
        assert_eq!(f.primitive_nth_root(12).unwrap(), e(2));
        assert_eq!(f.primitive_nth_root(1).unwrap(), GfElement::ONE);
        assert!(matches!(f.primitive_nth_root(5), Err(Error::NoRootOfUnity { .. })));

        let g = gf16().primitive_nth_root(15).unwrap();
        assert_eq!(gf16().element_order(g).unwrap(), 15);
        assert_eq!(g, e(2));
    }

    #[test]
    fn root_powers_below_n_are_not_one() {
        for (f, n) in [(gf13(), 12u64), (gf13(), 6), (gf13(), 4), (gf16(), 15), (gf16(), 5)] {
            let g = f.primitive_nth_root(n).unwrap();
            for k in 1..n {
                assert_ne!(f.pow_u64(g, k), GfElement::ONE);
            }
            assert_eq!(f.pow_u64(g, n), GfElement::ONE);
        }
    }

    #[test]
    fn smallest_fields() {
        assert_eq!(smallest_field_for(12).order(), 13);
        assert_eq!(smallest_field_for(15).order(), 31);
        assert_eq!(smallest_field_for(1).order(), 2);
        assert_eq!(smallest_field_for(8).order(), 17);
        // Brute-force scan for a range of n.
        for n in 1..=64u64 {
            let q = smallest_field_for(n).order() as u64;
            assert_eq!((q - 1) % n, 0);
            let expected = (2..).find(|&p| is_prime(p) && (p - 1) % n == 0).unwrap();
            assert_eq!(q, expected);
        }
    }

    #[test]
    fn moduli_table_is_irreducible() {
        for m in 1..=16 {
            assert!(is_irreducible_gf2(BINARY_MODULI[m]), "m = {m}");
            assert_eq!(degree_of(BINARY_MODULI[m]), Some(m as u32));
        }
        assert!(!is_irreducible_gf2(0b101)); // x^2 + 1 = (x + 1)^2
        assert_eq!(GfContext::binary_with_modulus(4, 0b10001), Err(Error::ReducibleModulus(0b10001)));
    }

    #[test]
    fn new_dispatches_on_order() {
        assert!(GfContext::new(16).unwrap().is_binary());
        assert!(!GfContext::new(17).unwrap().is_binary());
        assert!(GfContext::new(12).is_err());
        assert!(GfContext::new(1).is_err());
    }

    fn check_axioms(f: &GfContext, a: GfElement, b: GfElement, c: GfElement) {
        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        assert_eq!(f.add(a, b), f.add(b, a));
        assert_eq!(f.mul(a, b), f.mul(b, a));
        assert_eq!(f.add(a, f.neg(a)), GfElement::ZERO);
        if !a.is_zero() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), GfElement::ONE);
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for f in [gf13(), gf16(), GfContext::prime(2).unwrap(), GfContext::binary(3).unwrap()] {
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        check_axioms(&f, a, b, c);
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in [GfContext::prime(65537).unwrap(), GfContext::binary(16).unwrap(), GfContext::prime(97).unwrap()] {
            for _ in 0..10_000 {
                let mut pick = || GfElement(rng.gen_range(0..f.order()));
                let (a, b, c) = (pick(), pick(), pick());
                check_axioms(&f, a, b, c);
            }
        }
    }
}
