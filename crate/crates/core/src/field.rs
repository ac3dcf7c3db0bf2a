//! Prime-field arithmetic over `Z/pZ` with `p < 2^64`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// A prime modulus, checked by a deterministic Miller-Rabin test.
///
/// `p = 2` is accepted so that incidence geometry over `F_2^3` can be
/// expressed; checks that need an odd characteristic gate on [`Prime::is_odd`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_odd(self) -> bool {
        self.0 & 1 == 1
    }

    /// Residue of an arbitrary signed integer.
    pub fn reduce(self, value: i128) -> u64 {
        value.rem_euclid(self.0 as i128) as u64
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

// Bases valid for every n < 3.3 * 10^24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n` in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All positive divisors of `n` in increasing order; empty for `n = 0`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Multiplicative order of `g` modulo the prime `p`; `None` for `g ≡ 0`.
pub fn multiplicative_order(g: u64, p: Prime) -> Option<u64> {
    let p = p.get();
    if g % p == 0 {
        return None;
    }
    let mut order = p - 1;
    for q in prime_factors(p - 1) {
        while order % q == 0 && pow_mod(g, order / q, p) == 1 {
            order /= q;
        }
    }
    Some(order)
}

/// The smallest generator of `F_p*` (for `p = 2` the group is trivial and `1` is returned).
pub fn primitive_root(p: Prime) -> FieldElement {
    let m = p.get();
    if m == 2 {
        return FieldElement::new(1, p);
    }
    let factors = prime_factors(m - 1);
    let g = (2..m)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (m - 1) / q, m) != 1))
        .expect("every prime field has a primitive root");
    FieldElement::new(g, p)
}

/// Primes in the closed range `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<Prime> {
    (lo..=hi).filter(|&n| is_prime(n)).map(Prime).collect()
}

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    residue: u64,
    modulus: Prime,
}

impl FieldElement {
    /// Reduces `value` modulo `p`.
    pub fn new(value: u64, modulus: Prime) -> Self {
        FieldElement { residue: value % modulus.get(), modulus }
    }

    pub fn from_signed(value: i128, modulus: Prime) -> Self {
        FieldElement { residue: modulus.reduce(value), modulus }
    }

    #[inline]
    pub fn residue(self) -> u64 {
        self.residue
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn invert(self) -> Result<Self> {
        inverse_mod(self.residue, self.modulus.get())
            .map(|r| FieldElement { residue: r, modulus: self.modulus })
            .ok_or(Error::ZeroInverse)
    }

    pub fn pow(self, exp: u64) -> Self {
        FieldElement { residue: pow_mod(self.residue, exp, self.modulus.get()), modulus: self.modulus }
    }

    fn check(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "field elements from different moduli");
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { residue: add_mod(self.residue, rhs.residue, self.modulus.get()), ..self }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { residue: sub_mod(self.residue, rhs.residue, self.modulus.get()), ..self }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement { residue: mul_mod(self.residue, rhs.residue, self.modulus.get()), ..self }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement { residue: sub_mod(0, self.residue, self.modulus.get()), ..self }
    }
}
