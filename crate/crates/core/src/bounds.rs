//! Certified rational enclosures for the real-valued right-hand sides of the
//! theorem checks.
//!
//! An [`Expr`] is evaluated at a working precision into an interval
//! `[lo, hi]` of exact rationals that is guaranteed to contain the true
//! value. Comparisons refine the precision until the intervals separate,
//! so no assertion or hypothesis gate ever depends on floating-point rounding.

use alloc::boxed::Box;
use core::ops;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Precisions (in bits) tried by [`decide_le`] before giving up.
pub const PRECISION_SCHEDULE: [u32; 5] = [64, 128, 256, 512, 1024];

/// A real-valued expression built from exact rationals, powers and base-2 logs.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(BigRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `base^exponent` with a rational exponent; a non-integer exponent needs `base ≥ 0`.
    Pow(Box<Expr>, BigRational),
    Log2(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Expr {
    pub fn int<T: Into<BigInt>>(v: T) -> Expr {
        Expr::Const(BigRational::from_integer(v.into()))
    }

    pub fn big(v: &BigUint) -> Expr {
        Expr::Const(BigRational::from_integer(BigInt::from(v.clone())))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::Const(rat(n, d))
    }

    pub fn rational(q: BigRational) -> Expr {
        Expr::Const(q)
    }

    pub fn pow(self, exponent: BigRational) -> Expr {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn powi(self, exponent: i64) -> Expr {
        self.pow(BigRational::from_integer(BigInt::from(exponent)))
    }

    pub fn log2(self) -> Expr {
        Expr::Log2(Box::new(self))
    }

    pub fn min(self, other: Expr) -> Expr {
        Expr::Min(Box::new(self), Box::new(other))
    }

    pub fn max(self, other: Expr) -> Expr {
        Expr::Max(Box::new(self), Box::new(other))
    }

    /// Floating-point evaluation, for reporting only.
    pub fn eval_f64(&self) -> f64 {
        match self {
            Expr::Const(q) => q.to_f64().unwrap_or(f64::NAN),
            Expr::Add(a, b) => a.eval_f64() + b.eval_f64(),
            Expr::Sub(a, b) => a.eval_f64() - b.eval_f64(),
            Expr::Mul(a, b) => a.eval_f64() * b.eval_f64(),
            Expr::Div(a, b) => a.eval_f64() / b.eval_f64(),
            Expr::Pow(a, e) => libm::pow(a.eval_f64(), e.to_f64().unwrap_or(f64::NAN)),
            Expr::Log2(a) => libm::log2(a.eval_f64()),
            Expr::Min(a, b) => a.eval_f64().min(b.eval_f64()),
            Expr::Max(a, b) => a.eval_f64().max(b.eval_f64()),
        }
    }

    /// An enclosure of the value at working precision `bits`, or `None` when an
    /// operation leaves its domain (log of a nonpositive number, division by an
    /// interval containing zero, fractional power of a negative number).
    pub fn enclose(&self, bits: u32) -> Option<Bounds> {
        let b = match self {
            Expr::Const(q) => Bounds::exact(q.clone()),
            Expr::Add(a, c) => a.enclose(bits)?.add(&c.enclose(bits)?),
            Expr::Sub(a, c) => a.enclose(bits)?.sub(&c.enclose(bits)?),
            Expr::Mul(a, c) => a.enclose(bits)?.mul(&c.enclose(bits)?).rounded(bits + 32),
            Expr::Div(a, c) => a.enclose(bits)?.div(&c.enclose(bits)?)?.rounded(bits + 32),
            Expr::Pow(a, e) => a.enclose(bits)?.pow(e, bits)?.rounded(bits + 32),
            Expr::Log2(a) => a.enclose(bits)?.log2(bits)?,
            Expr::Min(a, c) => {
                let (x, y) = (a.enclose(bits)?, c.enclose(bits)?);
                Bounds { lo: x.lo.clone().min(y.lo.clone()), hi: x.hi.min(y.hi) }
            }
            Expr::Max(a, c) => {
                let (x, y) = (a.enclose(bits)?, c.enclose(bits)?);
                Bounds { lo: x.lo.clone().max(y.lo.clone()), hi: x.hi.max(y.hi) }
            }
        };
        Some(b)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

/// A closed interval `[lo, hi]` of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn two_pow(e: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Approximate `log2 |x|` from bit lengths (within one).
fn magnitude(x: &BigRational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

/// Rounds `x` to a dyadic with about `bits` significant bits, toward `+∞`
/// when `up` and toward `−∞` otherwise.
pub fn round_dyadic(x: &BigRational, bits: u32, up: bool) -> BigRational {
    if x.is_zero() || x.is_integer() && x.numer().bits() <= bits as u64 {
        return x.clone();
    }
    let shift = bits as i64 - magnitude(x);
    let scaled = x * two_pow(shift);
    let q = if up { scaled.ceil() } else { scaled.floor() };
    q * two_pow(-shift)
}

/// `⌊x^{1/n}⌋`-style dyadic bounds on the real `n`-th root of `x ≥ 0`.
fn root_bounds(x: &BigRational, n: u32, bits: u32) -> (BigRational, BigRational) {
    if x.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    if n == 1 {
        return (x.clone(), x.clone());
    }
    let s = bits as i64 - magnitude(x) / n as i64;
    let scaled = x * two_pow(s * n as i64);
    let lo_int = scaled.floor().to_integer();
    let hi_int = scaled.ceil().to_integer();
    let lo_root = lo_int.to_biguint().map(|v| v.nth_root(n)).unwrap_or_default();
    let mut hi_root = hi_int.to_biguint().map(|v| v.nth_root(n)).unwrap_or_default();
    if BigInt::from(hi_root.pow(n)) < hi_int {
        hi_root += 1u8;
    }
    let scale = two_pow(-s);
    (
        BigRational::from_integer(BigInt::from(lo_root)) * &scale,
        BigRational::from_integer(BigInt::from(hi_root)) * scale,
    )
}

/// Bounds on `log2 n` for a positive integer, with about `bits` fractional bits.
fn int_log2_bounds(n: &BigUint, bits: u32) -> (BigRational, BigRational) {
    assert!(!n.is_zero());
    let e = n.bits() - 1;
    let whole = BigRational::from_integer(BigInt::from(e));
    if n.count_ones() == 1 {
        return (whole.clone(), whole);
    }
    // y ∈ [1, 2) held as fixed point with `w` fractional bits, bracketed by [ylo, yhi].
    let w = bits as u64 + 32;
    let (mut ylo, mut yhi) = if e <= w {
        let y = n << (w - e) as usize;
        (y.clone(), y)
    } else {
        let (q, r) = n.div_rem(&(BigUint::one() << (e - w) as usize));
        let hi = if r.is_zero() { q.clone() } else { &q + 1u8 };
        (q, hi)
    };
    let two = BigUint::one() << (w + 1) as usize;
    let mask_w = BigUint::one() << w as usize;
    let mut acc = BigUint::zero();
    let mut determined = 0u32;
    // log2 y = Σ b_i 2^{-i}: square, and emit 1 (then halve) when the square reaches 2.
    while determined < bits {
        ylo = (&ylo * &ylo) >> w as usize;
        let sq = &yhi * &yhi;
        let (q, r) = sq.div_rem(&mask_w);
        yhi = if r.is_zero() { q } else { q + 1u8 };
        if ylo >= two {
            acc = (acc << 1usize) + 1u8;
            ylo >>= 1usize;
            yhi = (&yhi + 1u8) >> 1usize;
        } else if yhi < two {
            acc <<= 1usize;
        } else {
            break;
        }
        determined += 1;
    }
    let denom = BigRational::from_integer(BigInt::one() << determined as usize);
    let lo = &whole + BigRational::from_integer(BigInt::from(acc.clone())) / &denom;
    let hi = whole + BigRational::from_integer(BigInt::from(acc + 1u8)) / denom;
    (lo, hi)
}

/// Bounds on `log2 x` for a positive rational.
pub fn log2_bounds(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive());
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let (nl, nh) = int_log2_bounds(n, bits);
    if d.is_one() {
        return (nl, nh);
    }
    let (dl, dh) = int_log2_bounds(d, bits);
    (nl - dh, nh - dl)
}

impl Bounds {
    pub fn exact(q: BigRational) -> Self {
        Bounds { lo: q.clone(), hi: q }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn rounded(self, bits: u32) -> Self {
        Bounds { lo: round_dyadic(&self.lo, bits, false), hi: round_dyadic(&self.hi, bits, true) }
    }

    pub fn add(&self, o: &Bounds) -> Bounds {
        Bounds { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Bounds) -> Bounds {
        Bounds { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn mul(&self, o: &Bounds) -> Bounds {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Bounds { lo: &self.lo * &o.lo, hi: &self.hi * &o.hi };
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Bounds { lo, hi }
    }

    fn recip(&self) -> Option<Bounds> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Bounds { lo: self.hi.recip(), hi: self.lo.recip() })
        } else {
            None
        }
    }

    pub fn div(&self, o: &Bounds) -> Option<Bounds> {
        Some(self.mul(&o.recip()?))
    }

    fn powi(&self, n: u32) -> Bounds {
        let (lo, hi) = (self.lo.pow(n as i32), self.hi.pow(n as i32));
        if n % 2 == 1 || !self.lo.is_negative() {
            Bounds { lo, hi }
        } else if !self.hi.is_positive() {
            Bounds { lo: hi, hi: lo }
        } else {
            Bounds { lo: BigRational::zero(), hi: lo.max(hi) }
        }
    }

    pub fn pow(&self, e: &BigRational, bits: u32) -> Option<Bounds> {
        if e.is_zero() {
            // 0^0 = 1
            return Some(Bounds::exact(BigRational::one()));
        }
        if e.is_negative() {
            return self.pow(&-e, bits)?.recip();
        }
        if e.is_integer() {
            return Some(self.powi(e.to_integer().to_u32()?));
        }
        if self.lo.is_negative() {
            return None;
        }
        let num = e.numer().to_u32()?;
        let den = e.denom().to_u32()?;
        let (lo, _) = root_bounds(&self.lo.pow(num as i32), den, bits);
        let (_, hi) = root_bounds(&self.hi.pow(num as i32), den, bits);
        Some(Bounds { lo, hi })
    }

    pub fn log2(&self, bits: u32) -> Option<Bounds> {
        if !self.lo.is_positive() {
            return None;
        }
        let (lo, _) = log2_bounds(&self.lo, bits);
        let (_, hi) = log2_bounds(&self.hi, bits);
        Some(Bounds { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Holds,
    Fails,
    Undecided,
}

impl Decision {
    pub fn holds(self) -> bool {
        self == Decision::Holds
    }
}

/// Decides `lhs ≤ rhs` exactly, refining precision along [`PRECISION_SCHEDULE`].
pub fn decide_le(lhs: &Expr, rhs: &Expr) -> Decision {
    for bits in PRECISION_SCHEDULE {
        let (Some(l), Some(r)) = (lhs.enclose(bits), rhs.enclose(bits)) else {
            continue;
        };
        if l.hi <= r.lo {
            return Decision::Holds;
        }
        if l.lo > r.hi {
            return Decision::Fails;
        }
    }
    Decision::Undecided
}

/// The smallest certified `C ≥ 1` (to about 2^-40 relative) with
/// `lhs ≤ rhs(C)`, assuming `rhs` is nondecreasing in `C`. `None` when
/// even `C = 2^256` does not suffice.
pub fn minimal_constant<F: Fn(&Expr) -> Expr>(lhs: &Expr, rhs: F) -> Option<BigRational> {
    let holds = |c: &BigRational| decide_le(lhs, &rhs(&Expr::Const(c.clone()))).holds();
    let one = BigRational::one();
    if holds(&one) {
        return Some(one);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut fail = one;
    let mut pass = two.clone();
    let mut steps = 0;
    while !holds(&pass) {
        fail = pass.clone();
        pass = &pass * &two;
        steps += 1;
        if steps > 256 {
            return None;
        }
    }
    for _ in 0..40 {
        let mid = round_dyadic(&((&fail + &pass) / &two), 64, true);
        if mid >= pass || mid <= fail {
            break;
        }
        if holds(&mid) {
            pass = mid;
        } else {
            fail = mid;
        }
    }
    Some(pass)
}

/// `⌊log2 n⌋` and `⌈log2 n⌉` as plain integers.
pub fn log2_floor_ceil(n: &BigUint) -> (u64, u64) {
    let f = n.bits().saturating_sub(1);
    let c = if n.count_ones() <= 1 { f } else { f + 1 };
    (f, c)
}

/// Sign of a rational as an integer sign.
pub fn sign(q: &BigRational) -> Sign {
    if q.is_zero() {
        Sign::NoSign
    } else if q.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}
