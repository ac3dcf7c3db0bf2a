//! Exact rational sets: combinators, `R[A]`, the expander catalog and the
//! four-variable set `{(y − x)w/(z − x)}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::energy::{Ambient, AmbientSet, Arithmetic, ExactFunction};
use crate::sets::SetOp;
use crate::{Error, Result};

/// A finite set of rationals in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalSet {
    members: Vec<BigRational>,
}

impl fmt::Debug for RationalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter().map(|q| q.to_string())).finish()
    }
}

impl FromIterator<BigRational> for RationalSet {
    fn from_iter<I: IntoIterator<Item = BigRational>>(iter: I) -> Self {
        let set: BTreeSet<BigRational> = iter.into_iter().collect();
        RationalSet { members: set.into_iter().collect() }
    }
}

impl RationalSet {
    pub fn new<I: IntoIterator<Item = BigRational>>(items: I) -> Self {
        items.into_iter().collect()
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(items: I) -> Self {
        items.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    /// `{1, 2, …, n}`.
    pub fn interval(n: u64) -> Self {
        RationalSet { members: (1..=n).map(|x| BigRational::from_integer(BigInt::from(x))).collect() }
    }

    pub fn members(&self) -> &[BigRational] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &RationalSet) -> bool {
        self.members.iter().all(|x| other.contains(x))
    }

    pub fn one_minus(&self) -> RationalSet {
        let one = BigRational::one();
        self.members.iter().map(|x| &one - x).collect()
    }

    /// `{1/x : x ∈ A, x ≠ 0}`.
    pub fn inverses(&self) -> RationalSet {
        self.members.iter().filter(|x| !x.is_zero()).map(|x| x.recip()).collect()
    }

    pub fn nonzero(&self) -> RationalSet {
        RationalSet { members: self.members.iter().filter(|x| !x.is_zero()).cloned().collect() }
    }
}

fn apply(op: SetOp, a: &BigRational, b: &BigRational) -> BigRational {
    match op {
        SetOp::Sum => a + b,
        SetOp::Difference => a - b,
        SetOp::Product => a * b,
        SetOp::Quotient => a / b,
    }
}

fn right_operands(b: &RationalSet, op: SetOp) -> Result<Vec<&BigRational>> {
    if op == SetOp::Quotient {
        if !b.is_empty() && b.members.iter().all(Zero::is_zero) {
            return Err(Error::EmptyDenominator);
        }
        Ok(b.members.iter().filter(|x| !x.is_zero()).collect())
    } else {
        Ok(b.members.iter().collect())
    }
}

/// `A op B` over `Q`; quotients skip zero denominators.
pub fn combine_rational(a: &RationalSet, b: &RationalSet, op: SetOp) -> Result<RationalSet> {
    let rhs = right_operands(b, op)?;
    Ok(a.members.iter().flat_map(|x| rhs.iter().map(move |y| apply(op, x, y))).collect())
}

/// `sA = A + … + A` (s copies), `s ≥ 1`.
pub fn iterated_sumset(a: &RationalSet, s: u32) -> Result<RationalSet> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be at least 1"));
    }
    let mut acc = a.clone();
    for _ in 1..s {
        acc = combine_rational(&acc, a, SetOp::Sum)?;
    }
    Ok(acc)
}

/// `R[A]` over `Q`.
pub fn ratio_set_r(a: &RationalSet) -> Result<RationalSet> {
    if a.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: a.len() });
    }
    let mut out = BTreeSet::new();
    for base in &a.members {
        let diffs: Vec<BigRational> = a.members.iter().map(|x| x - base).collect();
        let inv: Vec<BigRational> = diffs.iter().filter(|d| !d.is_zero()).map(|d| d.recip()).collect();
        for num in &diffs {
            for den in &inv {
                out.insert(num * den);
            }
        }
    }
    Ok(RationalSet { members: out.into_iter().collect() })
}

/// `{(y − x)w/(z − x) : x ∈ A, y ∈ B, z ∈ C, w ∈ D, x ≠ z}`.
pub fn four_variable_set(a: &RationalSet, b: &RationalSet, c: &RationalSet, d: &RationalSet) -> RationalSet {
    let mut out = BTreeSet::new();
    for x in &a.members {
        for z in c.members.iter().filter(|z| *z != x) {
            let inv = (z - x).recip();
            for y in &b.members {
                let ratio = (y - x) * &inv;
                for w in &d.members {
                    out.insert(&ratio * w);
                }
            }
        }
    }
    RationalSet { members: out.into_iter().collect() }
}

/// The injective maps available to the expander statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phi {
    Identity,
    Cube,
    /// `x ↦ x + 1/x`, positive inputs only.
    PlusInverse,
}

impl Phi {
    pub const ALL: [Phi; 3] = [Phi::Identity, Phi::Cube, Phi::PlusInverse];

    pub fn name(self) -> &'static str {
        match self {
            Phi::Identity => "id",
            Phi::Cube => "cube",
            Phi::PlusInverse => "plus-inverse",
        }
    }

    pub fn parse(s: &str) -> Option<Phi> {
        Phi::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn apply(self, x: &BigRational) -> Result<BigRational> {
        match self {
            Phi::Identity => Ok(x.clone()),
            Phi::Cube => Ok(x * x * x),
            Phi::PlusInverse => {
                if !x.is_positive() {
                    return Err(Error::PhiDomain(x.to_string()));
                }
                Ok(x + x.recip())
            }
        }
    }

    /// `φ(A)`, failing if `φ` collides on `A`.
    pub fn image(self, a: &RationalSet) -> Result<RationalSet> {
        let values: Vec<BigRational> = a.members.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        let image: RationalSet = values.into_iter().collect();
        if image.len() != a.len() {
            return Err(Error::NotInjectiveOnA);
        }
        Ok(image)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpanderStatistic {
    pub size_r: usize,
    pub size_r_phi_a: usize,
    /// `log |R[A]φ(A)| / log |A|`
    pub exponent: f64,
}

pub fn expander_statistic(a: &RationalSet, phi: Phi) -> Result<ExpanderStatistic> {
    if a.len() < 3 {
        return Err(Error::TooSmall { needed: 3, got: a.len() });
    }
    let image = phi.image(a)?;
    let r = ratio_set_r(a)?;
    let rp = combine_rational(&r, &image, SetOp::Product)?;
    let exponent = libm::log(rp.len() as f64) / libm::log(a.len() as f64);
    Ok(ExpanderStatistic { size_r: r.len(), size_r_phi_a: rp.len(), exponent })
}

/// An exact nonnegative integer function on `Q` with finite support, keyed by
/// value order so iteration and serialization are deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalCounts(pub BTreeMap<BigRational, BigUint>);

impl RationalCounts {
    pub fn get(&self, x: &BigRational) -> BigUint {
        self.0.get(x).cloned().unwrap_or_default()
    }

    fn convolve(&self, other: &Self, key: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let mut out: BTreeMap<BigRational, BigUint> = BTreeMap::new();
        for (y, a) in &self.0 {
            for (z, b) in &other.0 {
                *out.entry(key(y, z)).or_default() += a * b;
            }
        }
        out.retain(|_, v| !v.is_zero());
        RationalCounts(out)
    }
}

impl ExactFunction for RationalCounts {
    fn star(&self, other: &Self) -> Result<Self> {
        Ok(self.convolve(other, |y, z| y + z))
    }
    fn circle(&self, other: &Self) -> Result<Self> {
        Ok(self.convolve(other, |y, z| z - y))
    }
    fn pointwise_pow(&self, k: u32) -> Self {
        RationalCounts(self.0.iter().map(|(x, c)| (x.clone(), c.pow(k))).filter(|(_, c)| !c.is_zero()).collect())
    }
    fn sum_with(&self, other: &Self) -> Result<Self> {
        let mut out = self.0.clone();
        for (x, c) in &other.0 {
            *out.entry(x.clone()).or_default() += c;
        }
        Ok(RationalCounts(out))
    }
    fn power_sum(&self, k: u32) -> BigUint {
        self.0.values().map(|c| c.pow(k)).sum()
    }
    fn mass(&self) -> BigUint {
        self.0.values().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Arithmetic for Rationals {
    type Elem = BigRational;

    fn ambient(&self) -> Ambient {
        Ambient::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        (!b.is_zero()).then(|| a / b)
    }
}

impl AmbientSet for RationalSet {
    type Arith = Rationals;
    type Func = RationalCounts;

    fn arithmetic(&self) -> Rationals {
        Rationals
    }
    fn elements(&self) -> Vec<BigRational> {
        self.members.clone()
    }
    fn contains_elem(&self, x: &BigRational) -> bool {
        self.contains(x)
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn indicator(&self) -> RationalCounts {
        RationalCounts(self.members.iter().map(|x| (x.clone(), BigUint::one())).collect())
    }
    fn product_representation(&self, other: &Self) -> Result<RationalCounts> {
        let mut out: BTreeMap<BigRational, BigUint> = BTreeMap::new();
        for a in &self.members {
            for b in &other.members {
                *out.entry(a * b).or_default() += 1u8;
            }
        }
        Ok(RationalCounts(out))
    }
}

/// Parses `n` or `n/d`.
pub fn parse_rational(token: &str) -> Option<BigRational> {
    let token = token.trim();
    match token.split_once('/') {
        None => token.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
    }
}

/// `log2` of a positive rational as a float, for reporting only.
pub fn approx_log2(x: &BigRational) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
    libm::log2(n) - libm::log2(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{additive_energy, oracle_count, t_energy, Functional, DEFAULT_ORACLE_BUDGET};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(xs: &[i64]) -> RationalSet {
        RationalSet::from_integers(xs.iter().copied())
    }

    #[test]
    fn combine_examples() {
        assert_eq!(combine_rational(&ints(&[1, 2]), &ints(&[1, 2]), SetOp::Sum).unwrap(), ints(&[2, 3, 4]));
        assert_eq!(
            combine_rational(&ints(&[1, 2, 4]), &ints(&[1, 2, 4]), SetOp::Product).unwrap(),
            ints(&[1, 2, 4, 8, 16])
        );
        let half = RationalSet::new([q(1, 2)]);
        assert_eq!(combine_rational(&half, &ints(&[2]), SetOp::Product).unwrap(), ints(&[1]));
        assert_eq!(combine_rational(&half, &ints(&[0]), SetOp::Quotient), Err(Error::EmptyDenominator));
    }

    #[test]
    fn ratio_set_of_small_interval() {
        let r = ratio_set_r(&ints(&[0, 1, 2])).unwrap();
        assert_eq!(r, RationalSet::new([q(-1, 1), q(0, 1), q(1, 2), q(1, 1), q(2, 1)]));
    }

    #[test]
    fn four_variable_examples() {
        let s = ints(&[0, 1]);
        assert_eq!(four_variable_set(&s, &s, &s, &s), s);
        assert_eq!(four_variable_set(&s, &ints(&[5, 7]), &s, &ints(&[0])), ints(&[0]));
        let a = ints(&[1, 2, 5]);
        let d = ints(&[3, -1]);
        let r_d = combine_rational(&ratio_set_r(&a).unwrap(), &d, SetOp::Product).unwrap();
        assert!(r_d.is_subset(&four_variable_set(&a, &a, &a, &d)));
    }

    #[test]
    fn expander_errors() {
        assert_eq!(expander_statistic(&ints(&[1, 2]), Phi::Identity), Err(Error::TooSmall { needed: 3, got: 2 }));
        assert!(matches!(expander_statistic(&ints(&[-1, 1, 2]), Phi::PlusInverse), Err(Error::PhiDomain(_))));
        // 1/2 + 2 = 2 + 1/2
        let a = RationalSet::new([q(1, 2), q(2, 1), q(3, 1)]);
        assert_eq!(expander_statistic(&a, Phi::PlusInverse), Err(Error::NotInjectiveOnA));
        assert_eq!(
            expander_statistic(&ints(&[-1, 1, 2]), Phi::Cube).unwrap().size_r,
            ratio_set_r(&ints(&[-1, 1, 2])).unwrap().len()
        );
    }

    #[test]
    fn rational_energy_matches_oracle() {
        let a = RationalSet::new([q(1, 2), q(1, 1), q(3, 2), q(2, 1), q(7, 3)]);
        assert_eq!(
            additive_energy(&a, &a).unwrap(),
            oracle_count(&a, Functional::Additive, DEFAULT_ORACLE_BUDGET).unwrap()
        );
        for k in 1..=3 {
            assert_eq!(t_energy(&a, k).unwrap(), oracle_count(&a, Functional::T(k), DEFAULT_ORACLE_BUDGET).unwrap());
        }
    }

    #[test]
    fn parse_tokens() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    proptest! {
        #[test]
        fn r_set_symmetries(xs in prop::collection::btree_set(-20i64..20, 2..8)) {
            let a = RationalSet::from_integers(xs.iter().copied());
            let r = ratio_set_r(&a).unwrap();
            prop_assert_eq!(r.one_minus(), r.clone());
            prop_assert_eq!(r.inverses(), r.nonzero());
            prop_assert!(r.len() >= a.len() - 1);
        }
    }
}
