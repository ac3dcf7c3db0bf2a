//! Energies `E+`, `E×`, `T_k`, `E_k` over `F_p` and over `Q`, plus a
//! brute-force tuple oracle that shares no code with the convolution path.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::field::{add_mod, inverse_mod, mul_mod, sub_mod, Prime};
use crate::sets::{rep_function, ConvolutionMode, CountVector, ResidueSet, SetOp};
use crate::{Error, Result};

/// Default cap on the number of leaves the oracle may visit.
pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Where a set lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    PrimeField(Prime),
    Rationals,
}

/// Field operations on bare elements.
pub trait Arithmetic {
    type Elem: Clone + Ord + core::fmt::Debug;

    fn ambient(&self) -> Ambient;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` when dividing by zero.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField(pub Prime);

impl Arithmetic for PrimeField {
    type Elem = u64;

    fn ambient(&self) -> Ambient {
        Ambient::PrimeField(self.0)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.0.get())
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        sub_mod(*a, *b, self.0.get())
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0.get())
    }
    fn div(&self, a: &u64, b: &u64) -> Option<u64> {
        inverse_mod(*b, self.0.get()).map(|inv| mul_mod(*a, inv, self.0.get()))
    }
}

/// An exact integer-valued function on the ambient group, closed under
/// the two convolutions.
pub trait ExactFunction: Sized + Clone {
    fn star(&self, other: &Self) -> Result<Self>;
    fn circle(&self, other: &Self) -> Result<Self>;
    fn pointwise_pow(&self, k: u32) -> Self;
    fn sum_with(&self, other: &Self) -> Result<Self>;
    /// `Σ_x f(x)^k`
    fn power_sum(&self, k: u32) -> BigUint;
    fn mass(&self) -> BigUint;
}

impl ExactFunction for CountVector {
    fn star(&self, other: &Self) -> Result<Self> {
        self.convolve(other, ConvolutionMode::Star)
    }
    fn circle(&self, other: &Self) -> Result<Self> {
        self.convolve(other, ConvolutionMode::Circle)
    }
    fn pointwise_pow(&self, k: u32) -> Self {
        CountVector::pointwise_pow(self, k)
    }
    fn sum_with(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn power_sum(&self, k: u32) -> BigUint {
        CountVector::power_sum(self, k)
    }
    fn mass(&self) -> BigUint {
        CountVector::mass(self)
    }
}

/// A finite set with enough structure for the energy functionals.
pub trait AmbientSet {
    type Arith: Arithmetic;
    type Func: ExactFunction;

    fn arithmetic(&self) -> Self::Arith;
    fn elements(&self) -> Vec<<Self::Arith as Arithmetic>::Elem>;
    fn contains_elem(&self, x: &<Self::Arith as Arithmetic>::Elem) -> bool;
    fn size(&self) -> usize;
    fn indicator(&self) -> Self::Func;
    /// `x ↦ |{(a, b) : ab = x}|`, zero products included.
    fn product_representation(&self, other: &Self) -> Result<Self::Func>;

    fn ambient(&self) -> Ambient {
        self.arithmetic().ambient()
    }
}

impl AmbientSet for ResidueSet {
    type Arith = PrimeField;
    type Func = CountVector;

    fn arithmetic(&self) -> PrimeField {
        PrimeField(self.modulus())
    }
    fn elements(&self) -> Vec<u64> {
        self.members().to_vec()
    }
    fn contains_elem(&self, x: &u64) -> bool {
        self.contains(*x)
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn indicator(&self) -> CountVector {
        ResidueSet::indicator(self)
    }
    fn product_representation(&self, other: &Self) -> Result<CountVector> {
        rep_function(self, other, SetOp::Product)
    }
}

fn same_ambient<S: AmbientSet>(a: &S, b: &S) -> Result<()> {
    if a.ambient() == b.ambient() {
        Ok(())
    } else {
        Err(Error::AmbientMismatch)
    }
}

/// `E+(A, B) = Σ_x (A ∘ B)(x)²`.
pub fn additive_energy<S: AmbientSet>(a: &S, b: &S) -> Result<BigUint> {
    same_ambient(a, b)?;
    Ok(a.indicator().circle(&b.indicator())?.power_sum(2))
}

/// `E×(A, B) = Σ_x r_{AB}(x)²`.
pub fn multiplicative_energy<S: AmbientSet>(a: &S, b: &S) -> Result<BigUint> {
    same_ambient(a, b)?;
    Ok(a.product_representation(b)?.power_sum(2))
}

/// `f ∗ f ∗ … ∗ f` (k copies) by repeated doubling.
pub fn iterated_star<F: ExactFunction>(f: &F, k: u32) -> Result<F> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    let mut acc: Option<F> = None;
    let mut base = f.clone();
    let mut k = k;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.star(&base)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = base.star(&base)?;
    }
    Ok(acc.expect("k >= 1"))
}

/// `T_k(f) = Σ_x (f ∗ … ∗ f)(x)²` for an arbitrary function.
pub fn t_energy_of<F: ExactFunction>(f: &F, k: u32) -> Result<BigUint> {
    Ok(iterated_star(f, k)?.power_sum(2))
}

/// `E_k(f) = Σ_x (f ∘ f)(x)^k` for an arbitrary function.
pub fn e_energy_of<F: ExactFunction>(f: &F, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    Ok(f.circle(f)?.power_sum(k))
}

pub fn t_energy<S: AmbientSet>(a: &S, k: u32) -> Result<BigUint> {
    t_energy_of(&a.indicator(), k)
}

/// `E_k(A) = Σ_x r_{A−A}(x)^k`; `E_1(A) = |A|²`.
pub fn e_energy<S: AmbientSet>(a: &S, k: u32) -> Result<BigUint> {
    e_energy_of(&a.indicator(), k)
}

/// Which functional the oracle should count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functional {
    Additive,
    Multiplicative,
    T(u32),
    E(u32),
}

/// Number of leaves the oracle visits for a set of size `n`.
pub fn oracle_leaves(n: usize, functional: Functional) -> u128 {
    let n = n as u128;
    let pow = |e: u32| n.checked_pow(e).unwrap_or(u128::MAX);
    match functional {
        Functional::Additive => pow(3),
        Functional::Multiplicative => pow(3).saturating_mul(2),
        Functional::T(k) => pow(2 * k.max(1) - 1),
        Functional::E(k) => pow(k.max(1) + 1),
    }
}

/// Counts the defining tuples directly. Only the last coordinate of each
/// equation is solved by a membership test; everything else is enumerated.
pub fn oracle_count<S: AmbientSet>(a: &S, functional: Functional, budget: u128) -> Result<BigUint> {
    if let Functional::T(0) | Functional::E(0) = functional {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    let estimated = oracle_leaves(a.size(), functional);
    if estimated > budget {
        return Err(Error::BudgetExceeded { estimated, budget });
    }
    let ar = a.arithmetic();
    let xs = a.elements();
    let count: u128 = match functional {
        Functional::Additive => {
            let mut c = 0u128;
            for a1 in &xs {
                for b1 in &xs {
                    let s = ar.add(a1, b1);
                    for a2 in &xs {
                        c += a.contains_elem(&ar.sub(&s, a2)) as u128;
                    }
                }
            }
            c
        }
        Functional::Multiplicative => {
            let n = xs.len() as u128;
            let mut c = 0u128;
            for a1 in &xs {
                for b1 in &xs {
                    let s = ar.mul(a1, b1);
                    for a2 in &xs {
                        if ar.is_zero(a2) {
                            if ar.is_zero(&s) {
                                c += n;
                            }
                        } else {
                            let b2 = ar.div(&s, a2).expect("nonzero divisor");
                            c += a.contains_elem(&b2) as u128;
                        }
                    }
                }
            }
            c
        }
        Functional::T(k) => {
            // a_1 + … + a_k − a'_1 − … − a'_{k−1} must lie in A
            let mut c = 0u128;
            tk_walk(a, &ar, &xs, 0, 2 * k as usize - 1, k as usize, ar.zero(), &mut c);
            c
        }
        Functional::E(k) => {
            let mut c = 0u128;
            for a1 in &xs {
                for b1 in &xs {
                    let d = ar.sub(a1, b1);
                    // each further pair (a_i, a_i − d) must lie in A × A
                    let mut per = 1u128;
                    for _ in 1..k {
                        per *= xs.iter().filter(|ai| a.contains_elem(&ar.sub(ai, &d))).count() as u128;
                    }
                    c += per;
                }
            }
            c
        }
    };
    Ok(BigUint::from(count))
}

#[allow(clippy::too_many_arguments)]
fn tk_walk<S: AmbientSet>(
    set: &S,
    ar: &S::Arith,
    xs: &[<S::Arith as Arithmetic>::Elem],
    level: usize,
    total: usize,
    positive: usize,
    acc: <S::Arith as Arithmetic>::Elem,
    count: &mut u128,
) {
    if level == total {
        *count += set.contains_elem(&acc) as u128;
        return;
    }
    for x in xs {
        let next = if level < positive { ar.add(&acc, x) } else { ar.sub(&acc, x) };
        tk_walk(set, ar, xs, level + 1, total, positive, next, count);
    }
}

/// `min{|A|²|B|, |A||B|², (|A||B|)^{3/2}}` compared exactly: returns whether
/// `E+(A,B)` respects all three Cauchy–Schwarz bounds.
pub fn respects_cs_bounds(energy: &BigUint, a: usize, b: usize) -> bool {
    let (a, b) = (BigUint::from(a), BigUint::from(b));
    let e2 = energy * energy;
    energy <= &(&a * &a * &b) && energy <= &(&a * &b * &b) && e2 <= (&a * &b).pow(3)
}

/// `|A|^k ≤ E_k(A)`.
pub fn respects_ek_floor(ek: &BigUint, n: usize, k: u32) -> bool {
    *ek >= BigUint::from(n).pow(k)
}

/// `|A|^{2k} ≤ p^{k−1} T_k(A)`.
pub fn respects_tk_floor(tk: &BigUint, n: usize, k: u32, p: Prime) -> bool {
    BigUint::from(n).pow(2 * k) <= tk * BigUint::from(p.get()).pow(k - 1)
}

/// Decides `a^{1/m} ≤ b^{1/m} + c^{1/m}` without floating point: each root is
/// bracketed by `⌊(x·2^{sm})^{1/m}⌋ / 2^s` at increasing `s`. An instance that
/// stays undecided at 4096 bits is reported as a failure.
pub fn root_triangle_holds(a: &BigUint, b: &BigUint, c: &BigUint, m: u32) -> bool {
    if b.is_zero() {
        return a <= c;
    }
    if c.is_zero() {
        return a <= b;
    }
    // Equality needs c/b to be an m-th power; that case is decided exactly as
    // a · d ≤ b (δ + γ)^m with c/b = γ^m/δ^m.
    let g = b.gcd(c);
    let (num, den) = (c / &g, b / &g);
    if let ((gamma, true), (delta, true)) = (nth_root_floor(&num, m), nth_root_floor(&den, m)) {
        return a * &den <= b * (delta + gamma).pow(m);
    }
    let mut bits = 0u32;
    loop {
        let sm = BigUint::one() << (bits as usize * m as usize);
        let (b_lo, _) = nth_root_floor(&(b * &sm), m);
        let (c_lo, _) = nth_root_floor(&(c * &sm), m);
        let lhs = a * &sm;
        if lhs <= (&b_lo + &c_lo).pow(m) {
            return true;
        }
        if lhs >= (&b_lo + &c_lo + 2u8).pow(m) {
            return false;
        }
        if bits >= 4096 {
            return false;
        }
        bits = if bits == 0 { 32 } else { bits * 2 };
    }
}

/// `⌊x^{1/m}⌋` and whether it is exact.
pub fn nth_root_floor(x: &BigUint, m: u32) -> (BigUint, bool) {
    let r = x.nth_root(m);
    let exact = r.pow(m) == *x;
    (r, exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn set(m: u64, xs: &[u64]) -> ResidueSet {
        ResidueSet::new(Prime::new(m).unwrap(), xs.iter().copied()).unwrap()
    }

    fn n(x: BigUint) -> u64 {
        x.to_u64().unwrap()
    }

    #[test]
    fn fixtures() {
        let a = set(7, &[1, 2, 4]);
        assert_eq!(n(additive_energy(&a, &a).unwrap()), 15);
        assert_eq!(n(multiplicative_energy(&a, &a).unwrap()), 27);
        assert_eq!(n(t_energy(&a, 1).unwrap()), 3);
        assert_eq!(n(t_energy(&a, 2).unwrap()), 15);
        assert_eq!(n(t_energy(&a, 3).unwrap()), 111);
        assert_eq!(n(e_energy(&a, 1).unwrap()), 9);
        assert_eq!(n(e_energy(&a, 2).unwrap()), 15);
        assert_eq!(n(e_energy(&a, 3).unwrap()), 33);
        let r3 = iterated_star(&a.indicator(), 3).unwrap();
        let r3: Vec<u64> = r3.counts().iter().map(|c| c.to_u64().unwrap()).collect();
        assert_eq!(r3, [6, 3, 3, 4, 3, 4, 4]);
    }

    #[test]
    fn trivial_cases() {
        let single = set(11, &[5]);
        assert_eq!(n(additive_energy(&single, &single).unwrap()), 1);
        let zero = set(7, &[0]);
        assert_eq!(n(multiplicative_energy(&zero, &zero).unwrap()), 1);
        assert!(t_energy(&single, 0).is_err());
        assert!(e_energy(&single, 0).is_err());
        let other = set(11, &[1]);
        assert_eq!(additive_energy(&set(7, &[1]), &other), Err(Error::AmbientMismatch));
    }

    #[test]
    fn subgroup_multiplicative_energy_is_cube() {
        let g = set(13, &[1, 5, 8, 12]);
        assert_eq!(n(multiplicative_energy(&g, &g).unwrap()), 64);
    }

    #[test]
    fn oracle_fixtures_and_budget() {
        let a = set(7, &[1, 2, 4]);
        let b = DEFAULT_ORACLE_BUDGET;
        assert_eq!(n(oracle_count(&a, Functional::Additive, b).unwrap()), 15);
        assert_eq!(n(oracle_count(&a, Functional::Multiplicative, b).unwrap()), 27);
        assert_eq!(n(oracle_count(&a, Functional::T(3), b).unwrap()), 111);
        assert_eq!(n(oracle_count(&a, Functional::E(3), b).unwrap()), 33);
        let big = set(101, &(0..50).collect::<Vec<_>>());
        assert!(matches!(oracle_count(&big, Functional::T(8), b), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn oracle_handles_zero_products() {
        let a = set(5, &[0, 1, 2]);
        assert_eq!(
            oracle_count(&a, Functional::Multiplicative, DEFAULT_ORACLE_BUDGET).unwrap(),
            multiplicative_energy(&a, &a).unwrap()
        );
    }

    #[test]
    fn cs_bound_helper() {
        assert!(respects_cs_bounds(&BigUint::from(15u8), 3, 3));
        assert!(!respects_cs_bounds(&BigUint::from(28u8), 3, 3));
    }

    #[test]
    fn root_triangle_examples() {
        let b = |x: u64| BigUint::from(x);
        // 16^{1/2} = 4 ≤ 1 + 9^{1/2} = 4
        assert!(root_triangle_holds(&b(16), &b(1), &b(9), 2));
        assert!(!root_triangle_holds(&b(17), &b(1), &b(9), 2));
        // 2^{1/2} + 3^{1/2} ≈ 3.146, squared ≈ 9.899
        assert!(root_triangle_holds(&b(9), &b(2), &b(3), 2));
        assert!(!root_triangle_holds(&b(10), &b(2), &b(3), 2));
    }

    proptest! {
        #[test]
        fn fast_path_matches_oracle(m in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]),
                                    raw in prop::collection::vec(0u64..31, 0..10)) {
            let a = ResidueSet::from_integers(Prime::new(m).unwrap(), raw.iter().map(|&x| x as i128));
            let budget = DEFAULT_ORACLE_BUDGET;
            prop_assert_eq!(additive_energy(&a, &a).unwrap(), oracle_count(&a, Functional::Additive, budget).unwrap());
            prop_assert_eq!(multiplicative_energy(&a, &a).unwrap(), oracle_count(&a, Functional::Multiplicative, budget).unwrap());
            for k in 1..=3 {
                prop_assert_eq!(t_energy(&a, k).unwrap(), oracle_count(&a, Functional::T(k), budget).unwrap());
            }
            for k in 1..=4 {
                prop_assert_eq!(e_energy(&a, k).unwrap(), oracle_count(&a, Functional::E(k), budget).unwrap());
            }
        }
    }
}
