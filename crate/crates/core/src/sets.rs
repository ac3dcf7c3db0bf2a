//! Residue sets in `F_p`, their sum/product combinators, representation
//! functions and the difference-ratio sets `R[A]` and `Q[A]`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::field::{add_mod, inverse_mod, mul_mod, sub_mod, Prime};
use crate::{Error, Result};

/// Largest modulus for which set construction goes through a dense mask.
const DENSE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetOp {
    Sum,
    Difference,
    Product,
    Quotient,
}

impl SetOp {
    pub const ALL: [SetOp; 4] = [SetOp::Sum, SetOp::Difference, SetOp::Product, SetOp::Quotient];

    pub fn symbol(self) -> char {
        match self {
            SetOp::Sum => '+',
            SetOp::Difference => '-',
            SetOp::Product => '*',
            SetOp::Quotient => '/',
        }
    }
}

/// Collects residues and emits them sorted and deduplicated.
pub(crate) enum Builder {
    Dense(Vec<bool>, usize),
    Sparse(BTreeSet<u64>),
}

impl Builder {
    pub(crate) fn new(p: Prime) -> Self {
        if p.get() <= DENSE_LIMIT {
            Builder::Dense(vec![false; p.get() as usize], 0)
        } else {
            Builder::Sparse(BTreeSet::new())
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, x: u64) {
        match self {
            Builder::Dense(mask, n) => {
                let slot = &mut mask[x as usize];
                if !*slot {
                    *slot = true;
                    *n += 1;
                }
            }
            Builder::Sparse(set) => {
                set.insert(x);
            }
        }
    }

    pub(crate) fn finish(self) -> Vec<u64> {
        match self {
            Builder::Dense(mask, n) => {
                let mut out = Vec::with_capacity(n);
                out.extend(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64));
                out
            }
            Builder::Sparse(set) => set.into_iter().collect(),
        }
    }
}

/// A finite subset of `F_p`, stored as a strictly increasing residue list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Prime,
    members: Vec<u64>,
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.members, self.modulus)
    }
}

impl ResidueSet {
    /// Builds a set from residues already in `[0, p)`; duplicates are merged.
    pub fn new<I: IntoIterator<Item = u64>>(modulus: Prime, items: I) -> Result<Self> {
        let mut members: Vec<u64> = Vec::new();
        for x in items {
            if x >= modulus.get() {
                return Err(Error::ResidueOutOfRange { value: x, modulus: modulus.get() });
            }
            members.push(x);
        }
        members.sort_unstable();
        members.dedup();
        Ok(ResidueSet { modulus, members })
    }

    /// Builds a set from arbitrary integers, reducing each one modulo `p`.
    pub fn from_integers<I: IntoIterator<Item = i128>>(modulus: Prime, items: I) -> Self {
        let mut members: Vec<u64> = items.into_iter().map(|x| modulus.reduce(x)).collect();
        members.sort_unstable();
        members.dedup();
        ResidueSet { modulus, members }
    }

    pub(crate) fn from_sorted(modulus: Prime, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ResidueSet { modulus, members }
    }

    pub fn empty(modulus: Prime) -> Self {
        ResidueSet { modulus, members: Vec::new() }
    }

    pub fn full(modulus: Prime) -> Self {
        ResidueSet { modulus, members: (0..modulus.get()).collect() }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    /// The members other than zero.
    pub fn nonzero(&self) -> ResidueSet {
        ResidueSet { modulus: self.modulus, members: self.iter().filter(|&x| x != 0).collect() }
    }

    fn map<F: Fn(u64) -> u64>(&self, f: F) -> ResidueSet {
        let mut b = Builder::new(self.modulus);
        for x in self.iter() {
            b.insert(f(x));
        }
        ResidueSet { modulus: self.modulus, members: b.finish() }
    }

    /// `A + t`.
    pub fn translate(&self, t: u64) -> ResidueSet {
        let p = self.modulus.get();
        let t = t % p;
        self.map(|x| add_mod(x, t, p))
    }

    /// `λA`.
    pub fn dilate(&self, lambda: u64) -> ResidueSet {
        let p = self.modulus.get();
        self.map(|x| mul_mod(x, lambda % p, p))
    }

    /// `-A`.
    pub fn negate(&self) -> ResidueSet {
        let p = self.modulus.get();
        self.map(|x| sub_mod(0, x, p))
    }

    /// `1 - A`.
    pub fn one_minus(&self) -> ResidueSet {
        let p = self.modulus.get();
        self.map(|x| sub_mod(1 % p, x, p))
    }

    /// `{1/a : a ∈ A, a ≠ 0}`.
    pub fn inverses(&self) -> ResidueSet {
        let p = self.modulus.get();
        let mut b = Builder::new(self.modulus);
        for x in self.iter().filter(|&x| x != 0) {
            b.insert(inverse_mod(x, p).expect("nonzero residue mod a prime"));
        }
        ResidueSet { modulus: self.modulus, members: b.finish() }
    }

    fn same_modulus(&self, other: &ResidueSet) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch { left: self.modulus.get(), right: other.modulus.get() })
        }
    }

    pub fn union(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_modulus(other)?;
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Ok(ResidueSet { modulus: self.modulus, members })
    }

    pub fn intersection(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.same_modulus(other)?;
        let members = self.iter().filter(|&x| other.contains(x)).collect();
        Ok(ResidueSet { modulus: self.modulus, members })
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus && self.iter().all(|x| other.contains(x))
    }

    pub fn indicator(&self) -> CountVector {
        let mut counts = vec![BigUint::zero(); self.modulus.get() as usize];
        for x in self.iter() {
            counts[x as usize] = BigUint::from(1u8);
        }
        CountVector { modulus: self.modulus, counts }
    }
}

/// Nonzero elements of `B` paired with their inverses, for the quotient loops.
fn denominators(b: &ResidueSet) -> Result<Vec<u64>> {
    let p = b.modulus.get();
    if !b.is_empty() && b.iter().all(|x| x == 0) {
        return Err(Error::EmptyDenominator);
    }
    Ok(b.iter().filter(|&x| x != 0).map(|x| inverse_mod(x, p).unwrap()).collect())
}

#[inline]
fn apply(op: SetOp, a: u64, b: u64, p: u64) -> u64 {
    match op {
        SetOp::Sum => add_mod(a, b, p),
        SetOp::Difference => sub_mod(a, b, p),
        // `b` is already inverted for quotients
        SetOp::Product | SetOp::Quotient => mul_mod(a, b, p),
    }
}

fn right_operands(b: &ResidueSet, op: SetOp) -> Result<Vec<u64>> {
    match op {
        SetOp::Quotient => denominators(b),
        _ => Ok(b.members.clone()),
    }
}

/// `A op B`. A quotient skips `b = 0` and fails only when `B = {0}`.
pub fn combine(a: &ResidueSet, b: &ResidueSet, op: SetOp) -> Result<ResidueSet> {
    a.same_modulus(b)?;
    let p = a.modulus.get();
    let rhs = right_operands(b, op)?;
    let mut out = Builder::new(a.modulus);
    for x in a.iter() {
        for &y in &rhs {
            out.insert(apply(op, x, y, p));
        }
    }
    Ok(ResidueSet { modulus: a.modulus, members: out.finish() })
}

/// `x ↦ |{(a, b) ∈ A × B : a op b = x}|`.
pub fn rep_function(a: &ResidueSet, b: &ResidueSet, op: SetOp) -> Result<CountVector> {
    a.same_modulus(b)?;
    let p = a.modulus.get();
    let rhs = right_operands(b, op)?;
    let mut counts = vec![0u64; p as usize];
    for x in a.iter() {
        for &y in &rhs {
            counts[apply(op, x, y, p) as usize] += 1;
        }
    }
    Ok(CountVector::from_small(a.modulus, &counts))
}

/// `R[A] = {(a₁ − a)/(a₂ − a) : a, a₁, a₂ ∈ A, a₂ ≠ a}`.
pub fn ratio_set_r(a: &ResidueSet) -> Result<ResidueSet> {
    if a.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: a.len() });
    }
    let p = a.modulus.get();
    let mut out = Builder::new(a.modulus);
    for &base in &a.members {
        let diffs: Vec<u64> = a.iter().map(|x| sub_mod(x, base, p)).collect();
        let inv: Vec<u64> = diffs.iter().filter(|&&d| d != 0).map(|&d| inverse_mod(d, p).unwrap()).collect();
        for &num in &diffs {
            for &den in &inv {
                out.insert(mul_mod(num, den, p));
            }
        }
    }
    Ok(ResidueSet { modulus: a.modulus, members: out.finish() })
}

/// `Q[A] = {(a₁ − a₂)/(a₃ − a₄) : a₃ ≠ a₄}`, i.e. `(A − A)/(A − A)` without zero denominators.
pub fn quotient_set_q(a: &ResidueSet) -> Result<ResidueSet> {
    if a.len() < 2 {
        return Err(Error::TooSmall { needed: 2, got: a.len() });
    }
    let d = combine(a, a, SetOp::Difference)?;
    combine(&d, &d, SetOp::Quotient)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionMode {
    /// `(f ∗ g)(x) = Σ_y f(y) g(x − y)`
    Star,
    /// `(f ∘ g)(x) = Σ_y f(y) g(y + x)`
    Circle,
}

/// An exact nonnegative integer function on `Z/pZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CountVector {
    modulus: Prime,
    counts: Vec<BigUint>,
}

impl fmt::Debug for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.counts.iter().map(|c| c.to_str_radix(10))).finish()?;
        write!(f, " mod {}", self.modulus)
    }
}

impl CountVector {
    pub fn zero(modulus: Prime) -> Self {
        CountVector { modulus, counts: vec![BigUint::zero(); modulus.get() as usize] }
    }

    pub fn from_counts(modulus: Prime, counts: Vec<BigUint>) -> Result<Self> {
        if counts.len() as u64 != modulus.get() {
            return Err(Error::InvalidParameter("count vector length must equal the modulus"));
        }
        Ok(CountVector { modulus, counts })
    }

    pub fn from_small(modulus: Prime, counts: &[u64]) -> Self {
        assert_eq!(counts.len() as u64, modulus.get());
        CountVector { modulus, counts: counts.iter().map(|&c| BigUint::from(c)).collect() }
    }

    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, x: u64) -> &BigUint {
        &self.counts[(x % self.modulus.get()) as usize]
    }

    pub fn mass(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn support(&self) -> ResidueSet {
        let members = self.nonzero_entries().map(|(x, _)| x).collect();
        ResidueSet::from_sorted(self.modulus, members)
    }

    pub(crate) fn nonzero_entries(&self) -> impl Iterator<Item = (u64, &BigUint)> + '_ {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(x, c)| (x as u64, c))
    }

    /// `Σ_x f(x)^k`.
    pub fn power_sum(&self, k: u32) -> BigUint {
        self.counts.iter().filter(|c| !c.is_zero()).map(|c| c.pow(k)).sum()
    }

    /// `Σ_x f(x) g(x)`.
    pub fn inner(&self, other: &CountVector) -> Result<BigUint> {
        self.check(other)?;
        Ok(self
            .counts
            .iter()
            .zip(&other.counts)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Pointwise `f(x)^k`.
    pub fn pointwise_pow(&self, k: u32) -> CountVector {
        CountVector { modulus: self.modulus, counts: self.counts.iter().map(|c| c.pow(k)).collect() }
    }

    pub fn add(&self, other: &CountVector) -> Result<CountVector> {
        self.check(other)?;
        let counts = self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect();
        Ok(CountVector { modulus: self.modulus, counts })
    }

    fn check(&self, other: &CountVector) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch { left: self.modulus.get(), right: other.modulus.get() })
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    pub fn convolve(&self, other: &CountVector, mode: ConvolutionMode) -> Result<CountVector> {
        self.check(other)?;
        let p = self.modulus.get();
        let index = |y: u64, z: u64| match mode {
            ConvolutionMode::Star => add_mod(y, z, p),
            // z plays the role of y + x
            ConvolutionMode::Circle => sub_mod(z, y, p),
        };
        let f: Vec<(u64, &BigUint)> = self.nonzero_entries().collect();
        let g: Vec<(u64, &BigUint)> = other.nonzero_entries().collect();

        // Fast path: every partial sum fits a u128.
        let small = |v: &[(u64, &BigUint)]| -> Option<(Vec<(u64, u64)>, u64)> {
            let mut max = 0u64;
            let mut out = Vec::with_capacity(v.len());
            for &(x, c) in v {
                let c = c.to_u64()?;
                max = max.max(c);
                out.push((x, c));
            }
            Some((out, max))
        };
        if let (Some((fs, fmax)), Some((gs, gmax))) = (small(&f), small(&g)) {
            let bound = (fmax as u128)
                .checked_mul(gmax as u128)
                .and_then(|m| m.checked_mul(fs.len().min(gs.len()).max(1) as u128));
            if bound.is_some() {
                let mut acc = vec![0u128; p as usize];
                for &(y, a) in &fs {
                    for &(z, b) in &gs {
                        acc[index(y, z) as usize] += a as u128 * b as u128;
                    }
                }
                let counts = acc.into_iter().map(BigUint::from).collect();
                return Ok(CountVector { modulus: self.modulus, counts });
            }
        }

        let mut counts = vec![BigUint::zero(); p as usize];
        for &(y, a) in &f {
            for &(z, b) in &g {
                counts[index(y, z) as usize] += a * b;
            }
        }
        Ok(CountVector { modulus: self.modulus, counts })
    }
}
