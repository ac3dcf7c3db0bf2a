//! Multiplicative subgroups of `F_p*`, unions of their cosets, shift
//! intersection profiles and shifted quotient counts.

use alloc::vec::Vec;

use crate::field::{divisors, inverse_mod, mul_mod, pow_mod, primitive_root, sub_mod, FieldElement, Prime};
use crate::sets::{combine, ResidueSet, SetOp};
use crate::{Error, Result};

/// The subgroup of `F_p*` of a given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    order: u64,
    generator: u64,
    members: ResidueSet,
}

impl Subgroup {
    pub fn modulus(&self) -> Prime {
        self.members.modulus()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn members(&self) -> &ResidueSet {
        &self.members
    }

    /// Smallest element of the coset `xΓ`.
    pub fn coset_rep(&self, x: u64) -> u64 {
        let p = self.modulus().get();
        self.members.iter().map(|g| mul_mod(g, x, p)).min().expect("subgroups are nonempty")
    }
}

/// The unique subgroup of order `d`: the powers of `g^{(p−1)/d}`.
pub fn subgroup_of_order(p: Prime, d: u64) -> Result<Subgroup> {
    let m = p.get();
    if d == 0 || (m - 1) % d != 0 {
        return Err(Error::NotADivisor { order: d, modulus: m });
    }
    let generator = pow_mod(primitive_root(p).residue(), (m - 1) / d, m);
    let mut members = Vec::with_capacity(d as usize);
    let mut x = 1u64;
    for _ in 0..d {
        members.push(x);
        x = mul_mod(x, generator, m);
    }
    Ok(Subgroup { order: d, generator, members: ResidueSet::new(p, members)? })
}

/// Every subgroup of `F_p*`, by increasing order.
pub fn all_subgroups(p: Prime) -> Vec<Subgroup> {
    divisors(p.get() - 1).into_iter().map(|d| subgroup_of_order(p, d).expect("d divides p - 1")).collect()
}

/// A union of cosets of `Γ`, so that `QΓ = Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    base: Subgroup,
    coset_reps: ResidueSet,
    members: ResidueSet,
}

impl InvariantSet {
    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    /// One representative (the smallest residue) per coset.
    pub fn coset_reps(&self) -> &ResidueSet {
        &self.coset_reps
    }

    pub fn members(&self) -> &ResidueSet {
        &self.members
    }
}

/// `∪_{r ∈ reps} rΓ`.
pub fn invariant_set(gamma: &Subgroup, reps: &ResidueSet) -> Result<InvariantSet> {
    if reps.modulus() != gamma.modulus() {
        return Err(Error::ModulusMismatch { left: gamma.modulus().get(), right: reps.modulus().get() });
    }
    if reps.contains(0) {
        return Err(Error::ZeroRep);
    }
    let p = gamma.modulus();
    let coset_reps = ResidueSet::new(p, reps.iter().map(|r| gamma.coset_rep(r)))?;
    let members = combine(&coset_reps, gamma.members(), SetOp::Product)?;
    Ok(InvariantSet { base: gamma.clone(), coset_reps, members })
}

/// `QΓ^k = QΓ…Γ` (k factors); `k = 0` gives `Q`.
pub fn power_product(q: &ResidueSet, gamma: &ResidueSet, k: u32) -> Result<ResidueSet> {
    let mut acc = q.clone();
    for _ in 0..k {
        acc = combine(&acc, gamma, SetOp::Product)?;
    }
    Ok(acc)
}

/// `x ↦ |Q₁ ∩ (Q₂ + x)|` on `F_p*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftProfile {
    /// Entry `i` is the value at `x = i + 1`.
    pub values: Vec<u64>,
    pub max: u64,
    /// Smallest `x ≠ 0` attaining the maximum.
    pub argmax: u64,
}

impl ShiftProfile {
    pub fn at(&self, x: u64) -> u64 {
        self.values[(x - 1) as usize]
    }
}

pub fn shift_intersection_profile(q1: &ResidueSet, q2: &ResidueSet) -> Result<ShiftProfile> {
    if q1.modulus() != q2.modulus() {
        return Err(Error::ModulusMismatch { left: q1.modulus().get(), right: q2.modulus().get() });
    }
    let p = q1.modulus().get();
    let mut counts = alloc::vec![0u64; p as usize];
    // q₁ = q₂ + x
    for a in q1.iter() {
        for b in q2.iter() {
            counts[sub_mod(a, b, p) as usize] += 1;
        }
    }
    let values = counts[1..].to_vec();
    let (mut max, mut argmax) = (0, 1);
    for (i, &v) in values.iter().enumerate() {
        if v > max {
            max = v;
            argmax = i as u64 + 1;
        }
    }
    Ok(ShiftProfile { values, max, argmax })
}

/// `|Q ∩ (xQ + α(x − 1))|`.
pub fn shifted_quotient_rep(q: &ResidueSet, alpha: FieldElement, x: FieldElement) -> Result<u64> {
    let p = q.modulus();
    if alpha.modulus() != p || x.modulus() != p {
        return Err(Error::ModulusMismatch { left: p.get(), right: alpha.modulus().get() });
    }
    if alpha.is_zero() {
        return Err(Error::BadShift);
    }
    if x.is_zero() || x.residue() == 1 {
        return Err(Error::BadRatio);
    }
    let m = p.get();
    let shift = mul_mod(alpha.residue(), sub_mod(x.residue(), 1, m), m);
    Ok(q.iter().filter(|&t| q.contains((mul_mod(x.residue(), t, m) + shift) % m)).count() as u64)
}

/// Pairs `(q₁, q₂) ∈ Q²` with `q₂ ≠ −α` and `(q₁ + α)/(q₂ + α) = x`.
pub fn shifted_quotient_pairs(q: &ResidueSet, alpha: u64, x: u64) -> u64 {
    let m = q.modulus().get();
    let mut count = 0;
    for a in q.iter() {
        for b in q.iter() {
            if let Some(inv) = inverse_mod((b + alpha) % m, m) {
                count += (mul_mod((a + alpha) % m, inv, m) == x % m) as u64;
            }
        }
    }
    count
}

/// `R[Γ]` for a subgroup: `(a₁ − a)/(a₂ − a) = (g₁ − 1)/(g₂ − 1)` with
/// `gᵢ = aᵢ/a`, so `R[Γ] = (Γ − 1)/(Γ − 1)` without zero denominators.
pub fn subgroup_ratio_set(gamma: &Subgroup) -> Result<ResidueSet> {
    if gamma.order() < 2 {
        return Err(Error::TooSmall { needed: 2, got: gamma.order() as usize });
    }
    let shifted = gamma.members().translate(gamma.modulus().get() - 1);
    combine(&shifted, &shifted, SetOp::Quotient)
}

/// `Q[Γ] = Γ·R[Γ]`, since `Γ − Γ = Γ(Γ − 1)`.
pub fn subgroup_quotient_set(gamma: &Subgroup) -> Result<ResidueSet> {
    combine(&subgroup_ratio_set(gamma)?, gamma.members(), SetOp::Product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primes_between;
    use crate::sets::{quotient_set_q, ratio_set_r, rep_function};

    fn p(m: u64) -> Prime {
        Prime::new(m).unwrap()
    }

    fn set(m: u64, xs: &[u64]) -> ResidueSet {
        ResidueSet::new(p(m), xs.iter().copied()).unwrap()
    }

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroup_of_order(p(7), 3).unwrap().members(), &set(7, &[1, 2, 4]));
        assert_eq!(subgroup_of_order(p(13), 4).unwrap().members(), &set(13, &[1, 5, 8, 12]));
        assert_eq!(subgroup_of_order(p(101), 1).unwrap().members(), &set(101, &[1]));
        assert_eq!(subgroup_of_order(p(13), 5), Err(Error::NotADivisor { order: 5, modulus: 13 }));
    }

    #[test]
    fn subgroups_are_closed() {
        for prime in primes_between(3, 1000) {
            for g in all_subgroups(prime) {
                if g.order() > 512 {
                    continue;
                }
                let m = prime.get();
                assert!(g.members().contains(1));
                assert_eq!(g.members().len() as u64, g.order());
                for a in g.members().iter() {
                    for b in g.members().iter() {
                        assert!(g.members().contains(mul_mod(a, b, m)));
                    }
                }
            }
        }
    }

    #[test]
    fn invariant_set_examples() {
        let g = subgroup_of_order(p(7), 3).unwrap();
        assert_eq!(invariant_set(&g, &set(7, &[1])).unwrap().members(), g.members());
        let q = invariant_set(&g, &set(7, &[1, 3])).unwrap();
        assert_eq!(q.members(), &set(7, &[1, 2, 3, 4, 5, 6]));
        let dup = invariant_set(&g, &set(7, &[2, 4])).unwrap();
        assert_eq!(dup.coset_reps(), &set(7, &[1]));
        assert_eq!(dup.members().len(), 3);
        assert_eq!(invariant_set(&g, &set(7, &[0, 1])), Err(Error::ZeroRep));
        assert_eq!(combine(q.members(), g.members(), SetOp::Product).unwrap(), *q.members());
    }

    #[test]
    fn profile_examples() {
        let g = set(7, &[1, 2, 4]);
        let prof = shift_intersection_profile(&g, &g).unwrap();
        assert_eq!(prof.max, 1);
        assert!(shift_intersection_profile(&g, &set(7, &[])).unwrap().values.iter().all(|&v| v == 0));
        let q1 = set(31, &[0, 1, 5, 9, 12, 20, 28]);
        let q2 = set(31, &[2, 3, 9, 17]);
        let prof = shift_intersection_profile(&q1, &q2).unwrap();
        let r = rep_function(&q1, &q2, SetOp::Difference).unwrap();
        for x in 1..31u64 {
            assert_eq!(prof.at(x), num_traits::ToPrimitive::to_u64(r.get(x)).unwrap());
            let direct = q1.iter().filter(|&a| q2.contains((a + 31 - x) % 31)).count() as u64;
            assert_eq!(prof.at(x), direct);
        }
        assert_eq!(prof.at(prof.argmax), prof.max);
    }

    #[test]
    fn symmetric_profile() {
        // Q = −Q for an even-order subgroup
        let g = subgroup_of_order(p(13), 4).unwrap();
        let prof = shift_intersection_profile(g.members(), g.members()).unwrap();
        for x in 1..13 {
            assert_eq!(prof.at(x), prof.at(13 - x));
        }
    }

    #[test]
    fn shifted_quotient_examples() {
        let m = p(7);
        let q = set(7, &[1, 2, 4]);
        let fe = |v| FieldElement::new(v, m);
        assert_eq!(shifted_quotient_rep(&q, fe(1), fe(2)).unwrap(), 1);
        assert_eq!(shifted_quotient_rep(&set(7, &[]), fe(1), fe(2)).unwrap(), 0);
        assert_eq!(shifted_quotient_rep(&q, fe(0), fe(2)), Err(Error::BadShift));
        assert_eq!(shifted_quotient_rep(&q, fe(1), fe(1)), Err(Error::BadRatio));
        assert_eq!(shifted_quotient_rep(&q, fe(1), fe(0)), Err(Error::BadRatio));
    }

    #[test]
    fn shifted_quotient_matches_pairs() {
        for m in [11u64, 13, 29, 31] {
            let prime = p(m);
            for d in divisors(m - 1) {
                let g = subgroup_of_order(prime, d).unwrap();
                for alpha in 1..m {
                    if g.members().contains(m - alpha) {
                        continue;
                    }
                    for x in 2..m {
                        let rep = shifted_quotient_rep(
                            g.members(),
                            FieldElement::new(alpha, prime),
                            FieldElement::new(x, prime),
                        );
                        assert_eq!(rep.unwrap(), shifted_quotient_pairs(g.members(), alpha, x));
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_fast_paths_match_general() {
        for prime in primes_between(3, 113) {
            for g in all_subgroups(prime).into_iter().filter(|g| g.order() >= 2) {
                assert_eq!(subgroup_ratio_set(&g).unwrap(), ratio_set_r(g.members()).unwrap());
                assert_eq!(subgroup_quotient_set(&g).unwrap(), quotient_set_q(g.members()).unwrap());
            }
        }
    }
}
