use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumprod_core::field::primes_between;
use sumprod_core::sets::{combine, ratio_set_r, ResidueSet, SetOp};
use sumprod_core::subgroup::{all_subgroups, subgroup_quotient_set, subgroup_ratio_set};

#[test]
fn subgroup_identities_up_to_199() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in primes_between(2, 199) {
        for gamma in all_subgroups(p) {
            // Both ratio sets need two distinct elements.
            if gamma.order() < 2 {
                continue;
            }
            let g = gamma.members();
            let q = subgroup_quotient_set(&gamma).unwrap();
            assert_eq!(combine(&q, g, SetOp::Product).unwrap(), q, "p={p:?} d={}", gamma.order());
            assert!(q.len() as u128 <= (g.len() as u128).pow(3));
            let r = subgroup_ratio_set(&gamma).unwrap();
            assert_eq!(r.one_minus(), r);
            assert!(r.is_subset(&q.intersection(&q.one_minus()).unwrap()));
        }
        // R[A] = 1 − R[A] for an arbitrary A with at least two elements.
        if p.get() >= 3 {
            let n = rng.gen_range(2..=8.min(p.get() as usize));
            let a = ResidueSet::new(p, index::sample(&mut rng, p.get() as usize, n).iter().map(|x| x as u64)).unwrap();
            let r = ratio_set_r(&a).unwrap();
            assert_eq!(r.one_minus(), r);
        }
    }
}
