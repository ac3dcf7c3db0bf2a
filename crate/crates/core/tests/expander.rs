use sumprod_core::rational::{expander_statistic, Phi, RationalSet};

#[test]
fn intervals_expand_superquadratically() {
    for (n, size_r, size_rp) in [(12, 125, 540), (16, 215, 1142)] {
        let s = expander_statistic(&RationalSet::interval(n), Phi::Identity).unwrap();
        assert_eq!((s.size_r, s.size_r_phi_a), (size_r, size_rp));
        assert!(s.exponent >= 2.0);
    }
}
