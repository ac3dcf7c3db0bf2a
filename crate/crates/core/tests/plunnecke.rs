use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumprod_core::field::{primes_between, Prime};
use sumprod_core::harness::{run_check, CheckId, CheckSpec, HarnessConfig, Params, Value, Verdict};
use sumprod_core::sets::ResidueSet;

fn random_set(rng: &mut ChaCha8Rng, p: Prime, max: usize) -> Vec<u64> {
    let n = rng.gen_range(1..=max.min(p.get() as usize));
    let mut v: Vec<u64> = index::sample(rng, p.get() as usize, n).iter().map(|x| x as u64).collect();
    v.sort();
    v
}

#[test]
fn witnesses_exist_on_200_instances() {
    let primes = primes_between(13, 61);
    let cfg = HarnessConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let p = primes[rng.gen_range(0..primes.len())];
        let a = random_set(&mut rng, p, 12);
        let h = rng.gen_range(1..=2);
        let bs: Vec<Vec<u64>> = (0..h).map(|_| random_set(&mut rng, p, 8)).collect();
        let params = Params::new().with("p", p.get() as i64).with("A", Value::Set(a)).with("Bs", Value::Sets(bs));
        let report = run_check(&CheckSpec::new(CheckId::Plunnecke, params), &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{:?}", report.params);
        assert!(report.detail("witness").is_some() && report.detail("witness_large").is_some());
    }
}

#[test]
fn two_element_example() {
    let p = 7;
    let s = ResidueSet::new(Prime::new(p).unwrap(), [0, 1]).unwrap();
    let params = Params::new().with("p", p as i64).with("A", &s).with("Bs", Value::Sets(vec![vec![0, 1]]));
    let report = run_check(&CheckSpec::new(CheckId::Plunnecke, params), &HarnessConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    assert_eq!(report.detail("witness"), Some(&Value::Set(vec![0, 1])));
}
