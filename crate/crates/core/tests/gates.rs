//! Re-derives every admissibility decision from the raw parameters, sharing
//! nothing with the harness beyond parameter parsing. Integer conditions are
//! compared exactly; conditions with logarithms are compared in the log
//! domain and any instance within 1e-9 of equality is counted as borderline
//! rather than silently agreed with.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use sumprod_core::field::Prime;
use sumprod_core::harness::{
    run_check, CheckId, CheckReport, CheckSpec, FamilyKind, HarnessConfig, InstanceFamily, Params, Value, Verdict,
};
use sumprod_core::subgroup::{invariant_set, subgroup_of_order};

const GATED: [CheckId; 5] = [CheckId::TkSubgroup, CheckId::QShiftEk, CheckId::TkSmallProd, CheckId::QgEk, CheckId::Abc];

fn lg(x: f64) -> f64 {
    x.log2()
}

/// `e · log2(log2 x)`, with `0 · log(0) = 0`.
fn lg_log_pow(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        e * lg(lg(x))
    }
}

/// `Some(l ≤ r)` unless the two sides are too close to call in floating point.
fn le(l: f64, r: f64) -> Option<bool> {
    if l == f64::NEG_INFINITY {
        return Some(true);
    }
    let scale = 1f64.max(l.abs()).max(r.abs());
    ((l - r).abs() > 1e-9 * scale).then_some(l <= r)
}

fn product(p: u64, a: &BTreeSet<u64>, b: &BTreeSet<u64>) -> BTreeSet<u64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y % p)).collect()
}

fn members(params: &Params, key: &str) -> BTreeSet<u64> {
    params.set(key).unwrap().iter().collect()
}

fn pow2_le(e: u64, n: u64) -> bool {
    (BigUint::from(1u8) << e) <= BigUint::from(n)
}

/// Expected admission, or `None` for a borderline float comparison.
fn admitted(check: CheckId, params: &Params) -> Option<bool> {
    let p = params.prime().unwrap().get();
    let k = params.int("k").unwrap();
    Some(match check {
        CheckId::TkSubgroup => {
            let order = params.int("order").unwrap() as u64;
            k >= 2 && pow2_le(64 * k as u64, order)
        }
        CheckId::QShiftEk => {
            let order = params.int("order").unwrap() as u64;
            let gamma = subgroup_of_order(Prime::new(p).unwrap(), order).unwrap();
            let q = invariant_set(&gamma, &params.set("reps").unwrap()).unwrap().members().len() as u64;
            let standing = q >= 1 && (q * q) as u128 * order as u128 <= (p as u128).pow(2);
            let first = pow2_le(64 * k as u64, order) && (k >= 1 || q >= 2);
            let second = if k >= 1 {
                let kf = k as f64;
                le(lg(q as f64) + lg_log_pow(q as f64, 4.0 * kf), (kf + 2.0) / 2.0 * lg(order as f64))?
            } else {
                false
            };
            standing && (first || second)
        }
        CheckId::TkSmallProd => {
            let a = members(params, "A");
            let b = members(params, "B");
            if k < 2 || a.len() < 2 || b.is_empty() {
                return Some(false);
            }
            let m = (product(p, &a, &b).len() as f64 / a.len() as f64).max(1.0);
            let kf = k as f64;
            let lhs = 16.0 * kf + 2f64.powf(kf + 1.0) * lg(m) + lg_log_pow(a.len() as f64, 8.0);
            le(lhs, lg(b.len() as f64))?
        }
        CheckId::QgEk => {
            let gamma = members(params, "Gamma");
            let q = members(params, "Q");
            if gamma.is_empty() || q.is_empty() {
                return Some(false);
            }
            let mut powers = vec![q.clone()];
            for _ in 0..=k {
                let next = product(p, powers.last().unwrap(), &gamma);
                powers.push(next);
            }
            let ku = k as usize;
            let q_k = if k >= 1 { powers[ku - 1].len() } else { q.len() } as u128;
            let g = gamma.len() as u128;
            powers[ku + 1].len() as u128 * powers[ku].len() as u128 * g <= (p as u128).pow(2) && q_k * g <= p as u128
        }
        CheckId::Abc => {
            let (a, b, c) = (members(params, "A"), members(params, "B"), members(params, "C"));
            if a.is_empty() || b.is_empty() || k < 1 {
                return Some(false);
            }
            let kf = k as f64;
            let (na, nb) = (a.len() as f64, b.len() as f64);
            let p_ok = le(lg(na) + (1.0 + (kf + 1.0) / 2f64.powf(kf) / (2.0 * (kf + 4.0))) * lg(nb), lg(p as f64))?;
            let lhs = lg(na) + lg_log_pow(na * nb, kf);
            let cond = le(lhs, (kf / 8.0 + 1.0 / (2.0 * (kf + 4.0))) * lg(nb))?;
            let cond_energy = le(lhs, (kf / 8.0 - 0.25 + 1.0 / (4.0 * (kf + 4.0))) * lg(nb))?;
            p_ok && (cond || (cond_energy && !c.is_empty()))
        }
        _ => unreachable!(),
    })
}

fn holds(report: &CheckReport, key: &str) -> bool {
    report.detail(&format!("holds.{key}")) == Some(&Value::Bool(true))
}

fn gate(report: &CheckReport, key: &str) -> bool {
    report.detail(&format!("gate.{key}")) == Some(&Value::Bool(true))
}

/// Reruns an admitted instance at its reported minimal constant and checks
/// that the conclusions it was admitted for still hold there.
fn holds_at_minimal_constant(spec: &CheckSpec, report: &CheckReport) {
    let c = match report.detail("minimal_c_star") {
        Some(Value::Rational(c)) => c.clone(),
        other => panic!("admitted instance without a minimal constant: {other:?} {:?}", spec.params),
    };
    assert!(c >= BigRational::from_integer(1.into()));
    let cfg = HarnessConfig { c_star: c, ..HarnessConfig::default() };
    let again = run_check(spec, &cfg).unwrap();
    match spec.check_id {
        CheckId::TkSubgroup | CheckId::TkSmallProd => assert!(holds(&again, "bound")),
        CheckId::QgEk => assert!(holds(&again, "branch_energy") || holds(&again, "branch_trivial")),
        CheckId::QShiftEk => {
            if gate(report, "size") && gate(report, "log_defined") {
                assert!(holds(&again, "first"), "{:?}", spec.params);
            }
            if gate(report, "choose_k") {
                assert!(holds(&again, "second"), "{:?}", spec.params);
            }
        }
        CheckId::Abc => assert_eq!(again.verdict, Verdict::Pass),
        _ => unreachable!(),
    }
}

fn audit(family: &InstanceFamily) -> (usize, usize, usize) {
    let cfg = HarnessConfig::default();
    let (mut seen, mut admitted_count, mut borderline) = (0, 0, 0);
    for check in GATED {
        for spec in family.instances(check) {
            let report = run_check(&spec, &cfg).unwrap();
            seen += 1;
            let Some(expected) = admitted(check, &spec.params) else {
                borderline += 1;
                continue;
            };
            let got = report.verdict != Verdict::HypothesisSkipped;
            assert_eq!(got, expected, "{} {:?} {:?}", check.name(), spec.params, report.details);
            if expected {
                admitted_count += 1;
                assert_eq!(report.verdict, Verdict::Pass, "{} {:?}", check.name(), spec.params);
                holds_at_minimal_constant(&spec, &report);
            }
        }
    }
    (seen, admitted_count, borderline)
}

#[test]
fn default_family_has_no_misclassified_gates() {
    let (seen, admitted, borderline) = audit(&InstanceFamily::new(FamilyKind::Default, 7));
    assert_eq!(borderline, 0);
    assert!(seen > 0 && admitted > 0);
}

#[test]
fn small_random_family_has_no_misclassified_gates() {
    let (_, admitted, borderline) = audit(&InstanceFamily::new(FamilyKind::SmallRandom, 11));
    assert_eq!(borderline, 0);
    assert!(admitted > 0);
}

#[test]
fn trivial_subgroup_is_skipped() {
    let params = Params::new().with("p", 7).with("order", 1).with("k", 2);
    let report = run_check(&CheckSpec::new(CheckId::TkSubgroup, params), &HarnessConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::HypothesisSkipped);
    assert!(!gate(&report, "size"));
}

#[test]
fn smallest_abc_instances_are_admitted() {
    for b in [vec![1], vec![1, 2]] {
        let params = Params::new()
            .with("p", 11)
            .with("A", Value::Set(vec![1]))
            .with("B", Value::Set(b))
            .with("C", Value::Set(vec![0, 3]))
            .with("alpha", 2)
            .with("k", 1);
        let report = run_check(&CheckSpec::new(CheckId::Abc, params), &HarnessConfig::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{:?}", report.details);
    }
}
