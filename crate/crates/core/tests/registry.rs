use sumprod_core::harness::{
    estimate_global_constant, instances, run_check, run_check_captured, summarize, sweep, CheckId, CheckSpec,
    FamilyKind, HarnessConfig, InstanceFamily, Mode, Params, Value, Verdict,
};
use sumprod_core::Error;

#[test]
fn every_check_runs_on_the_default_family() {
    let cfg = HarnessConfig::default();
    let family = InstanceFamily::new(FamilyKind::Default, 7);
    let reports = sweep(&family, &CheckId::ALL, &cfg);
    assert!(!reports.is_empty());
    for r in &reports {
        assert_ne!(r.verdict, Verdict::Error, "{} {:?}", r.check_id.name(), r.details);
        assert_ne!(r.verdict, Verdict::Fail, "{} {:?}", r.check_id.name(), r.details);
        match r.check_id.mode() {
            Mode::AssertExact => assert!(r.implied_constant.is_none()),
            Mode::EstimateConstant => {
                if r.verdict == Verdict::ReportOnly {
                    assert!(r.implied_constant.is_some_and(f64::is_finite), "{}", r.check_id.name());
                }
            }
        }
    }
    assert_eq!(summarize(&reports).len(), CheckId::ALL.len());
}

#[test]
fn same_seed_same_stream() {
    let cfg = HarnessConfig::default();
    let family = InstanceFamily::new(FamilyKind::SmallRandom, 3);
    let checks = [CheckId::Plunnecke, CheckId::QgEk, CheckId::Expander, CheckId::MishaInc];
    assert_eq!(instances(&family, &checks), instances(&family, &checks));
    assert_eq!(sweep(&family, &checks, &cfg), sweep(&family, &checks, &cfg));
    let other = InstanceFamily::new(FamilyKind::SmallRandom, 4);
    assert_ne!(instances(&family, &checks), instances(&other, &checks));
}

#[test]
fn empty_family() {
    let family = InstanceFamily::new(FamilyKind::Empty, 0);
    assert!(sweep(&family, &CheckId::ALL, &HarnessConfig::default()).is_empty());
    assert!(matches!(
        estimate_global_constant(CheckId::AaEnergy, &family, &HarnessConfig::default()),
        Err(Error::NoAdmissibleInstances)
    ));
}

#[test]
fn global_constants() {
    let cfg = HarnessConfig::default();
    let family = InstanceFamily::new(FamilyKind::SmallRandom, 7);
    let g = estimate_global_constant(CheckId::AaEnergy, &family, &cfg).unwrap();
    assert!(g.value > 0.0 && g.value.is_finite());
    assert!(g.family.starts_with("small-random"));
    assert!(matches!(estimate_global_constant(CheckId::EpIneq, &family, &cfg), Err(Error::NotEstimateMode(_))));
}

#[test]
fn errors_are_reported() {
    assert!(matches!(CheckId::parse("UNKNOWN"), Err(Error::UnknownCheck(_))));
    let cfg = HarnessConfig::default();
    let bad = CheckSpec::new(CheckId::EpIneq, Params::new().with("p", 7));
    assert!(matches!(run_check(&bad, &cfg), Err(Error::MalformedParams(_))));
    let captured = run_check_captured(&bad, &cfg);
    assert_eq!(captured.verdict, Verdict::Error);

    let wrong_mode = CheckSpec { mode: Mode::EstimateConstant, ..CheckSpec::new(CheckId::EpIneq, Params::new()) };
    assert!(run_check(&wrong_mode, &cfg).is_err());
}

#[test]
fn ep_ineq_example() {
    let params =
        Params::new().with("p", 7).with("A", Value::Set(vec![1, 2, 4])).with("P", Value::Set(vec![1, 3])).with("k", 2);
    let r = run_check(&CheckSpec::new(CheckId::EpIneq, params), &HarnessConfig::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn two_thirds_chain_on_subgroups() {
    let cfg = HarnessConfig::default();
    let family = InstanceFamily { p_max: Some(211), ..InstanceFamily::new(FamilyKind::Subgroups, 7) };
    let reports = sweep(&family, &[CheckId::TwoThirds], &cfg);
    assert!(reports.len() > 10);
    for r in &reports {
        assert!(matches!(r.verdict, Verdict::ReportOnly | Verdict::HypothesisSkipped), "{:?}", r.details);
        if r.verdict == Verdict::ReportOnly {
            assert_eq!(r.detail("within_ceiling"), Some(&Value::Bool(true)));
        }
    }
}

#[test]
fn misha_full_grid_at_two() {
    use sumprod_core::field::Prime;
    use sumprod_core::incidence::{PlaneSet, PointSet3};
    let p = Prime::new(2).unwrap();
    let params = Params::new()
        .with("p", 2)
        .with("points", Value::Points(PointSet3::full(p).points().to_vec()))
        .with("planes", Value::Planes(PlaneSet::full(p).planes().to_vec()));
    let r = run_check(&CheckSpec::new(CheckId::MishaInc, params), &HarnessConfig::default()).unwrap();
    assert_eq!(r.detail("max_collinear"), Some(&Value::Int(2)));
    let c = r.implied_constant.unwrap();
    assert!((c - 56.0 / (32.0 + 8f64.powf(1.5) + 16.0)).abs() < 1e-12);
}
