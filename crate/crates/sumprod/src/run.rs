//! Order-preserving parallel sweeps.

use std::time::Instant;

use rayon::prelude::*;
use sumprod_core::harness::{run_check_captured, CheckReport, CheckSpec, HarnessConfig, Verdict};

pub const THREADS_ENV: &str = "SUMPROD_THREADS";

pub fn default_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every spec on a pool of `threads` workers. Reports come back in
/// input order; `elapsed_ms` is filled only when `timings` is set so that
/// output stays byte-identical across runs.
pub fn run_parallel(specs: &[CheckSpec], config: &HarnessConfig, threads: usize, timings: bool) -> Vec<CheckReport> {
    let one = |spec: &CheckSpec| {
        let start = Instant::now();
        let mut report = run_check_captured(spec, config);
        if timings {
            report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        report
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool");
    pool.install(|| specs.par_iter().map(one).collect())
}

/// 1 on any failed exact assertion, 2 if an instance could not be evaluated.
pub fn exit_code(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else if reports.iter().any(|r| r.verdict == Verdict::Error) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sumprod_core::harness::{instances, sweep, CheckId, FamilyKind, InstanceFamily};

    #[test]
    fn parallel_matches_sequential() {
        let cfg = HarnessConfig::default();
        let family = InstanceFamily::new(FamilyKind::Default, 7);
        let checks = [CheckId::EpIneq, CheckId::TwoThirds, CheckId::QgEk];
        let specs = instances(&family, &checks);
        assert_eq!(run_parallel(&specs, &cfg, 4, false), sweep(&family, &checks, &cfg));
        assert!(run_parallel(&specs, &cfg, 2, true).iter().all(|r| r.elapsed_ms.is_some()));
    }

    #[test]
    fn exit_codes() {
        let cfg = HarnessConfig::default();
        let specs = instances(&InstanceFamily::new(FamilyKind::Default, 7), &[CheckId::EpIneq]);
        let mut reports = run_parallel(&specs, &cfg, 1, false);
        assert_eq!(exit_code(&reports), 0);
        reports[0].verdict = Verdict::Error;
        assert_eq!(exit_code(&reports), 2);
        reports[1].verdict = Verdict::Fail;
        assert_eq!(exit_code(&reports), 1);
        assert_eq!(exit_code(&[]), 0);
    }
}
