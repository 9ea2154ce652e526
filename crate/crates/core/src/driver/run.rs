use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::element::units;
use crate::factor::{BoundaryError, FactorLab, HfdVerdict};
use crate::forms::class_group;
use crate::ideal::{class_number_by_ideals, primes_above, SplittingType};
use crate::order::QuadraticOrder;
use crate::overring::{intermediate_orders, CheckStatus, OverringContext, OverringError, OverringReport};
use crate::scalar::factor_u64;

use super::config::{AnalysisConfig, CheckKind};
use super::report::{
    overall_status, CheckResult, ClassGroupCheck, ElasticityRepr, Report, ResultStatus, Timing, Unstable,
    SCHEMA_VERSION, TOOL_VERSION,
};

/// Runs every configured check on every order on a pool of `config.jobs`
/// threads. Results come back in configuration order whatever the schedule.
pub fn run_analysis(config: &AnalysisConfig) -> Report {
    let start = Instant::now();
    let jobs: Vec<(QuadraticOrder, CheckKind)> =
        config.orders.iter().flat_map(|o| config.checks.iter().map(move |c| (*o, *c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build().expect("thread pool");
    let outcomes: Vec<(CheckResult, f64)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(order, check)| {
                let t = Instant::now();
                let result = run_guarded(config, order, check);
                (result, t.elapsed().as_secs_f64())
            })
            .collect()
    });
    let timings = outcomes
        .iter()
        .map(|(r, s)| Timing { order: r.order, check: r.check, seconds: *s })
        .collect();
    let results: Vec<CheckResult> = outcomes.into_iter().map(|(r, _)| r).collect();
    Report {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        config: config.echo(),
        overall_status: overall_status(&results),
        results,
        unstable: Unstable {
            jobs: config.jobs,
            format: config.format,
            total_seconds: start.elapsed().as_secs_f64(),
            timings,
        },
    }
}

/// One check, with panics turned into an ERROR result.
pub fn run_guarded(config: &AnalysisConfig, order: QuadraticOrder, check: CheckKind) -> CheckResult {
    let bound = bound_for(config, check);
    match catch_unwind(AssertUnwindSafe(|| run_check(order, check, bound))) {
        Ok(r) => r,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            CheckResult::failed(order.id(), check, bound, format!("internal error: {msg}"))
        }
    }
}

fn bound_for(config: &AnalysisConfig, check: CheckKind) -> u64 {
    match check {
        CheckKind::Uic | CheckKind::Bandaid => config.sweep_bound,
        _ => config.norm_bound,
    }
}

pub fn run_check(order: QuadraticOrder, check: CheckKind, bound: u64) -> CheckResult {
    let mut out = CheckResult::new(order.id(), check, bound);
    match check {
        CheckKind::Hfd => hfd(order, bound, &mut out),
        CheckKind::Elasticity => elasticity(order, bound, &mut out),
        CheckKind::ClassGroup => class_group_check(order, &mut out),
        _ => {
            let ctx = OverringContext::<BigInt>::new(order);
            let reports: Result<Vec<OverringReport>, OverringError> = match check {
                CheckKind::BoundaryZero => ctx.boundary_zero_scan(bound).map(|r| vec![r]),
                CheckKind::Profile => intermediate_orders(order)
                    .into_iter()
                    .map(|t| ctx.irreducible_boundary_profile(t, bound))
                    .collect(),
                CheckKind::Bandaid => ctx.bandaid_check(bound).map(|r| vec![r]),
                CheckKind::Uic => ctx.uic_check(bound).map(|r| vec![r]),
                CheckKind::Squeeze => ctx.squeeze_verify(bound).map(|r| vec![r]),
                _ => unreachable!(),
            };
            match reports {
                Ok(reports) => overring(reports, &mut out),
                Err(OverringError::Boundary(e @ BoundaryError::UncertifiedDomain { .. })) => {
                    out.status = ResultStatus::Inapplicable;
                    out.summary = e.to_string();
                }
                Err(e) => return CheckResult::failed(order.id(), check, bound, e.to_string()),
            }
        }
    }
    out
}

fn overring(reports: Vec<OverringReport>, out: &mut CheckResult) {
    let worst = reports.iter().map(|r| r.status).max_by_key(|s| match s {
        CheckStatus::Verified => 0,
        CheckStatus::Vacuous => 1,
        CheckStatus::Refuted => 2,
    });
    out.status = worst.map_or(ResultStatus::Verified, ResultStatus::from);
    out.summary = reports
        .iter()
        .map(|r| {
            let mut s = format!("{} in {}: {}", r.statement, r.over, r.status);
            if !r.notes.is_empty() {
                s.push_str(&format!(" ({})", r.notes.join("; ")));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" | ");
    if !reports.iter().all(OverringReport::replay) {
        out.status = ResultStatus::Error;
        out.error = Some("a refuting witness failed to replay".into());
    }
    out.reports = reports;
}

fn hfd(order: QuadraticOrder, bound: u64, out: &mut CheckResult) {
    let lab = FactorLab::<BigInt>::new(order, u64::MAX);
    let cert = match lab.hfd_certify(bound) {
        Ok(c) => c,
        Err(e) => {
            *out = CheckResult::failed(order.id(), CheckKind::Hfd, bound, e.to_string());
            return;
        }
    };
    let replays = cert.witness.as_ref().is_none_or(|w| w.replay());
    let consistent = cert.is_hfd() == cert.witness.is_none();
    out.status = if replays && consistent { ResultStatus::Verified } else { ResultStatus::Refuted };
    let verdict = serde_json::to_value(cert.verdict).expect("unit variant");
    out.summary = match (&cert.witness, cert.verdict) {
        (Some(w), _) => format!("{} witness {} lengths {}, {}", verdict.as_str().unwrap(), w.element, w.short.len(), w.long.len()),
        (None, HfdVerdict::HfdUpToBound) => format!("HFD_UP_TO_BOUND {}", cert.bound),
        (None, _) => verdict.as_str().unwrap().to_string(),
    };
    out.certificate = Some(cert.repr());
}

fn elasticity(order: QuadraticOrder, bound: u64, out: &mut CheckResult) {
    let lab = FactorLab::<BigInt>::new(order, u64::MAX);
    match lab.elasticity_up_to(bound) {
        Ok(e) => {
            let value = format!("{}/{}", e.value.numer(), e.value.denom());
            let replays = e.witness.as_ref().is_none_or(|w| w.replay());
            out.status = if replays { ResultStatus::Verified } else { ResultStatus::Refuted };
            out.summary = format!("elasticity {value} up to norm {bound}");
            out.elasticity = Some(ElasticityRepr { bound, value, witness: e.witness.as_ref().map(|w| w.repr()) });
        }
        Err(e) => *out = CheckResult::failed(order.id(), CheckKind::Elasticity, bound, e.to_string()),
    }
}

/// `h(Z + f·O_K) = h_K · f · Π_{p | f} (1 − χ(p)/p) / [O_K^× : O^×]`.
pub fn class_number_by_conductor(order: QuadraticOrder) -> u64 {
    let d = order.maximal_order();
    let mut h = class_number_by_ideals(d);
    for (p, e) in factor_u64(order.f() as u64) {
        let factor = match primes_above::<i64>(d, p).kind {
            SplittingType::Split => p - 1,
            SplittingType::Inert => p + 1,
            SplittingType::Ramified => p,
        };
        h *= p.pow(e - 1) * factor;
    }
    let index = (units::<i64>(d).len() / units::<i64>(order).len()) as u64;
    h / index
}

fn class_group_check(order: QuadraticOrder, out: &mut CheckResult) {
    let info = class_group(order);
    let recount = if order.is_maximal() { class_number_by_ideals(order) } else { class_number_by_conductor(order) };
    out.status = if recount == info.h { ResultStatus::Verified } else { ResultStatus::Refuted };
    out.summary = format!("h = {} (recount {recount}), invariants {:?}", info.h, info.invariants);
    out.class_group = Some(ClassGroupCheck { info, recount });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::config::{parse_config, OutputFormat};
    use crate::order::make_order;

    fn config(orders: &[(i64, i64)], checks: &[CheckKind], bound: u64) -> AnalysisConfig {
        AnalysisConfig {
            orders: orders.iter().map(|&(d, f)| make_order(d, f).unwrap()).collect(),
            norm_bound: bound,
            sweep_bound: bound.min(200),
            checks: checks.to_vec(),
            format: OutputFormat::Json,
            jobs: 2,
        }
    }

    #[test]
    fn squeeze_on_eisenstein_suborder() {
        let report = run_analysis(&config(&[(-3, 2)], &[CheckKind::Squeeze], 10_000));
        assert_eq!(report.results[0].status, ResultStatus::Verified);
        assert_eq!(report.overall_status, ResultStatus::Verified);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn non_hfd_certificate_in_report() {
        let report = run_analysis(&config(&[(-14, 1)], &[CheckKind::Hfd], 100));
        let r = &report.results[0];
        assert_eq!(r.status, ResultStatus::Verified);
        let cert = r.certificate.as_ref().unwrap();
        assert_eq!(cert.verdict, HfdVerdict::NotHfd);
        let w = cert.witness.as_ref().unwrap();
        assert_eq!(w.element.a, "81");
        assert_eq!(w.lengths, [2, 4]);
    }

    #[test]
    fn empty_check_set_rejected_upstream() {
        let err = parse_config("norm_bound = 10\nchecks = []\n[[orders]]\nd = -3\n").unwrap_err();
        assert_eq!(err.issues[0].field, "checks");
    }

    #[test]
    fn uncertified_orders_are_inapplicable() {
        let report = run_analysis(&config(&[(-14, 1)], &[CheckKind::BoundaryZero], 100));
        assert_eq!(report.results[0].status, ResultStatus::Inapplicable);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn class_numbers_agree_with_conductor_formula() {
        for d in [-1i64, -2, -3, -5, -7, -11, -14, -15, -23] {
            for f in 1..=12 {
                let o = make_order(d, f).unwrap();
                assert_eq!(class_number_by_conductor(o), class_group(o).h, "{o}");
            }
        }
    }

    #[test]
    fn results_follow_configuration_order() {
        let cfg = config(&[(-1, 1), (-3, 2)], &[CheckKind::ClassGroup, CheckKind::Elasticity], 50);
        let report = run_analysis(&cfg);
        let keys: Vec<(i64, i64, CheckKind)> =
            report.results.iter().map(|r| (r.order.d, r.order.f, r.check)).collect();
        assert_eq!(
            keys,
            vec![
                (-1, 1, CheckKind::ClassGroup),
                (-1, 1, CheckKind::Elasticity),
                (-3, 2, CheckKind::ClassGroup),
                (-3, 2, CheckKind::Elasticity),
            ]
        );
        assert_eq!(report.unstable.timings.len(), 4);
    }
}
