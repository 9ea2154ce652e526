use std::fmt;

use serde::{Deserialize, Serialize};

use crate::factor::{CertificateRepr, LengthWitnessRepr};
use crate::forms::ClassGroupInfo;
use crate::order::OrderId;
use crate::overring::{CheckStatus, OverringReport};

use super::config::{CheckKind, ConfigEcho, OutputFormat};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ResultStatus {
    Verified,
    Vacuous,
    /// The check needs a half-factorial order and the order is not one.
    Inapplicable,
    Refuted,
    Error,
}

impl ResultStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ResultStatus::Verified => "VERIFIED",
            ResultStatus::Vacuous => "VACUOUS",
            ResultStatus::Inapplicable => "INAPPLICABLE",
            ResultStatus::Refuted => "REFUTED",
            ResultStatus::Error => "ERROR",
        }
    }
}

impl From<CheckStatus> for ResultStatus {
    fn from(s: CheckStatus) -> Self {
        match s {
            CheckStatus::Verified => ResultStatus::Verified,
            CheckStatus::Vacuous => ResultStatus::Vacuous,
            CheckStatus::Refuted => ResultStatus::Refuted,
        }
    }
}

impl fmt::Display for ResultStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElasticityRepr {
    pub bound: u64,
    /// Reduced fraction `p/q`.
    pub value: String,
    pub witness: Option<LengthWitnessRepr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupCheck {
    #[serde(flatten)]
    pub info: ClassGroupInfo,
    /// Independent recount: ideal classes for maximal orders, the conductor
    /// formula otherwise.
    pub recount: u64,
}

/// Outcome of one check on one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub order: OrderId,
    pub check: CheckKind,
    pub status: ResultStatus,
    pub bound: u64,
    pub summary: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<OverringReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elasticity: Option<ElasticityRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    pub fn new(order: OrderId, check: CheckKind, bound: u64) -> Self {
        CheckResult {
            order,
            check,
            status: ResultStatus::Verified,
            bound,
            summary: String::new(),
            certificate: None,
            reports: Vec::new(),
            elasticity: None,
            class_group: None,
            error: None,
        }
    }

    pub fn failed(order: OrderId, check: CheckKind, bound: u64, message: String) -> Self {
        CheckResult {
            status: ResultStatus::Error,
            summary: message.clone(),
            error: Some(message),
            ..Self::new(order, check, bound)
        }
    }

    /// Replays every refuting witness carried by the embedded reports.
    pub fn replay(&self) -> bool {
        self.reports.iter().all(OverringReport::replay)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub order: OrderId,
    pub check: CheckKind,
    pub seconds: f64,
}

/// Scheduling-dependent data kept out of the deterministic section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unstable {
    pub jobs: usize,
    pub format: OutputFormat,
    pub total_seconds: f64,
    pub timings: Vec<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub results: Vec<CheckResult>,
    pub overall_status: ResultStatus,
    pub unstable: Unstable,
}

#[derive(Serialize)]
struct StableView<'a> {
    schema_version: u32,
    tool_version: &'a str,
    config: &'a ConfigEcho,
    results: &'a [CheckResult],
    overall_status: ResultStatus,
}

/// REFUTED if anything refuted, ERROR if anything failed, VERIFIED otherwise.
pub fn overall_status(results: &[CheckResult]) -> ResultStatus {
    if results.iter().any(|r| r.status == ResultStatus::Refuted) {
        ResultStatus::Refuted
    } else if results.iter().any(|r| r.status == ResultStatus::Error) {
        ResultStatus::Error
    } else {
        ResultStatus::Verified
    }
}

impl Report {
    /// Process exit code: 0 all clear, 1 refuted, 2 error.
    pub fn exit_code(&self) -> i32 {
        match self.overall_status {
            ResultStatus::Refuted => 1,
            ResultStatus::Error => 2,
            _ => 0,
        }
    }

    fn sorted(value: impl Serialize) -> serde_json::Value {
        // serde_json's default map is ordered, so a round trip through
        // `Value` sorts every object's keys
        serde_json::to_value(value).expect("report is serializable")
    }

    /// Canonical JSON of everything except timings and scheduling.
    pub fn stable_json(&self) -> String {
        let view = StableView {
            schema_version: self.schema_version,
            tool_version: &self.tool_version,
            config: &self.config,
            results: &self.results,
            overall_status: self.overall_status,
        };
        serde_json::to_string_pretty(&Self::sorted(view)).expect("report is serializable")
    }

    /// The whole document with sorted keys.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&Self::sorted(self)).expect("report is serializable")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    /// Strips the unstable section from a serialized report.
    pub fn stable_section(json: &str) -> serde_json::Result<String> {
        let mut v: serde_json::Value = serde_json::from_str(json)?;
        if let Some(map) = v.as_object_mut() {
            map.remove("unstable");
        }
        serde_json::to_string_pretty(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::make_order;

    fn result(status: ResultStatus) -> CheckResult {
        CheckResult { status, ..CheckResult::new(make_order(-3, 2).unwrap().id(), CheckKind::Squeeze, 10) }
    }

    fn report(statuses: &[ResultStatus]) -> Report {
        let results: Vec<CheckResult> = statuses.iter().map(|s| result(*s)).collect();
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.into(),
            config: ConfigEcho {
                orders: vec![make_order(-3, 2).unwrap()],
                norm_bound: 10,
                sweep_bound: 10,
                checks: vec![CheckKind::Squeeze],
            },
            overall_status: overall_status(&results),
            results,
            unstable: Unstable { jobs: 1, format: OutputFormat::Json, total_seconds: 0.5, timings: vec![] },
        }
    }

    #[test]
    fn exit_codes() {
        use ResultStatus::*;
        assert_eq!(report(&[Verified, Vacuous, Inapplicable]).exit_code(), 0);
        assert_eq!(report(&[Verified, Refuted]).exit_code(), 1);
        assert_eq!(report(&[Error, Verified]).exit_code(), 2);
        assert_eq!(report(&[Error, Refuted]).exit_code(), 1);
        assert_eq!(report(&[]).exit_code(), 0);
    }

    #[test]
    fn stable_section_ignores_timings() {
        let a = report(&[ResultStatus::Verified]);
        let mut b = a.clone();
        b.unstable.total_seconds = 99.0;
        b.unstable.jobs = 8;
        assert_eq!(a.stable_json(), b.stable_json());
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(Report::stable_section(&a.to_json()).unwrap(), a.stable_json());
        assert_eq!(Report::from_json(&a.to_json()).unwrap(), a);
    }
}
