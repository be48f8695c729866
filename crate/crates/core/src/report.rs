//! Check reports and their JSON / CSV serialization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexValue {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for C64 {
    fn from(z: ComplexValue) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub paper_anchor: String,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_err: f64,
    pub tol: f64,
    pub status: Status,
    pub runtime_ms: u64,
}

impl CheckReport {
    /// Builds a report; non-finite errors count as failures.
    pub fn new(
        check_id: impl Into<String>,
        paper_anchor: impl Into<String>,
        lhs: C64,
        rhs: C64,
        tol: f64,
        runtime_ms: u64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let status = if abs_err.is_finite() && abs_err <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            check_id: check_id.into(),
            paper_anchor: paper_anchor.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_err,
            tol,
            status,
            runtime_ms,
        }
    }

    /// A check whose computation raised an error.
    pub fn errored(
        check_id: impl Into<String>,
        paper_anchor: impl Into<String>,
        tol: f64,
        runtime_ms: u64,
    ) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        Self::new(check_id, paper_anchor, nan, nan, tol, runtime_ms)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "check_id",
    "paper_anchor",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_err",
    "tol",
    "status",
    "runtime_ms",
];

pub fn to_json(reports: &[CheckReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::Config(e.to_string()))
}

pub fn to_csv(reports: &[CheckReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        w.write_record([
            r.check_id.clone(),
            r.paper_anchor.clone(),
            r.lhs.re.to_string(),
            r.lhs.im.to_string(),
            r.rhs.re.to_string(),
            r.rhs.im.to_string(),
            r.abs_err.to_string(),
            r.tol.to_string(),
            r.status.as_str().to_string(),
            r.runtime_ms.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}
