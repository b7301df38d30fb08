//! Check records and the JSON report.

use serde::Serialize;

use crate::form::{equal_numeric, FormExpr, Verdict, Witness};
use crate::lie::LieBackend;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// What a check asserts about its comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    /// The two sides agree.
    Equal,
    /// The two sides differ (mutation controls).
    Distinct,
    /// A rank or dimension condition.
    Rank,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub anchor: String,
    pub expect: Expect,
    pub status: Status,
    pub worst_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl Check {
    /// A check passing iff the verdict is `equal`.
    pub fn equal(suite: &str, name: &str, anchor: &str, v: Verdict) -> Self {
        Self {
            suite: suite.into(),
            name: name.into(),
            anchor: anchor.into(),
            expect: Expect::Equal,
            status: if v.equal { Status::Pass } else { Status::Fail },
            worst_residual: v.worst_residual,
            witness: v.witness,
            detail: None,
        }
    }

    /// A mutation control: passes iff the verdict is unequal and carries a witness.
    pub fn distinct(suite: &str, name: &str, anchor: &str, v: Verdict) -> Self {
        let detected = !v.equal && v.witness.is_some();
        Self {
            suite: suite.into(),
            name: name.into(),
            anchor: anchor.into(),
            expect: Expect::Distinct,
            status: if detected { Status::Pass } else { Status::Fail },
            worst_residual: v.worst_residual,
            witness: v.witness,
            detail: None,
        }
    }

    pub fn custom(suite: &str, name: &str, anchor: &str, expect: Expect, status: Status, residual: f64) -> Self {
        Self {
            suite: suite.into(),
            name: name.into(),
            anchor: anchor.into(),
            expect,
            status,
            worst_residual: residual,
            witness: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }

    /// Turns an evaluation error into a failing check rather than aborting the run.
    pub fn error(suite: &str, name: &str, anchor: &str, err: impl std::fmt::Display) -> Self {
        Self::custom(suite, name, anchor, Expect::Equal, Status::Fail, f64::NAN)
            .with_detail(serde_json::json!({ "error": err.to_string() }))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Sampling parameters shared by the checks of a suite.
#[derive(Debug, Clone, Copy)]
pub struct Sampling {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Sampling {
    pub fn new(trials: usize, tol: f64, seed: u64) -> Self {
        Self { trials, tol, seed }
    }

    /// Same parameters with the seed advanced by `k`.
    pub fn offset(&self, k: u64) -> Self {
        Self { seed: self.seed.wrapping_add(k.wrapping_mul(0x9e37_79b9)), ..*self }
    }
}

/// Numeric comparison of two forms as a check with the given expectation.
pub fn compare_forms(
    at: (&str, &str, &str),
    expect: Expect,
    lhs: &FormExpr,
    rhs: &FormExpr,
    backend: &LieBackend,
    s: Sampling,
) -> Check {
    let (suite, name, anchor) = at;
    match equal_numeric(lhs, rhs, backend, s.trials, s.tol, s.seed) {
        Ok(v) if expect == Expect::Distinct => undetectable_on(backend, Check::distinct(suite, name, anchor, v)),
        Ok(v) => Check::equal(suite, name, anchor, v),
        Err(e) => Check::error(suite, name, anchor, e),
    }
}

/// A mutation control that cannot fail on an abelian backend, where the mutated
/// identity holds, is reported as inconclusive.
pub fn undetectable_on(backend: &LieBackend, c: Check) -> Check {
    if c.expect == Expect::Distinct && !c.passed() && backend.is_abelian() {
        let mut c = c;
        c.status = Status::Inconclusive;
        c.with_detail(serde_json::json!({ "note": "mutation is an identity on an abelian Lie algebra" }))
    } else {
        c
    }
}

/// `e = 0` as a check.
pub fn vanishes(at: (&str, &str, &str), e: &FormExpr, backend: &LieBackend, s: Sampling) -> Check {
    compare_forms(at, Expect::Equal, e, &FormExpr::zero(e.shape()), backend, s)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfigEcho {
    pub suite: String,
    pub backend: String,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub config: RunConfigEcho,
    pub pairing_normalization: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfigEcho, pairing_normalization: String, checks: Vec<Check>) -> Self {
        let mut summary = Summary { total: checks.len(), ..Default::default() };
        for c in &checks {
            match c.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Inconclusive => summary.inconclusive += 1,
            }
        }
        Self { schema: SCHEMA_VERSION, config, pairing_normalization, checks, summary }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

