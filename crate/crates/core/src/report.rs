//! Check results shared by every verification suite.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named check. Exact checks report `max_error = 0` on success and
/// carry the nonzero residual as witness on failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub check: String,
    pub status: Status,
    pub max_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Ordered collection of check results.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    results: Vec<CheckResult>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record an exact identity: `residual` is `None` when it vanished.
    pub fn exact(&mut self, suite: &str, check: impl Into<String>, residual: Option<String>) {
        let status = if residual.is_none() { Status::Pass } else { Status::Fail };
        self.results.push(CheckResult {
            suite: suite.to_string(),
            check: check.into(),
            status,
            max_error: if residual.is_none() { 0.0 } else { 1.0 },
            witness: residual,
        });
    }

    /// Record an exact check from an element that should be zero.
    pub fn zero<T: fmt::Display>(&mut self, suite: &str, check: impl Into<String>, residual: &T, is_zero: bool) {
        self.exact(suite, check, (!is_zero).then(|| residual.to_string()));
    }

    /// Record a numeric check against a tolerance. NaN errors fail.
    pub fn numeric(&mut self, suite: &str, check: impl Into<String>, max_error: f64, tol: f64, witness: Option<String>) {
        let ok = max_error <= tol;
        self.results.push(CheckResult {
            suite: suite.to_string(),
            check: check.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            max_error,
            witness: if ok { None } else { witness.or_else(|| Some(format!("error {max_error:e} > tol {tol:e}"))) },
        });
    }

    pub fn push(&mut self, r: CheckResult) {
        self.results.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.results.extend(other.results);
    }

    pub fn results(&self) -> &[CheckResult] {
        &self.results
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            write!(f, "{tag} {}/{} max_error={:e}", r.suite, r.check, r.max_error)?;
            if let Some(w) = &r.witness {
                write!(f, " witness: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
