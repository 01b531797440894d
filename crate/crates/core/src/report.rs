//! Structured pass/fail records for identity checks.

use std::collections::BTreeMap;
use std::fmt;

use coxfilt_algebra::{render_ratfunc, PolyMatrix, RatFunc};
use serde::Serialize;

use crate::derivations::Derivation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub label: String,
    pub identity: String,
    pub params: BTreeMap<String, usize>,
    pub status: Status,
    /// Canonical text of the offending entry or difference; empty on pass.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl VerificationReport {
    pub fn new(label: &str, identity: &str, params: &[(&str, usize)], outcome: Outcome) -> Self {
        VerificationReport {
            label: label.to_string(),
            identity: identity.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            status: if outcome.is_ok() { Status::Pass } else { Status::Fail },
            witness: outcome.err(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{status} {} {}", self.label, self.identity)?;
        if !params.is_empty() {
            write!(f, " [{}]", params.join(" "))?;
        }
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// `Ok` on pass, `Err(witness)` on failure.
pub type Outcome = Result<(), String>;

/// Combines outcomes, keeping the first witness.
pub fn all<I: IntoIterator<Item = Outcome>>(outcomes: I) -> Outcome {
    for o in outcomes {
        o?;
    }
    Ok(())
}

/// Compares two matrices exactly; the witness names the first differing
/// entry and the difference.
pub fn compare_matrices(what: &str, lhs: &PolyMatrix, rhs: &PolyMatrix) -> Outcome {
    if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
        return Err(format!("{what}: shape {}x{} vs {}x{}", lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols()));
    }
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            let (a, b) = (lhs.get(i, j), rhs.get(i, j));
            if a != b {
                return Err(format!("{what}: entry ({},{}) differs by {}", i + 1, j + 1, render_ratfunc(&(a - b), "X")));
            }
        }
    }
    Ok(())
}

/// Compares two families of derivations coefficient by coefficient.
pub fn compare_families(what: &str, lhs: &[Derivation], rhs: &[Derivation]) -> Outcome {
    if lhs.len() != rhs.len() {
        return Err(format!("{what}: {} vs {} derivations", lhs.len(), rhs.len()));
    }
    for (j, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        for i in 0..a.nvars() {
            if a.coeff(i) != b.coeff(i) {
                let diff: RatFunc = a.coeff(i) - b.coeff(i);
                return Err(format!(
                    "{what}: derivation {} coefficient of d/dX{} differs by {}",
                    j + 1,
                    i + 1,
                    render_ratfunc(&diff, "X")
                ));
            }
        }
    }
    Ok(())
}
