//! Report types shared by all law and theorem checkers. Failures always
//! carry a human-readable witness so they can be reproduced.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a single law within a suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub passed: bool,
    /// Witness of the first violation (inputs and, where useful, both sides).
    pub witness: Option<String>,
}

impl LawResult {
    pub fn pass(law: impl Into<String>) -> Self {
        LawResult {
            law: law.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(law: impl Into<String>, witness: impl Into<String>) -> Self {
        LawResult {
            law: law.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }
}

/// A named collection of law results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LawReport {
    pub subject: String,
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> Self {
        LawReport {
            subject: subject.into(),
            results: Vec::new(),
        }
    }

    pub fn push(&mut self, result: LawResult) {
        self.results.push(result);
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&LawResult> {
        self.results.iter().find(|r| !r.passed)
    }

    pub fn merge(&mut self, other: LawReport) {
        for mut r in other.results {
            r.law = format!("{}: {}", other.subject, r.law);
            self.results.push(r);
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.subject)?;
        for r in &self.results {
            let status = if r.passed { "ok" } else { "FAIL" };
            match &r.witness {
                Some(w) => writeln!(f, "  {:<50} {status}  ({w})", r.law)?,
                None => writeln!(f, "  {:<50} {status}", r.law)?,
            }
        }
        Ok(())
    }
}

/// Verdict of a theorem-level check on a concrete instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Report of one theorem-level check (separation, expressivity, invariance,
/// the appendix demo, ...). `witness` is present exactly on failure and
/// describes the state pair / formula / word / diagram edge that broke.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    /// Description of the instance (preset, seed, machine or states).
    pub instance: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Per-depth numeric breakdown where applicable, rendered as strings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_depth: Option<Vec<String>>,
}

impl CheckReport {
    pub fn pass(check: impl Into<String>, instance: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            instance: instance.into(),
            verdict: Verdict::Pass,
            witness: None,
            per_depth: None,
        }
    }

    pub fn fail(
        check: impl Into<String>,
        instance: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        CheckReport {
            check: check.into(),
            instance: instance.into(),
            verdict: Verdict::Fail,
            witness: Some(witness.into()),
            per_depth: None,
        }
    }

    pub fn with_per_depth(mut self, rows: Vec<String>) -> Self {
        self.per_depth = Some(rows);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        write!(f, "{status} {} [{}]", self.check, self.instance)?;
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        if let Some(rows) = &self.per_depth {
            for row in rows {
                write!(f, "\n    {row}")?;
            }
        }
        Ok(())
    }
}
