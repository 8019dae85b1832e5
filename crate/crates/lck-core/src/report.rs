//! Check reports: per-item residual polynomials with an overall verdict.

use crate::poly::{certifying_count, evaluation_oracle, find_witness, ScalarPoly};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Mixed outcome: some named sub-checks pass while others fail
    /// (the symplectic cocycle-pass / non-degeneracy-fail case).
    Split,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Split => "split",
            Verdict::Error => "error",
        };
        write!(f, "{s}")
    }
}

/// One checked location (a generator pair or triple, a matrix identity, ...).
///
/// `residuals` carries (component label, polynomial) pairs with the contract
/// that the item passes iff every residual is identically zero. Non-residual
/// payloads (determinants and similar diagnostics) go into `diagnostics`.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub location: String,
    pub pass: bool,
    pub residuals: Vec<(String, ScalarPoly)>,
    pub diagnostics: Vec<(String, ScalarPoly)>,
}

impl CheckItem {
    /// Item whose verdict is "all residuals vanish".
    pub fn residual(location: impl Into<String>, residuals: Vec<(String, ScalarPoly)>) -> Self {
        let pass = residuals.iter().all(|(_, p)| p.is_zero());
        CheckItem {
            location: location.into(),
            pass,
            residuals,
            diagnostics: Vec::new(),
        }
    }

    pub fn flag(location: impl Into<String>, pass: bool) -> Self {
        CheckItem {
            location: location.into(),
            pass,
            residuals: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn with_diagnostic(mut self, label: impl Into<String>, p: ScalarPoly) -> Self {
        self.diagnostics.push((label.into(), p));
        self
    }

    /// First nonzero residual, if any.
    pub fn failing_residual(&self) -> Option<&ScalarPoly> {
        self.residuals.iter().map(|(_, p)| p).find(|p| !p.is_zero())
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    /// Check kind, e.g. "lca-axioms".
    pub check: String,
    /// What was checked, e.g. an algebra name.
    pub subject: String,
    pub verdict: Verdict,
    pub items: Vec<CheckItem>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>, subject: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            subject: subject.into(),
            verdict: Verdict::Pass,
            items: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        if !item.pass && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
        self.items.push(item);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Absorb another report's items under a location prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut item in other.items {
            item.location = format!("{prefix}: {}", item.location);
            self.push(item);
        }
        for n in other.notes {
            self.notes.push(n);
        }
    }

    /// Marks the verdict split; used when named sub-checks disagree.
    pub fn mark_split(&mut self) {
        self.verdict = Verdict::Split;
    }

    pub fn mark_error(&mut self, msg: impl Into<String>) {
        self.verdict = Verdict::Error;
        self.notes.push(msg.into());
    }

    /// All residual polynomials in deterministic order.
    pub fn residuals(&self) -> impl Iterator<Item = &ScalarPoly> {
        self.items
            .iter()
            .flat_map(|i| i.residuals.iter().map(|(_, p)| p))
    }

    /// Runs the evaluation oracle on every residual at a certifying point
    /// count and checks that it agrees with the symbolic zero test.
    pub fn oracle_agrees(&self, seed: u64) -> bool {
        self.residuals().all(|p| {
            let symbolic_zero = p.is_identically_zero();
            let oracle_zero = evaluation_oracle(p, certifying_count(p), seed);
            symbolic_zero == oracle_zero
        })
    }

    /// Witness point for the first failing residual, if any.
    pub fn witness(&self, seed: u64) -> Option<(Vec<(String, i64)>, String)> {
        for item in &self.items {
            if let Some(p) = item.failing_residual() {
                if let Some((pt, val)) = find_witness(p, certifying_count(p), seed) {
                    return Some((pt, val.to_string()));
                }
            }
        }
        None
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}] {} {}", self.verdict, self.check, self.subject)?;
        for item in &self.items {
            if item.pass {
                continue;
            }
            writeln!(f, "  at {}:", item.location)?;
            for (label, p) in &item.residuals {
                if !p.is_zero() {
                    writeln!(f, "    {label}: {p}")?;
                }
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
