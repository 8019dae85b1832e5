//! Machine-readable reports: one JSON object per check, emitted as JSON
//! lines. Field order is fixed by the struct definitions, so reports are
//! byte-identical across runs with the same seed (`millis` is null unless
//! timing is explicitly requested, which trades determinism for wall-clock
//! data). Schema documented in docs/report-schema.md, version 1.

use crate::workspace::CheckOutcome;
use serde::Serialize;

#[derive(Serialize)]
pub struct JsonResidual {
    pub location: String,
    pub component: String,
    pub kind: &'static str,
    pub poly: String,
}

#[derive(Serialize)]
pub struct JsonWitness {
    pub point: Vec<(String, i64)>,
    pub value: String,
}

#[derive(Serialize)]
pub struct JsonOracle {
    pub points: u32,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct JsonReport {
    pub schema: u32,
    pub check: String,
    pub subject: String,
    pub verdict: String,
    pub residuals: Vec<JsonResidual>,
    pub witness: Option<JsonWitness>,
    pub millis: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<JsonOracle>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn to_json(outcome: &CheckOutcome, seed: u64, with_timing: bool) -> JsonReport {
    let report = &outcome.report;
    let mut residuals = Vec::new();
    for item in &report.items {
        for (component, poly) in &item.residuals {
            if !poly.is_zero() {
                residuals.push(JsonResidual {
                    location: item.location.clone(),
                    component: component.clone(),
                    kind: "residual",
                    poly: poly.to_string(),
                });
            }
        }
        for (component, poly) in &item.diagnostics {
            residuals.push(JsonResidual {
                location: item.location.clone(),
                component: component.clone(),
                kind: "diagnostic",
                poly: poly.to_string(),
            });
        }
    }
    let witness = report
        .witness(seed)
        .map(|(point, value)| JsonWitness { point, value });
    JsonReport {
        schema: 1,
        check: report.check.clone(),
        subject: report.subject.clone(),
        verdict: report.verdict.to_string(),
        residuals,
        witness,
        millis: if with_timing {
            Some(outcome.millis)
        } else {
            None
        },
        oracle: outcome.oracle.as_ref().map(|o| JsonOracle {
            points: o.points,
            agrees: o.agrees,
        }),
        notes: report.notes.clone(),
    }
}
