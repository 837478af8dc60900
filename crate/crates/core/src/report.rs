//! Text and JSON renderings of an invariant report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{CheckOutcome, InvariantReport, Status};
use crate::limits::{LimitGroup, LimitSummary};

/// Placeholder for K-groups above dimension three.
pub const UNSUPPORTED: &str = "unsupported";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad group {value:?} in {graded}[{degree}]: {reason}")]
    Group { graded: String, degree: String, value: String, reason: String },
    #[error("degree {0} does not fit in 64 bits")]
    DegreeTooLarge(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub anchor: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub manifold: String,
    pub degree: u64,
    /// Graded name to degree to rendered group.
    pub gradeds: BTreeMap<String, BTreeMap<String, String>>,
    pub checks: Vec<CheckRecord>,
}

fn graded_map(ls: &[LimitGroup]) -> BTreeMap<String, String> {
    ls.iter().enumerate().map(|(k, l)| (k.to_string(), l.to_string())).collect()
}

fn k_map(ls: &Option<Vec<LimitGroup>>) -> BTreeMap<String, String> {
    match ls {
        Some(ls) => graded_map(ls),
        None => (0..2).map(|k| (k.to_string(), UNSUPPORTED.to_string())).collect(),
    }
}

impl ReportDocument {
    pub fn new(report: &InvariantReport, checks: &[CheckOutcome]) -> Result<Self, ReportError> {
        let degree = u64::try_from(&report.degree).map_err(|_| ReportError::DegreeTooLarge(report.degree.to_string()))?;
        let mut gradeds = BTreeMap::new();
        gradeds.insert("stable_homology".to_string(), graded_map(&report.stable_homology));
        gradeds.insert("unstable_homology".to_string(), graded_map(&report.unstable_homology));
        gradeds.insert("cech_X".to_string(), graded_map(&report.cech_x));
        gradeds.insert("stable_K".to_string(), k_map(&report.stable_k));
        gradeds.insert("unstable_K".to_string(), k_map(&report.unstable_k));
        let checks = checks
            .iter()
            .map(|c| CheckRecord { name: c.name.clone(), status: c.status, anchor: c.anchor.clone(), detail: c.detail.clone() })
            .collect();
        Ok(ReportDocument { manifold: report.manifold.clone(), degree, gradeds, checks })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Parses a document, requiring every group string to be in canonical form.
    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        let doc: ReportDocument = serde_json::from_str(text)?;
        for (graded, degrees) in &doc.gradeds {
            for (degree, value) in degrees {
                if value == UNSUPPORTED {
                    continue;
                }
                let err = |reason: String| ReportError::Group {
                    graded: graded.clone(),
                    degree: degree.clone(),
                    value: value.clone(),
                    reason,
                };
                let parsed: LimitSummary = value.parse().map_err(|e: crate::abelian::AbelianError| err(e.to_string()))?;
                if &parsed.to_string() != value {
                    return Err(err(format!("not canonical, expected {parsed}")));
                }
            }
        }
        Ok(doc)
    }

    pub fn graded(&self, name: &str) -> Option<Vec<LimitSummary>> {
        self.gradeds.get(name)?.values().map(|v| v.parse().ok()).collect()
    }
}

fn graded_lines(out: &mut String, title: &str, ls: &[LimitGroup]) {
    let _ = writeln!(out, "{title}");
    for (k, l) in ls.iter().enumerate() {
        let raw = l.raw_display();
        let canonical = l.to_string();
        if raw == canonical {
            let _ = writeln!(out, "  {k}: {canonical}");
        } else {
            let _ = writeln!(out, "  {k}: {canonical}    raw: {raw}");
        }
    }
}

pub fn render_text(report: &InvariantReport, checks: &[CheckOutcome]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}, {}-fold cover (dimension {})", report.manifold, report.degree, report.dim);
    graded_lines(&mut out, "H_*(G^s)", &report.stable_homology);
    graded_lines(&mut out, "H_*(G^u)", &report.unstable_homology);
    graded_lines(&mut out, "H^*(X)", &report.cech_x);
    match (&report.stable_k, &report.unstable_k) {
        (Some(s), Some(u)) => {
            graded_lines(&mut out, "K_*(C*(G^s))", s);
            graded_lines(&mut out, "K_*(C*(G^u))", u);
        }
        _ => {
            let _ = writeln!(out, "K-theory: {UNSUPPORTED} above dimension three");
        }
    }
    let _ = writeln!(out, "checks");
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in checks {
        let _ = writeln!(out, "  {:<7} {:<width$}  {}  [{}]", c.status.to_string(), c.name, c.detail, c.anchor);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endomorphisms::builtin;
    use crate::invariants::{compute_report, run_checks};

    fn document(name: &str) -> ReportDocument {
        let e = builtin(name).unwrap();
        let r = compute_report(&e).unwrap();
        ReportDocument::new(&r, &run_checks(&e, &r, true)).unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        for name in crate::endomorphisms::BUILTIN_NAMES {
            let json = document(name).to_json();
            let again = ReportDocument::from_json(&json).unwrap().to_json();
            assert_eq!(json, again);
        }
    }

    #[test]
    fn klein_document_contents() {
        let doc = document("klein9");
        assert_eq!(doc.degree, 9);
        assert_eq!(doc.gradeds["stable_homology"]["0"], "Z[1/3]");
        assert_eq!(doc.gradeds["unstable_homology"]["1"], "Z[1/3] (+) Z/2");
        assert_eq!(doc.gradeds["cech_X"]["2"], "Z/2");
        let expected: Vec<LimitSummary> = ["Z[1/9]", "Z[1/3]", "Z/2"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(doc.graded("stable_homology").unwrap(), expected);
    }

    #[test]
    fn non_canonical_groups_are_rejected() {
        let json = document("klein9").to_json().replace("\"Z[1/3] (+) Z/2\"", "\"Z/2 (+) Z[1/9]\"");
        assert!(matches!(ReportDocument::from_json(&json), Err(ReportError::Group { .. })));
    }

    #[test]
    fn text_mentions_raw_forms() {
        let e = builtin("klein9").unwrap();
        let r = compute_report(&e).unwrap();
        let text = render_text(&r, &run_checks(&e, &r, false));
        assert!(text.contains("raw: Z[1/9]"));
        assert!(text.contains("degree_zero"));
    }
}
