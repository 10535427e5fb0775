//! The JSON envelope shared by every workbench command.
//!
//! Field names are stable: `verb`, `space`, `point`, the optional sections
//! `internal {dim, basis}`, `external {dim, presentation, orders}` and
//! `beta {rank, injective, surjective, matrix}`, a free-form `details` value, and
//! `provenance {paper_row}`.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Matrix, QuadNumber};
use crate::external::BetaReport;
use crate::external::ExternalTangentReport;
use crate::internal::TangentSpaceReport;
use crate::space::{format_point, Space};
use crate::table::paper_row;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InternalSection {
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExternalSection {
    pub dim: usize,
    pub presentation: String,
    pub orders: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaSection {
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_row: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub verb: String,
    pub space: String,
    pub point: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub internal: Option<InternalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub external: Option<ExternalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    pub provenance: Provenance,
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

impl Report {
    pub fn new(verb: &str, space: &Space, point: &[QuadNumber]) -> Self {
        Self {
            verb: verb.to_string(),
            space: space.to_string(),
            point: format_point(point),
            internal: None,
            external: None,
            beta: None,
            details: None,
            provenance: Provenance {
                paper_row: paper_row(space, point).map(str::to_string),
            },
        }
    }

    pub fn with_internal(mut self, r: &TangentSpaceReport) -> Self {
        self.internal = Some(InternalSection {
            dim: r.dim,
            basis: r.basis.clone(),
        });
        self
    }

    pub fn with_external(mut self, r: &ExternalTangentReport) -> Self {
        self.external = Some(ExternalSection {
            dim: r.dim,
            presentation: r.presentation.to_string(),
            orders: [r.truncation_orders_checked.0, r.truncation_orders_checked.1],
        });
        self
    }

    pub fn with_beta(self, b: &BetaReport) -> Self {
        let mut out = self.with_internal(&b.internal).with_external(&b.external);
        out.beta = Some(BetaSection {
            rank: b.rank,
            injective: b.injective,
            surjective: b.surjective,
            matrix: matrix_strings(&b.matrix),
        });
        out
    }

    /// Attaches a verb-specific value.
    pub fn with_details<T: Serialize>(mut self, details: &T) -> Self {
        self.details =
            Some(serde_json::to_value(details).expect("workbench values serialize to JSON"));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize to JSON")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} at {}", self.verb, self.space, self.point)?;
        if let Some(i) = &self.internal {
            writeln!(f, "  internal: dim {} basis [{}]", i.dim, i.basis.join(", "))?;
        }
        if let Some(e) = &self.external {
            writeln!(
                f,
                "  external: dim {} from {} (orders {} and {})",
                e.dim, e.presentation, e.orders[0], e.orders[1]
            )?;
        }
        if let Some(b) = &self.beta {
            let rows: Vec<String> = b.matrix.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            writeln!(
                f,
                "  beta: rank {} injective {} surjective {} matrix [{}]",
                b.rank,
                b.injective,
                b.surjective,
                rows.join(", ")
            )?;
        }
        if let Some(row) = &self.provenance.paper_row {
            writeln!(f, "  table row: {row}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::external::comparison_beta;

    #[test]
    fn envelope_fields() {
        let s = Space::half_line();
        let b = comparison_beta(&s, &s.origin()).unwrap();
        let r = Report::new("beta", &s, &s.origin()).with_beta(&b);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["space"], "half_line");
        assert_eq!(v["point"], "(0)");
        assert_eq!(v["internal"]["dim"], 0);
        assert_eq!(v["external"]["dim"], 1);
        assert_eq!(v["beta"]["rank"], 0);
        assert_eq!(v["beta"]["injective"], true);
        assert_eq!(v["beta"]["surjective"], false);
        assert_eq!(v["beta"]["matrix"], serde_json::json!([[]]));
        assert!(v["provenance"]["paper_row"].as_str().unwrap().starts_with("[0, inf)"));
        assert!(r.to_string().contains("external: dim 1"));
    }

    #[test]
    fn provenance_is_omitted_off_table() {
        let s = Space::wedge(3).unwrap();
        let r = Report::new("tangent-internal", &s, &s.origin());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["provenance"], serde_json::json!({}));
        assert!(v.get("internal").is_none());
    }
}
