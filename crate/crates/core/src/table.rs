//! The summary table of tangent-space dimensions, recomputed and compared cell by cell.

use std::fmt;

use serde::Serialize;

use crate::algebra::QuadNumber;
use crate::dsl::{parse_point, parse_space};
use crate::error::Result;
use crate::external::{external_tangent_at_order, DEFAULT_ORDER};
use crate::internal::{internal_tangent_with, CurveOptions};
use crate::space::{format_point, Family, Space};

/// Number of slopes supplied for the wire row.
pub const WIRE_SLOPES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Cell {
    Exact {
        expected: usize,
        computed: usize,
    },
    /// A finite certificate for an infinite-dimensional entry: `supplied` independent
    /// witnesses should yield `supplied + extra` classes.
    Certificate {
        supplied: usize,
        extra: usize,
        computed: usize,
        published_value: String,
    },
    OutOfScope {
        published_value: String,
        reason: String,
    },
}

impl Cell {
    pub fn passed(&self) -> bool {
        match self {
            Cell::Exact { expected, computed } => expected == computed,
            Cell::Certificate {
                supplied,
                extra,
                computed,
                ..
            } => *computed == supplied + extra,
            Cell::OutOfScope { .. } => true,
        }
    }

    pub fn is_in_scope(&self) -> bool {
        !matches!(self, Cell::OutOfScope { .. })
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Exact { expected, computed } if expected == computed => write!(f, "{computed}"),
            Cell::Exact { expected, computed } => {
                write!(f, "{computed} (expected {expected})")
            }
            Cell::Certificate {
                supplied,
                computed,
                published_value,
                ..
            } => write!(
                f,
                ">= {supplied} independent classes for the supplied {supplied} slopes \
                 ({computed} classes in all; published value: {published_value})"
            ),
            Cell::OutOfScope { published_value, .. } => write!(f, "out of scope ({published_value})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub name: String,
    pub space: Option<String>,
    pub point: Option<String>,
    pub internal: Cell,
    pub external: Cell,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.internal.passed() && self.external.passed()
    }

    /// Whether both cells are computed and compared.
    pub fn is_in_scope(&self) -> bool {
        self.internal.is_in_scope() && self.external.is_in_scope()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub passed: bool,
}

impl TableReport {
    /// One line per failing cell, empty when the table matches.
    pub fn diff(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (label, cell) in [("internal", &row.internal), ("external", &row.external)] {
                if !cell.passed() {
                    out.push(format!("{}: {label} {cell}", row.name));
                }
            }
        }
        out
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let status = if row.passed() { "ok" } else { "MISMATCH" };
            writeln!(f, "{status:8} {}", row.name)?;
            if let (Some(s), Some(p)) = (&row.space, &row.point) {
                writeln!(f, "         {s} at {p}")?;
            }
            writeln!(f, "         internal: {}", row.internal)?;
            writeln!(f, "         external: {}", row.external)?;
        }
        let in_scope = self.rows.iter().filter(|r| r.is_in_scope()).count();
        let ok = self.rows.iter().filter(|r| r.is_in_scope() && r.passed()).count();
        write!(f, "{ok}/{in_scope} in-scope rows reproduced")
    }
}

enum Expect {
    Exact(usize),
    Wire,
    OutOfScope(&'static str, &'static str),
}

struct RowSpec {
    name: &'static str,
    space: Option<&'static str>,
    point: &'static str,
    internal: Expect,
    external: Expect,
}

const ROWS: &[RowSpec] = &[
    RowSpec {
        name: "discrete diffeological space",
        space: Some("discrete(finite(3))"),
        point: "1",
        internal: Expect::Exact(0),
        external: Expect::Exact(0),
    },
    RowSpec {
        name: "indiscrete diffeological space",
        space: Some("indiscrete(real(2))"),
        point: "(1, -2)",
        internal: Expect::Exact(0),
        external: Expect::Exact(0),
    },
    RowSpec {
        name: "topological space with continuous diffeology",
        space: Some("continuous_line"),
        point: "1/2",
        internal: Expect::Exact(0),
        external: Expect::Exact(0),
    },
    RowSpec {
        name: "smooth manifold of dimension n",
        space: Some("euclidean(3)"),
        point: "(1, 0, -1/3)",
        internal: Expect::Exact(3),
        external: Expect::Exact(3),
    },
    RowSpec {
        name: "axes in R^2 with the pushout diffeology",
        space: Some("wedge(2)"),
        point: "origin",
        internal: Expect::Exact(2),
        external: Expect::Exact(2),
    },
    RowSpec {
        name: "axes in R^2 with the sub-diffeology",
        space: Some("axes_sub(2)"),
        point: "origin",
        internal: Expect::Exact(2),
        external: Expect::Exact(2),
    },
    RowSpec {
        name: "three lines intersecting at 0 in R^2 with the sub-diffeology",
        space: Some("lines_sub((1, 0), (0, 1), (1, 1))"),
        point: "origin",
        internal: Expect::Exact(3),
        external: Expect::Exact(3),
    },
    RowSpec {
        name: "R^n with wire diffeology (n >= 2)",
        space: Some("wire(2)"),
        point: "origin",
        internal: Expect::Wire,
        external: Expect::Exact(2),
    },
    RowSpec {
        name: "1-dimensional irrational torus",
        space: Some("irrational_torus(sqrt(2))"),
        point: "1/3",
        internal: Expect::Exact(1),
        external: Expect::Exact(0),
    },
    RowSpec {
        name: "quotient space R^n/O(n)",
        space: Some("orbit_quotient(3)"),
        point: "origin",
        internal: Expect::Exact(0),
        external: Expect::Exact(1),
    },
    RowSpec {
        name: "[0, inf) with the sub-diffeology of R",
        space: Some("half_line"),
        point: "0",
        internal: Expect::Exact(0),
        external: Expect::Exact(1),
    },
    RowSpec {
        name: "vector space V with fine diffeology",
        space: Some("fine_vector(3)"),
        point: "(1, 2, 0)",
        internal: Expect::Exact(3),
        external: Expect::OutOfScope(
            "blank",
            "no value is given for an arbitrary V; the finite-dimensional case is a manifold",
        ),
    },
    RowSpec {
        name: "diffeomorphism group of a compact smooth manifold M",
        space: None,
        point: "1_M",
        internal: Expect::OutOfScope(
            "smooth vector fields on M",
            "infinite-dimensional mapping spaces are not presented in the catalog",
        ),
        external: Expect::OutOfScope("blank", "no value is given"),
    },
];

/// The slopes `1, ..., WIRE_SLOPES` used for the wire row.
pub fn wire_slopes() -> Vec<QuadNumber> {
    (1..=WIRE_SLOPES as i64).map(QuadNumber::from_int).collect()
}

fn compute(spec: &RowSpec) -> Result<TableRow> {
    let parsed = match spec.space {
        Some(text) => {
            let space = parse_space(text)?;
            let point = parse_point(spec.point, Some(&space))?;
            Some((space, point))
        }
        None => None,
    };
    let internal = match (&spec.internal, &parsed) {
        (Expect::Exact(e), Some((s, p))) => Cell::Exact {
            expected: *e,
            computed: internal_tangent_with(s, p, &CurveOptions::default())?.dim,
        },
        (Expect::Wire, Some((s, p))) => Cell::Certificate {
            supplied: WIRE_SLOPES,
            extra: s.ambient_dim(),
            computed: internal_tangent_with(s, p, &CurveOptions::with_slopes(wire_slopes()))?.dim,
            published_value: "uncountable dimension".into(),
        },
        (Expect::OutOfScope(v, r), _) => Cell::OutOfScope {
            published_value: v.to_string(),
            reason: r.to_string(),
        },
        _ => unreachable!("every computed row names a space"),
    };
    let external = match (&spec.external, &parsed) {
        (Expect::Exact(e), Some((s, p))) => Cell::Exact {
            expected: *e,
            computed: external_tangent_at_order(s, p, DEFAULT_ORDER)?.dim,
        },
        (Expect::OutOfScope(v, r), _) => Cell::OutOfScope {
            published_value: v.to_string(),
            reason: r.to_string(),
        },
        _ => unreachable!("external cells are exact or out of scope"),
    };
    Ok(TableRow {
        name: spec.name.to_string(),
        space: parsed.as_ref().map(|(s, _)| s.to_string()),
        point: parsed.as_ref().map(|(_, p)| format_point(p)),
        internal,
        external,
    })
}

/// Recomputes every row; rows are independent and evaluated on separate threads.
pub fn run_table() -> Result<TableReport> {
    let rows: Vec<Result<TableRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ROWS.iter().map(|spec| scope.spawn(move || compute(spec))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(TableRow::passed);
    Ok(TableReport { rows, passed })
}

/// The table row describing `space` at `point`, if any.
pub fn paper_row(space: &Space, point: &[QuadNumber]) -> Option<&'static str> {
    let at_origin = space.is_singular_point(point);
    let name = match space.family() {
        Family::Discrete(_) => ROWS[0].name,
        Family::Indiscrete(_) => ROWS[1].name,
        Family::ContinuousLine => ROWS[2].name,
        Family::Euclidean(_) => ROWS[3].name,
        Family::WedgeOfLines(2) if at_origin => ROWS[4].name,
        Family::AxesSub(2) if at_origin => ROWS[5].name,
        Family::LinesThroughOriginSub(d) if d.len() == 3 && at_origin => ROWS[6].name,
        Family::Generated { n, k: 1 } if *n >= 2 => ROWS[7].name,
        Family::IrrationalTorus(_) => ROWS[8].name,
        Family::OrbitQuotient(_) if at_origin => ROWS[9].name,
        Family::HalfLineSub if at_origin => ROWS[10].name,
        Family::FineVector(_) => ROWS[11].name,
        _ => return None,
    };
    Some(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row<'a>(t: &'a TableReport, prefix: &str) -> &'a TableRow {
        t.rows.iter().find(|r| r.name.starts_with(prefix)).unwrap()
    }

    #[test]
    fn table_matches() {
        let t = run_table().unwrap();
        assert!(t.passed, "{}", t.diff().join("\n"));
        assert!(t.diff().is_empty());
        assert_eq!(t.rows.iter().filter(|r| r.is_in_scope()).count(), 11);
        let torus = row(&t, "1-dimensional");
        assert_eq!(torus.internal, Cell::Exact { expected: 1, computed: 1 });
        assert_eq!(torus.external, Cell::Exact { expected: 0, computed: 0 });
        let half = row(&t, "[0, inf)");
        assert_eq!(half.internal, Cell::Exact { expected: 0, computed: 0 });
        assert_eq!(half.external, Cell::Exact { expected: 1, computed: 1 });
        let three = row(&t, "three lines");
        assert_eq!(three.internal, Cell::Exact { expected: 3, computed: 3 });
        assert_eq!(three.external, Cell::Exact { expected: 3, computed: 3 });
        match &row(&t, "R^n with wire").internal {
            Cell::Certificate { computed, .. } => assert_eq!(*computed, 22),
            other => panic!("{other:?}"),
        }
        assert!(!row(&t, "diffeomorphism").internal.is_in_scope());
        assert!(!row(&t, "vector space V").external.is_in_scope());
    }

    #[test]
    fn mismatches_are_reported() {
        let bad = TableReport {
            rows: vec![TableRow {
                name: "r".into(),
                space: None,
                point: None,
                internal: Cell::Exact { expected: 1, computed: 2 },
                external: Cell::Exact { expected: 0, computed: 0 },
            }],
            passed: false,
        };
        assert_eq!(bad.diff(), vec!["r: internal 2 (expected 1)".to_string()]);
    }

    #[test]
    fn rows_are_found_by_space() {
        let w = Space::wedge(2).unwrap();
        assert_eq!(paper_row(&w, &w.origin()), Some(ROWS[4].name));
        assert_eq!(paper_row(&w, &[QuadNumber::one(), QuadNumber::zero()]), None);
        assert_eq!(paper_row(&Space::wedge(3).unwrap(), &Space::wedge(3).unwrap().origin()), None);
    }
}
