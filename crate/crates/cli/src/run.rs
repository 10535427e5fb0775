use std::fs;

use diffeo_tangent::algebra::QuadNumber;
use diffeo_tangent::bundle::{
    check_fibrewise_ops, fine_check, BundleReason, group_trivialization, membership, BundlePlotCandidate,
    Diffeology, FineVerdict, SmoothnessReport,
};
use diffeo_tangent::dsl::{parse_candidate, parse_numbers, parse_point, parse_space};
use diffeo_tangent::external::{comparison_beta_with, external_tangent_at_order};
use diffeo_tangent::internal::{internal_tangent_with, CurveOptions};
use diffeo_tangent::report::Report;
use diffeo_tangent::space::{Family, Space};
use diffeo_tangent::table::run_table;
use diffeo_tangent::Error;
use serde_json::json;

use crate::{Cli, Format, Verb};

pub struct Outcome {
    pub output: String,
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::PointNotInSpace { .. }
            | Error::MixedDiscriminants(..)
            | Error::InvalidDiscriminant(_)
            | Error::MalformedCandidate(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn is_wire(space: &Space) -> bool {
    matches!(space.family(), Family::Generated { k: 1, .. })
}

/// Option checks that depend on the verb and the parsed space.
fn validate(cli: &Cli, space: Option<&Space>) -> Result<Vec<QuadNumber>, Failure> {
    let uses_slopes = matches!(cli.verb, Verb::TangentInternal { .. } | Verb::Beta { .. });
    let uses_order = matches!(cli.verb, Verb::TangentExternal { .. } | Verb::Beta { .. });
    if uses_order && cli.order < 2 {
        return Err(usage(format!("--order must be at least 2, got {}", cli.order)));
    }
    let Some(text) = &cli.slopes else {
        return Ok(Vec::new());
    };
    if !uses_slopes {
        return Err(usage("--slopes applies only to tangent-internal and beta"));
    }
    if !space.is_some_and(is_wire) {
        return Err(usage("--slopes applies only to wire spaces generated(n, 1)"));
    }
    let slopes = parse_numbers(text)?;
    for (i, a) in slopes.iter().enumerate() {
        if slopes[..i].contains(a) {
            return Err(usage(format!("--slopes lists {a} twice")));
        }
    }
    Ok(slopes)
}

fn space_and_point(space: &str, point: &str) -> Result<(Space, Vec<QuadNumber>), Failure> {
    let s = parse_space(space)?;
    let p = parse_point(point, Some(&s))?;
    s.check_point(&p)?;
    Ok((s, p))
}

fn done(report: Report, format: Format, ok: bool, extra_text: &[String]) -> Outcome {
    let output = match format {
        Format::Json => report.to_json(),
        Format::Text => {
            let mut s = report.to_string();
            for line in extra_text {
                s.push_str("  ");
                s.push_str(line);
                s.push('\n');
            }
            s.trim_end().to_string()
        }
    };
    Outcome {
        output,
        ok,
        diagnostics: Vec::new(),
    }
}

fn candidate(space: &Space, text: &str, dim: usize) -> Result<BundlePlotCandidate, Failure> {
    if dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    let c = parse_candidate(text, dim)?;
    if c.base.target_dim() != space.ambient_dim() {
        return Err(usage(format!(
            "base {} has {} components, {space} has {} coordinates",
            c.base,
            c.base.target_dim(),
            space.ambient_dim()
        )));
    }
    Ok(c)
}

fn op_json(r: &SmoothnessReport) -> serde_json::Value {
    json!({
        "operation": r.operation,
        "hector": r.hector_verdict,
        "dvs": r.dvs_verdict,
        "witness": r.witness.as_ref().map(|w| w.to_string()),
        "tested": r.tested.len(),
    })
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    match &cli.verb {
        Verb::TangentInternal { space, point } => {
            let (s, p) = space_and_point(space, point)?;
            let slopes = validate(cli, Some(&s))?;
            let r = internal_tangent_with(&s, &p, &CurveOptions::with_slopes(slopes))?;
            Ok(done(Report::new("tangent-internal", &s, &p).with_internal(&r), format, true, &[]))
        }
        Verb::TangentExternal { space, point } => {
            let (s, p) = space_and_point(space, point)?;
            validate(cli, Some(&s))?;
            let r = external_tangent_at_order(&s, &p, cli.order)?;
            Ok(done(Report::new("tangent-external", &s, &p).with_external(&r), format, true, &[]))
        }
        Verb::Beta { space, point } => {
            let (s, p) = space_and_point(space, point)?;
            let slopes = validate(cli, Some(&s))?;
            let b = comparison_beta_with(&s, &p, &CurveOptions::with_slopes(slopes), cli.order)?;
            let ok = b.consistent;
            let report = Report::new("beta", &s, &p)
                .with_beta(&b)
                .with_details(&json!({ "consistent": b.consistent }));
            let mut out = done(report, format, ok, &[]);
            if !ok {
                out.diagnostics.push("beta is not constant on tangent classes".into());
            }
            Ok(out)
        }
        Verb::BundleCheck {
            space,
            candidate: text,
            dim,
        } => {
            let s = parse_space(space)?;
            validate(cli, Some(&s))?;
            let c = candidate(&s, text, *dim)?;
            let hector = membership(&s, &c, Diffeology::Hector)?;
            let dvs = membership(&s, &c, Diffeology::Dvs)?;
            let lines = vec![
                format!("candidate: {c}"),
                format!("hector: {:?} ({})", hector.verdict, reason(&hector.reason)),
                format!("dvs: {:?} ({})", dvs.verdict, reason(&dvs.reason)),
            ];
            let report = Report::new("bundle-check", &s, &c.base.at_origin()).with_details(&json!({
                "candidate": c.to_string(),
                "hector": hector,
                "dvs": dvs,
            }));
            Ok(done(report, format, true, &lines))
        }
        Verb::Fibrewise { space, f, g, dim } => {
            let s = parse_space(space)?;
            validate(cli, Some(&s))?;
            let f = candidate(&s, f, *dim)?;
            let g = candidate(&s, g, *dim)?;
            let reports = check_fibrewise_ops(&s, &f, &g)?;
            let lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    let mut line = format!(
                        "{:?}: hector {:?}, dvs {:?}",
                        r.operation, r.hector_verdict, r.dvs_verdict
                    );
                    if let Some(w) = &r.witness {
                        line.push_str(&format!(", witness {w}"));
                    }
                    line
                })
                .collect();
            let report = Report::new("fibrewise", &s, &f.base.at_origin()).with_details(&json!({
                "f": f.to_string(),
                "g": g.to_string(),
                "operations": reports.iter().map(op_json).collect::<Vec<_>>(),
            }));
            Ok(done(report, format, true, &lines))
        }
        Verb::Table => {
            validate(cli, None)?;
            let t = run_table()?;
            let output = match format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "verb": "table",
                    "rows": t.rows,
                    "passed": t.passed,
                }))
                .expect("table serializes"),
                Format::Text => t.to_string(),
            };
            Ok(Outcome {
                output,
                ok: t.passed,
                diagnostics: t.diff(),
            })
        }
        Verb::Trivialize { space } => {
            let s = parse_space(space)?;
            validate(cli, Some(&s))?;
            let r = group_trivialization(&s)?;
            let ok = r.holds();
            let lines = vec![format!(
                "trivialization {} on a battery of {} plots (fibre dim {})",
                if ok { "verified" } else { "FAILED" },
                r.battery,
                r.fibre_dim
            )];
            let report = Report::new("trivialize", &s, &s.origin()).with_details(&r);
            Ok(done(report, format, ok, &lines))
        }
        Verb::Fine { space, point } => {
            let (s, p) = space_and_point(space, point)?;
            validate(cli, Some(&s))?;
            let v = fine_check(&s, &p)?;
            let line = match &v {
                FineVerdict::Fine { reason } => format!("fine: {reason}"),
                FineVerdict::OutOfScope { reason, certificate } => match certificate {
                    Some(c) => format!(
                        "out of scope: {reason} (Vandermonde certificate of size {} has rank {})",
                        c.size, c.rank
                    ),
                    None => format!("out of scope: {reason}"),
                },
            };
            let report = Report::new("fine", &s, &p).with_details(&v);
            Ok(done(report, format, true, &[line]))
        }
    }
}

fn reason(r: &BundleReason) -> String {
    serde_json::to_string(r).expect("reasons serialize")
}

pub fn emit(cli: &Cli, output: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, format!("{output}\n")),
        None => {
            println!("{output}");
            Ok(())
        }
    }
}
