//! Markdown views of reports.

use std::fmt::Write;

use serde_json::Value;

use super::{Params, VerificationReport};

fn params_summary(p: &Params) -> String {
    let v = serde_json::to_value(p).expect("params serialize");
    let mut parts = Vec::new();
    for (k, x) in v.as_object().expect("object") {
        let s = match x {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        parts.push(format!("{k}={s}"));
    }
    parts.join(" ")
}

/// One row per report.
pub fn markdown_table<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> String {
    let mut out = String::from(
        "| conjecture | parameters | bound | predicted | computed | verdict | cached |\n|---|---|---|---|---|---|---|\n",
    );
    for r in reports {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            r.conjecture,
            params_summary(&r.params),
            r.bound,
            r.predicted,
            r.computed,
            r.verdict,
            if r.cached { "yes" } else { "no" }
        );
    }
    out
}

/// Full report: summary, trusted-range conditions, details and statistics.
pub fn markdown_detail(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## {}\n", r.conjecture);
    let _ = writeln!(out, "- parameters: {}", params_summary(&r.params));
    let _ = writeln!(out, "- conjectured bound: {}", r.bound);
    let _ = writeln!(out, "- predicted value: {}", r.predicted);
    let _ = writeln!(out, "- computed value: {}", r.computed);
    let _ = writeln!(out, "- verdict: **{}**", r.verdict);
    if r.cached {
        let _ = writeln!(out, "- served from cache");
    }
    if let Some(t) = &r.timings {
        let _ = writeln!(out, "- wall time: {:.3} s", t.wall_seconds);
    }
    let _ = writeln!(out, "\n### Trusted range\n");
    for c in &r.trusted_range {
        let _ = writeln!(out, "- [{}] {}", if c.holds { "x" } else { " " }, c.what);
    }
    let _ = writeln!(out, "\n### Details\n");
    for (k, v) in &r.details {
        match v {
            Value::String(s) => {
                let _ = writeln!(out, "- {k}: {s}");
            }
            Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
                let _ = writeln!(out, "- {k}:\n");
                let cols: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
                let _ = writeln!(out, "  | {} |", cols.join(" | "));
                let _ = writeln!(out, "  |{}", "---|".repeat(cols.len()));
                for row in rows {
                    let o = row.as_object().unwrap();
                    let cells: Vec<String> = cols.iter().map(|c| o.get(c).map(|x| x.to_string()).unwrap_or_default()).collect();
                    let _ = writeln!(out, "  | {} |", cells.join(" | "));
                }
                out.push('\n');
            }
            other => {
                let _ = writeln!(out, "- {k}: {other}");
            }
        }
    }
    let s = &r.stats;
    let _ = write!(out, "\n### Matrix statistics\n\n- largest matrix: {} x {}\n- nonzeros: {}\n", s.max_rows, s.max_cols, s.nnz);
    if let Some(k) = s.k_dim {
        let _ = writeln!(out, "- largest expanded dimension over k: {k}");
    }
    out
}
