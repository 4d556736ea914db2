//! Declarative text form of a groupoid spec.
//!
//! ```text
//! chart x p q a b c e
//! fixed a: a
//! form dx: 1 @ x
//! quotient dp^dq: 1 @ p q | x a b c e
//! field X: 1 ; <H_q> ; <-H_p> ; 0 ; 0 ; 0 ; 0
//! invariant lambda: x:e1*y:e2 - x:e2*y:e1
//! ```
//!
//! Labels end at the first `": "`; form terms are separated by `;`.

use jetcert::cartan::{DifferentialForm, QuotientContext, VectorField};
use jetcert::exactalg::Chart;
use jetcert::groupoid::{Datum, GroupoidSpec};

use crate::parser::{parse_expression, parse_jet_expression};

fn form_text(w: &DifferentialForm) -> String {
    let terms: Vec<String> = w
        .terms()
        .map(|(t, c)| {
            let names: Vec<&str> = t.iter().map(|&i| w.chart().name(i as usize)).collect();
            format!("{c} @ {}", names.join(" "))
        })
        .collect();
    if terms.is_empty() {
        format!("0 @ {}", "")
    } else {
        terms.join(" ; ")
    }
}

pub fn write_spec(spec: &GroupoidSpec) -> String {
    let mut out = format!("chart {}\n", spec.chart().names().join(" "));
    for (label, d) in spec.data() {
        let line = match d {
            Datum::Fixed(f) => format!("fixed {label}: {f}"),
            Datum::Form(w) => format!("form {label}: {}", form_text(w)),
            Datum::QuotientForm(w, ctx) => {
                let dropped: Vec<&str> = ctx.dropped().collect();
                format!("quotient {label}: {} | {}", form_text(w), dropped.join(" "))
            }
            Datum::Field(v) => {
                let comps: Vec<String> = v.components().iter().map(|c| c.to_string()).collect();
                format!("field {label}: {}", comps.join(" ; "))
            }
            Datum::Invariant(f) => format!("invariant {label}: {f}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn parse_form(text: &str, chart: &Chart, line: usize) -> Result<DifferentialForm, String> {
    let mut terms = Vec::new();
    let mut degree = None;
    for part in text.split(';') {
        let (coef, idx) = part
            .split_once('@')
            .ok_or_else(|| format!("line {line}: form term needs '@'"))?;
        let idx: Vec<usize> = idx
            .split_whitespace()
            .map(|n| chart.index_of(n).ok_or_else(|| format!("line {line}: unknown differential d{n}")))
            .collect::<Result<_, _>>()?;
        if *degree.get_or_insert(idx.len()) != idx.len() {
            return Err(format!("line {line}: mixed form degrees"));
        }
        let c = parse_expression(coef.trim(), chart).map_err(|e| format!("line {line}: {e}"))?;
        terms.push((idx, c));
    }
    DifferentialForm::from_terms(chart, degree.unwrap_or(0), terms).map_err(|e| format!("line {line}: {e}"))
}

pub fn read_spec(text: &str) -> Result<GroupoidSpec, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, head) = lines.next().ok_or("empty spec")?;
    let names: Vec<&str> = head
        .strip_prefix("chart ")
        .ok_or("spec must start with 'chart'")?
        .split_whitespace()
        .collect();
    let chart = Chart::new(names.iter().copied()).map_err(|e| e.to_string())?;
    let mut spec = GroupoidSpec::new(&chart);
    for (n, line) in lines {
        let (kind, rest) = line.split_once(' ').ok_or_else(|| format!("line {n}: missing datum"))?;
        let (label, body) = rest
            .split_once(": ")
            .ok_or_else(|| format!("line {n}: expected '<label>: <body>'"))?;
        let expr = |s: &str| parse_expression(s.trim(), &chart).map_err(|e| format!("line {n}: {e}"));
        let datum = match kind {
            "fixed" => Datum::Fixed(expr(body)?),
            "form" => Datum::Form(parse_form(body, &chart, n)?),
            "quotient" => {
                let (form, dropped) = body
                    .rsplit_once('|')
                    .ok_or_else(|| format!("line {n}: quotient needs '| <dropped>'"))?;
                let dropped: Vec<&str> = dropped.split_whitespace().collect();
                let ctx = QuotientContext::new(&chart, &dropped).map_err(|e| format!("line {n}: {e}"))?;
                Datum::QuotientForm(parse_form(form, &chart, n)?, ctx)
            }
            "field" => {
                let comps = body.split(';').map(expr).collect::<Result<Vec<_>, _>>()?;
                let comps = comps
                    .into_iter()
                    .map(|c| c.embed(&chart))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| format!("line {n}: {e}"))?;
                Datum::Field(VectorField::new(&chart, comps).map_err(|e| format!("line {n}: {e}"))?)
            }
            "invariant" => Datum::Invariant(
                parse_jet_expression(body.trim(), &chart).map_err(|e| format!("line {n}: {e}"))?,
            ),
            other => return Err(format!("line {n}: unknown datum kind '{other}'")),
        };
        spec.push(label, datum).map_err(|e| format!("line {n}: {e}"))?;
    }
    Ok(spec)
}
