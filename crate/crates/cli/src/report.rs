//! Suite reports: aligned text for people, `key=value` lines for machines.

use std::fmt::Write;

use jetcert::Check;

/// Longest residual kept in a report line; longer ones are elided with their length.
pub const RESIDUAL_LIMIT: usize = 240;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub id: String,
    pub pass: bool,
    pub residual: String,
}

impl From<Check> for CheckLine {
    fn from(c: Check) -> Self {
        CheckLine {
            id: c.id,
            pass: c.ok,
            residual: c.residual,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    /// Effective options, in display order.
    pub params: Vec<(String, String)>,
    pub checks: Vec<CheckLine>,
    pub table: Option<Table>,
}

fn summarize(residual: &str) -> String {
    let flat = residual.split_whitespace().collect::<Vec<_>>().join(" ");
    let n = flat.chars().count();
    if n <= RESIDUAL_LIMIT {
        flat
    } else {
        let head: String = flat.chars().take(RESIDUAL_LIMIT).collect();
        format!("{head}... ({n} chars)")
    }
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            params: Vec::new(),
            checks: Vec::new(),
            table: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, id: impl Into<String>, pass: bool, residual: impl ToString) {
        self.checks.push(CheckLine {
            id: id.into(),
            pass,
            residual: residual.to_string(),
        });
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks.into_iter().map(CheckLine::from));
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.checks.len()
    }

    /// 0 iff every check passed.
    pub fn exit_status(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render_human(&self, timestamp: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(ts) = timestamp {
            writeln!(out, "# generated {ts}").unwrap();
        }
        writeln!(out, "suite: {}", self.suite).unwrap();
        for (k, v) in &self.params {
            writeln!(out, "  {k} = {v}").unwrap();
        }
        if let Some(t) = &self.table {
            let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                padded.join("  ")
            };
            writeln!(out).unwrap();
            writeln!(out, "{}", line(&t.headers)).unwrap();
            for row in &t.rows {
                writeln!(out, "{}", line(row)).unwrap();
            }
        }
        writeln!(out).unwrap();
        let width = self.checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{status}  {:<width$}  {}", c.id, summarize(&c.residual)).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{} of {} checks passed", self.passed(), self.checks.len()).unwrap();
        out
    }

    /// One record per line; the value runs to the end of the line.
    pub fn render_machine(&self, timestamp: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(ts) = timestamp {
            writeln!(out, "timestamp={ts}").unwrap();
        }
        writeln!(out, "suite={}", self.suite).unwrap();
        for (k, v) in &self.params {
            writeln!(out, "param.{k}={v}").unwrap();
        }
        if let Some(t) = &self.table {
            for (i, row) in t.rows.iter().enumerate() {
                for (h, cell) in t.headers.iter().zip(row) {
                    writeln!(out, "row.{i}.{h}={cell}").unwrap();
                }
            }
        }
        for (i, c) in self.checks.iter().enumerate() {
            writeln!(out, "check.{i}.id={}", c.id).unwrap();
            writeln!(out, "check.{i}.status={}", if c.pass { "pass" } else { "fail" }).unwrap();
            writeln!(out, "check.{i}.residual={}", summarize(&c.residual)).unwrap();
        }
        writeln!(out, "passed={}", self.passed()).unwrap();
        writeln!(out, "total={}", self.checks.len()).unwrap();
        writeln!(out, "exit={}", self.exit_status()).unwrap();
        out
    }
}
