use std::fmt::Write as _;

use clap::ValueEnum;
use donoghue_core::realize::{dispatch_kappa, CurvePoint};
use donoghue_core::Complex64;
use nalgebra::DMatrix;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// One command result: the JSON value plus labelled rows for the text table.
pub struct Report {
    value: Value,
    rows: Vec<(String, String)>,
}

impl Report {
    pub fn new(value: Value) -> Self {
        Report {
            value,
            rows: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Self::new(Value::Null)
    }

    pub fn with_json(mut self, value: Value) -> Self {
        self.value = value;
        self
    }

    pub fn row(mut self, label: impl Into<String>, text: impl Into<String>) -> Self {
        self.rows.push((label.into(), text.into()));
        self
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&self.value).expect("JSON values serialize")
            ),
            Format::Table => print!("{}", self.table()),
        }
    }

    fn table(&self) -> String {
        let width = self.rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (label, text) in &self.rows {
            let pad = width - label.chars().count();
            let mut lines = text.lines();
            let first = lines.next().unwrap_or("");
            writeln!(out, "{label}{}  {first}", " ".repeat(pad)).unwrap();
            for line in lines {
                writeln!(out, "{}  {line}", " ".repeat(width)).unwrap();
            }
        }
        out
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.10} {sign} {:.10}i", z.re, z.im.abs())
}

pub fn fmt_matrix(m: &DMatrix<Complex64>) -> String {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| format!("[{}]", fmt_complex(m[(i, j)])))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// CSV with `#` lines recording the vertex value and the evenness check.
pub fn curve_csv(a: f64, points: &[CurvePoint]) -> String {
    let vertex = dispatch_kappa(0.0, a).expect("a was validated by the curve itself");
    let mut worst: f64 = 0.0;
    let mut paired = 0usize;
    for p in points {
        if let Some(m) = points.iter().find(|m| m.q == -p.q) {
            worst = worst.max((p.kappa - m.kappa).abs());
            paired += 1;
        }
    }
    let mut out = String::new();
    writeln!(out, "# a = {a}").unwrap();
    writeln!(out, "# vertex kappa(0) = {vertex}").unwrap();
    writeln!(
        out,
        "# evenness: {paired} of {} points paired with -Q, max |kappa(Q) - kappa(-Q)| = {worst}",
        points.len()
    )
    .unwrap();
    writeln!(out, "Q,kappa,re_U,im_U").unwrap();
    for p in points {
        writeln!(out, "{},{},{},{}", p.q, p.kappa, p.u.re, p.u.im).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use donoghue_core::realize::kappa_curve;

    #[test]
    fn complex_text() {
        assert_eq!(fmt_complex(Complex64::new(1.0, -0.5)), "1.0000000000 - 0.5000000000i");
        assert_eq!(complex_json(Complex64::new(1.0, 2.0)), json!([1.0, 2.0]));
    }

    #[test]
    fn table_alignment() {
        let r = Report::empty().row("a", "1").row("long", "x\ny");
        assert_eq!(r.table(), "a     1\nlong  x\n      y\n");
    }

    #[test]
    fn csv_layout() {
        let pts = kappa_curve(1.0, -1.0, 1.0, 3).unwrap();
        let csv = curve_csv(1.0, &pts);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "# vertex kappa(0) = 0");
        assert!(lines[2].ends_with("= 0"));
        assert_eq!(lines[3], "Q,kappa,re_U,im_U");
        assert_eq!(lines.len(), 7);
        assert!(lines[5].starts_with("0,0,-1,"));
    }
}
