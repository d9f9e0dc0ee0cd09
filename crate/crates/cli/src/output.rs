//! Report rows and their json / csv / text renderings. Rows are written
//! one per line as they arrive so long runs stay observable.

use std::io::{self, Write};
use std::sync::Mutex;

use clap::ValueEnum;
use qser_core::report::{CheckReport, Counterexample, Status};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Flat view of a [`CheckReport`]; the JSON form follows
/// `docs/report.schema.json`.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: String,
    pub ell: Option<u64>,
    #[serde(rename = "A")]
    pub a: Option<u64>,
    #[serde(rename = "B")]
    pub b: Option<i64>,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    pub n_max: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<&CheckReport> for Row {
    fn from(r: &CheckReport) -> Self {
        let claim = r.claim.as_ref();
        Row {
            id: r.id.clone(),
            ell: claim.map(|c| c.ell),
            a: claim.map(|c| c.a),
            b: claim.and_then(|c| i64::try_from(c.original_b()).ok()),
            m: claim.map(|c| c.modulus),
            n_max: r.checked_to,
            status: r.status,
            counterexample: r.counterexample.clone(),
            seconds: r.elapsed.as_secs_f64(),
            notes: r.notes.clone(),
            error: r.error.clone(),
        }
    }
}

pub const CSV_COLUMNS: [&str; 11] =
    ["id", "ell", "A", "B", "M", "n_max", "status", "counterexample_n", "counterexample_value", "seconds", "notes"];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

impl Row {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => format!("{}\n", serde_json::to_string(self).expect("rows serialize")),
            Format::Csv => {
                let cx = self.counterexample.as_ref();
                csv_line(&[
                    self.id.clone(),
                    opt(self.ell),
                    opt(self.a),
                    opt(self.b),
                    opt(self.m),
                    self.n_max.to_string(),
                    status_word(self.status).to_lowercase(),
                    opt(cx.map(|c| c.n)),
                    opt(cx.map(|c| c.value.clone())),
                    format!("{:.6}", self.seconds),
                    self.notes.join("; "),
                ])
            }
            Format::Text => {
                let mut line = format!("{:<5} {}  (to {}, {:.3}s)", status_word(self.status), self.id, self.n_max, self.seconds);
                if let Some(cx) = &self.counterexample {
                    line.push_str(&format!("  counterexample n = {}: {}", cx.n, cx.value));
                    if let Some(e) = &cx.expected {
                        line.push_str(&format!(" (expected {e})"));
                    }
                }
                if let Some(e) = &self.error {
                    line.push_str(&format!("  error: {e}"));
                }
                for n in &self.notes {
                    line.push_str(&format!("\n      {n}"));
                }
                line.push('\n');
                line
            }
        }
    }
}

/// Thread-safe line sink shared by worker threads.
pub struct Sink {
    format: Format,
    out: Mutex<Box<dyn Write + Send>>,
}

impl Sink {
    pub fn new(format: Format, out: Box<dyn Write + Send>) -> Self {
        let sink = Sink { format, out: Mutex::new(out) };
        if format == Format::Csv {
            sink.write_raw(&csv_line(&CSV_COLUMNS.map(String::from)));
        }
        sink
    }

    pub fn stdout(format: Format) -> Self {
        Sink::new(format, Box::new(io::stdout()))
    }

    fn write_raw(&self, s: &str) {
        let mut out = self.out.lock().expect("sink lock");
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
    }

    pub fn report(&self, r: &CheckReport) {
        self.write_raw(&Row::from(r).render(self.format));
    }

    pub fn format(&self) -> Format {
        self.format
    }
}

/// `n, coefficient` pairs of a dumped series.
pub fn render_coefficients(coeffs: &[num_bigint::BigInt], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for (n, c) in coeffs.iter().enumerate() {
                out.push_str(&serde_json::json!({ "n": n, "coefficient": c.to_string() }).to_string());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("n,coefficient\n");
            for (n, c) in coeffs.iter().enumerate() {
                out.push_str(&format!("{n},{c}\n"));
            }
        }
        Format::Text => {
            let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            out.push_str(&cs.join(","));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qser_core::congruence::ProgressionClaim;
    use std::time::Duration;

    fn sample() -> CheckReport {
        let mut r = CheckReport::fail(
            "x",
            10,
            Counterexample { n: 0, value: "12".into(), expected: Some("0".into()) },
            Duration::from_millis(5),
        );
        r.claim = Some(ProgressionClaim::theorem(3, 9, 4, 24, "t").unwrap());
        r
    }

    #[test]
    fn json_row_fields() {
        let v: serde_json::Value = serde_json::from_str(&Row::from(&sample()).render(Format::Json)).unwrap();
        assert_eq!(v["A"], 9);
        assert_eq!(v["B"], 4);
        assert_eq!(v["M"], 24);
        assert_eq!(v["status"], "fail");
        assert_eq!(v["counterexample"]["n"], 0);
    }

    #[test]
    fn csv_columns_are_stable() {
        let line = Row::from(&sample()).render(Format::Csv);
        assert_eq!(line.trim_end().split(',').count(), CSV_COLUMNS.len());
        assert!(line.starts_with("x,3,9,4,24,10,fail,0,12,"));
    }

    #[test]
    fn dump_text_is_comma_separated() {
        let cs: Vec<num_bigint::BigInt> = [1, 2, 4, 7, 12].iter().map(|&c| c.into()).collect();
        assert_eq!(render_coefficients(&cs, Format::Text), "1,2,4,7,12\n");
    }
}
