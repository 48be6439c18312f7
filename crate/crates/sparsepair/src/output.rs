//! Report headers, number formatting and CSV emission.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::SystemTime;

use crate::error::{Error, Result};

/// Significant digits written for every real number.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Formats like C's `%.15g`: plain decimals for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Comment block opening every output: the resolved command line and the
/// master seed, then a timestamp line that is the only part allowed to
/// differ between reruns.
pub fn header(command: &str, seed: u64) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "# sparsepair {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(h, "# command: {command}");
    let _ = writeln!(h, "# seed: {seed}");
    let _ = writeln!(h, "# generated: {}", humantime::format_rfc3339_seconds(SystemTime::now()));
    h
}

/// Lines of `text` without the timestamp, for reproducibility comparisons.
pub fn strip_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# generated:")).map(|l| format!("{l}\n")).collect()
}

/// Accumulates a CSV table.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(columns: &[&str]) -> Self {
        Self { text: format!("{}\n", columns.join(",")) }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells: Vec<String> = cells.into_iter().map(|s| s.as_ref().to_string()).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Writes `body` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}
