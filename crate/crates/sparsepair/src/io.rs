//! Plain-text dictionary and signal files.
//!
//! Dictionary: a header line `d N Na`, then `d·N` lines `re im` in row-major
//! order. Signal: a line with `N`, then `N` lines `re im`, then one line of
//! space-separated support indices (possibly empty). Lines starting with `#`
//! and blank lines before the data are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sparsepair_core::linalg::CVector;
use sparsepair_core::{Complex64, ConcatDictionary, Dictionary};

use crate::error::{Error, Result};

struct Lines<'a> {
    path: PathBuf,
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(path: &Path, text: &'a str) -> Self {
        Self { path: path.to_path_buf(), inner: text.lines().enumerate().peekable() }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.path.clone(), line, msg: msg.into() }
    }

    /// Next line that is not a comment. Blank lines are skipped too unless
    /// `keep_blank`.
    fn next_data(&mut self, keep_blank: bool) -> Option<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            let t = l.trim();
            if t.starts_with('#') || (t.is_empty() && !keep_blank) {
                continue;
            }
            return Some((i + 1, t));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.inner.peek().map(|(i, _)| *i + 1).unwrap_or(0);
        self.next_data(false).ok_or_else(|| self.err(last, format!("unexpected end of file, expected {what}")))
    }

    fn complex(&mut self) -> Result<Complex64> {
        let (n, l) = self.expect("a `re im` pair")?;
        let mut parts = l.split_whitespace();
        let mut num = |name: &str| -> Result<f64> {
            let tok = parts.next().ok_or_else(|| self.err(n, format!("missing {name} part")))?;
            tok.parse::<f64>().map_err(|e| self.err(n, format!("bad {name} part `{tok}`: {e}")))
        };
        let re = num("real")?;
        let im = num("imaginary")?;
        if parts.next().is_some() {
            return Err(self.err(n, "expected exactly two numbers"));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(self.err(n, "non-finite entry"));
        }
        Ok(Complex64::new(re, im))
    }

    fn trailing(&mut self) -> Result<()> {
        match self.next_data(false) {
            Some((n, _)) => Err(self.err(n, "unexpected trailing data")),
            None => Ok(()),
        }
    }
}

fn parse_usizes(line: &str) -> std::result::Result<Vec<usize>, String> {
    line.split_whitespace().map(|t| t.parse::<usize>().map_err(|e| format!("bad integer `{t}`: {e}"))).collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn entry(out: &mut String, z: Complex64) {
    let _ = writeln!(out, "{:.16e} {:.16e}", z.re, z.im);
}

/// Serializes `[A B]` with `Na` recorded in the header.
pub fn format_dictionary(c: &ConcatDictionary, header: &str) -> String {
    let m = c.joint().entries();
    let (d, n) = m.shape();
    let mut out = String::from(header);
    let _ = writeln!(out, "{d} {n} {}", c.n_a());
    for i in 0..d {
        for j in 0..n {
            entry(&mut out, m[(i, j)]);
        }
    }
    out
}

pub fn parse_dictionary(path: &Path, text: &str) -> Result<ConcatDictionary> {
    let mut lines = Lines::new(path, text);
    let (n0, header) = lines.expect("header `d N Na`")?;
    let dims = parse_usizes(header).map_err(|m| lines.err(n0, m))?;
    let [d, n, n_a] = dims[..] else {
        return Err(lines.err(n0, "header must be `d N Na`"));
    };
    if d == 0 || n_a == 0 || n_a >= n {
        return Err(lines.err(n0, format!("need d ≥ 1 and 1 ≤ Na < N, got d={d} N={n} Na={n_a}")));
    }
    let mut data = Vec::with_capacity(d * n);
    for _ in 0..d * n {
        data.push(lines.complex()?);
    }
    lines.trailing()?;
    let label = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let all = Dictionary::from_row_major(d, n, &data, label.clone())?;
    let a = Dictionary::new(all.entries().columns(0, n_a).into_owned(), format!("{label}:A"))?;
    let b = Dictionary::new(all.entries().columns(n_a, n - n_a).into_owned(), format!("{label}:B"))?;
    Ok(ConcatDictionary::new(a, b)?)
}

pub fn read_dictionary(path: &Path) -> Result<ConcatDictionary> {
    parse_dictionary(path, &read(path)?)
}

pub fn write_dictionary(path: &Path, c: &ConcatDictionary, header: &str) -> Result<()> {
    write(path, &format_dictionary(c, header))
}

/// Coefficients over `[A B]` and the support they were planted on.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalFile {
    pub coefficients: CVector,
    pub support: Vec<usize>,
}

pub fn format_signal(s: &SignalFile, header: &str) -> String {
    let mut out = String::from(header);
    let _ = writeln!(out, "{}", s.coefficients.len());
    for &z in s.coefficients.iter() {
        entry(&mut out, z);
    }
    let support: Vec<String> = s.support.iter().map(|i| i.to_string()).collect();
    let _ = writeln!(out, "{}", support.join(" "));
    out
}

pub fn parse_signal(path: &Path, text: &str) -> Result<SignalFile> {
    let mut lines = Lines::new(path, text);
    let (n0, head) = lines.expect("coefficient count")?;
    let n: usize = head.parse().map_err(|e| lines.err(n0, format!("bad coefficient count `{head}`: {e}")))?;
    let mut coefficients = CVector::zeros(n);
    for i in 0..n {
        coefficients[i] = lines.complex()?;
    }
    let support = match lines.next_data(true) {
        None => Vec::new(),
        Some((line, l)) => {
            let s = parse_usizes(l).map_err(|m| lines.err(line, m))?;
            if let Some(&bad) = s.iter().find(|&&i| i >= n) {
                return Err(lines.err(line, format!("support index {bad} out of range for {n} coefficients")));
            }
            s
        }
    };
    lines.trailing()?;
    Ok(SignalFile { coefficients, support })
}

pub fn read_signal(path: &Path) -> Result<SignalFile> {
    parse_signal(path, &read(path)?)
}

pub fn write_signal(path: &Path, s: &SignalFile, header: &str) -> Result<()> {
    write(path, &format_signal(s, header))
}

#[cfg(test)]
mod tests {
    use super::*;
    use sparsepair_core::dictionaries::{build_dirac_fourier, build_random_pair};

    #[test]
    fn dictionary_roundtrip_is_exact() {
        let c = build_random_pair(4, 3, 5, 8).unwrap();
        let text = format_dictionary(&c, "# test\n");
        let back = parse_dictionary(Path::new("x.dict"), &text).unwrap();
        assert_eq!(back.joint().entries(), c.joint().entries());
        assert_eq!((back.n_a(), back.n_b()), (3, 5));
    }

    #[test]
    fn signal_roundtrip() {
        let mut x = CVector::zeros(8);
        x[2] = Complex64::new(0.1, -2.5);
        let s = SignalFile { coefficients: x, support: vec![2] };
        let back = parse_signal(Path::new("s"), &format_signal(&s, "")).unwrap();
        assert_eq!(back, s);
        let empty = SignalFile { coefficients: CVector::zeros(2), support: vec![] };
        assert_eq!(parse_signal(Path::new("s"), &format_signal(&empty, "# h\n")).unwrap(), empty);
    }

    #[test]
    fn malformed_inputs_name_the_line() {
        let df = build_dirac_fourier(2).unwrap();
        let good = format_dictionary(&df, "");
        let bad = good.replacen("0.0000000000000000e0", "zero", 1);
        match parse_dictionary(Path::new("d"), &bad) {
            Err(Error::Parse { line, .. }) => assert!(line > 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_dictionary(Path::new("d"), "2 4\n"), Err(Error::Parse { line: 1, .. })));
        let truncated: String = good.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_dictionary(Path::new("d"), &truncated), Err(Error::Parse { .. })));
        assert!(matches!(parse_signal(Path::new("s"), "2\n1 0\n0 0\n5\n"), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn non_unit_columns_are_rejected() {
        let text = "1 2 1\n2 0\n1 0\n";
        assert!(matches!(parse_dictionary(Path::new("d"), text), Err(Error::Core(_))));
    }
}
