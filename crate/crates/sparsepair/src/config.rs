//! `key = value` configuration files merged under command-line flags.

use std::path::Path;

use crate::error::{Error, Result};

/// Parsed `key = value` pairs in file order. `#` starts a comment.
pub fn parse_config(path: &Path, text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse { path: path.to_path_buf(), line: i + 1, msg: format!("expected `key = value`, got `{line}`") });
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Parse { path: path.to_path_buf(), line: i + 1, msg: format!("bad key `{}`", k.trim()) });
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(path, &text)
}

fn mentions(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| *a == flag || a.starts_with(&eq))
}

/// Global flags that take a value; the subcommand is the first other
/// positional token.
const VALUE_FLAGS: [&str; 4] = ["--seed", "--out", "--threads", "--config"];

/// Position of the subcommand in `args` (index 0 is the program name).
pub fn subcommand_index(args: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if VALUE_FLAGS.contains(&a.as_str()) {
            i += 2;
            continue;
        }
        if a.starts_with('-') {
            i += 1;
            continue;
        }
        return Some(i);
    }
    None
}

/// Value of `--config` in `args`, if any.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Inserts config entries as flags right after the subcommand, skipping
/// keys already given on the command line. `true` becomes a bare switch and
/// `false` is dropped.
pub fn merge_config(args: &[String], config: &[(String, String)]) -> Vec<String> {
    let at = subcommand_index(args).map_or(args.len(), |i| i + 1);
    let mut injected = Vec::new();
    for (k, v) in config {
        if k == "config" || mentions(args, k) {
            continue;
        }
        match v.as_str() {
            "true" => injected.push(format!("--{k}")),
            "false" => {}
            _ => {
                injected.push(format!("--{k}"));
                injected.push(v.clone());
            }
        }
    }
    let mut out = args[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at..]);
    out
}
