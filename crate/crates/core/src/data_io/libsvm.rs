use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problem::Sample;
use crate::scalar::Scalar;

/// Reads a LIBSVM file and maps labels to ±1. Returns the samples and
/// `d`, the largest feature index seen (1-based on disk, 0-based in memory).
pub fn parse_libsvm<F: Scalar>(path: impl AsRef<Path>) -> Result<(Vec<Sample<F>>, usize)> {
    let path = path.as_ref();
    let (samples, d) = parse_libsvm_raw(path)?;
    Ok((binarize_labels(samples, &path.display().to_string())?, d))
}

/// Like [`parse_libsvm`] but keeps labels as written.
pub fn parse_libsvm_raw<F: Scalar>(path: impl AsRef<Path>) -> Result<(Vec<Sample<F>>, usize)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_libsvm_str(&text, &path.display().to_string())
}

pub fn parse_libsvm_str<F: Scalar>(text: &str, origin: &str) -> Result<(Vec<Sample<F>>, usize)> {
    let mut samples = Vec::new();
    let mut d = 0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let s = parse_line(line).map_err(|msg| Error::Parse {
            path: origin.to_string(),
            line: lineno + 1,
            msg,
        })?;
        d = d.max(s.dim_bound());
        samples.push(s);
    }
    Ok((samples, d))
}

fn parse_number<F: Scalar>(tok: &str, what: &str) -> std::result::Result<F, String> {
    let v: f64 = tok.parse().map_err(|_| format!("bad {what} `{tok}`"))?;
    if !v.is_finite() {
        return Err(format!("non-finite {what} `{tok}`"));
    }
    F::from_f64(v).ok_or_else(|| format!("{what} `{tok}` out of range"))
}

fn parse_line<F: Scalar>(line: &str) -> std::result::Result<Sample<F>, String> {
    let mut toks = line.split_whitespace();
    let label = parse_number(toks.next().unwrap_or(""), "label")?;
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for tok in toks {
        let (i, v) = tok
            .split_once(':')
            .ok_or_else(|| format!("expected `index:value`, got `{tok}`"))?;
        if i.is_empty() || !i.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad feature index `{i}`"));
        }
        let idx: usize = i.parse().map_err(|_| format!("feature index `{i}` out of range"))?;
        if idx == 0 {
            return Err("feature indices start at 1".into());
        }
        let idx = idx - 1;
        if indices.last().is_some_and(|&last| last >= idx) {
            return Err(format!("feature index {} not strictly ascending", idx + 1));
        }
        indices.push(idx);
        values.push(parse_number(v, "feature value")?);
    }
    Sample::new(indices, values, label).map_err(|e| e.to_string())
}

/// Two distinct labels become −1 (smaller) and +1 (larger); a single label
/// keeps its sign.
pub fn binarize_labels<F: Scalar>(samples: Vec<Sample<F>>, origin: &str) -> Result<Vec<Sample<F>>> {
    let mut distinct: Vec<F> = Vec::new();
    for s in &samples {
        if !distinct.contains(&s.label()) {
            distinct.push(s.label());
            if distinct.len() > 2 {
                return Err(Error::InvalidInput(format!(
                    "{origin}: more than two distinct labels, not a binary classification set"
                )));
            }
        }
    }
    let hi = distinct.iter().copied().fold(F::neg_infinity(), F::max);
    let map = |l: F| match distinct.len() {
        2 if l == hi => F::one(),
        2 => -F::one(),
        _ if l > F::zero() => F::one(),
        _ => -F::one(),
    };
    samples
        .into_iter()
        .map(|s| Sample::new(s.indices().to_vec(), s.values().to_vec(), map(s.label())))
        .collect()
}

/// Shortest round-trip representation of every value.
pub fn to_libsvm_string<F: Scalar>(samples: &[Sample<F>]) -> String {
    let mut out = String::new();
    for s in samples {
        out.push_str(&format!("{:?}", s.label().as_f64()));
        for (&i, &v) in s.indices().iter().zip(s.values()) {
            out.push_str(&format!(" {}:{:?}", i + 1, v.as_f64()));
        }
        out.push('\n');
    }
    out
}

pub fn write_libsvm<F: Scalar>(path: impl AsRef<Path>, samples: &[Sample<F>]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_libsvm_string(samples)).map_err(|e| Error::io(path, e))
}
