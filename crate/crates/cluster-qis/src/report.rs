//! Deterministic JSON artifacts: sorted keys, fixed float formatting, and
//! tolerance-aware fixture comparison.

use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::error::{Error, Result};

/// Version stamp carried by sweep, audit, security, and verify artifacts.
pub const FIXTURE_VERSION: u32 = 1;

/// Absolute tolerance used when comparing freshly computed artifacts with
/// pinned fixtures.
pub const FIXTURE_FLOAT_TOL: f64 = 1e-9;

struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        // 17 significant digits round-trip every finite f64.
        write!(writer, "{value:.16e}")
    }
}

/// Serializes with sorted object keys and 17-significant-digit floats; the
/// same artifact always produces byte-identical text.
pub fn to_canonical_json<T: Serialize>(artifact: &T) -> Result<String> {
    // serde_json's default map is ordered, so going through Value sorts keys.
    let value = serde_json::to_value(artifact)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("json is utf-8"))
}

pub fn write_canonical_json<T: Serialize>(artifact: &T, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(to_canonical_json(artifact)?.as_bytes())?;
    Ok(())
}

pub fn read_json_value(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Structural comparison with absolute float tolerance; returns the list of
/// differing paths (empty = match).
pub fn diff_values(expected: &Value, got: &Value, tol: f64) -> Vec<String> {
    let mut diffs = Vec::new();
    diff_rec(expected, got, tol, "$", &mut diffs);
    diffs
}

fn diff_rec(expected: &Value, got: &Value, tol: f64, path: &str, out: &mut Vec<String>) {
    // reported diffs are capped: one mismatch per path is enough to act on
    if out.len() >= 50 {
        return;
    }
    match (expected, got) {
        (Value::Object(a), Value::Object(b)) => {
            for key in a.keys().chain(b.keys().filter(|k| !a.contains_key(*k))) {
                let p = format!("{path}.{key}");
                match (a.get(key), b.get(key)) {
                    (Some(x), Some(y)) => diff_rec(x, y, tol, &p, out),
                    (Some(_), None) => out.push(format!("{p}: missing in computed artifact")),
                    (None, Some(_)) => out.push(format!("{p}: unexpected in computed artifact")),
                    (None, None) => unreachable!(),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                out.push(format!("{path}: array length {} vs {}", a.len(), b.len()));
                return;
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                diff_rec(x, y, tol, &format!("{path}[{i}]"), out);
            }
        }
        (Value::Number(a), Value::Number(b)) => {
            let (x, y) = (a.as_f64().unwrap_or(f64::NAN), b.as_f64().unwrap_or(f64::NAN));
            if !((x - y).abs() <= tol) {
                out.push(format!("{path}: {x} vs {y}"));
            }
        }
        _ => {
            if expected != got {
                out.push(format!("{path}: {expected} vs {got}"));
            }
        }
    }
}

/// Compares a computed artifact against its pinned fixture file.
pub fn check_against_fixture<T: Serialize>(artifact: &T, fixture_path: &Path) -> Result<()> {
    let expected = read_json_value(fixture_path).map_err(|e| {
        Error::FixtureMismatch(format!(
            "cannot read fixture {}: {e}",
            fixture_path.display()
        ))
    })?;
    let got = serde_json::to_value(artifact)?;
    let diffs = diff_values(&expected, &got, FIXTURE_FLOAT_TOL);
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(Error::FixtureMismatch(format!(
            "{} differs at:\n  {}",
            fixture_path.display(),
            diffs.join("\n  ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn serialization_is_byte_identical_and_sorted() {
        let v = json!({"zeta": 1.5, "alpha": {"b": 2, "a": [0.1, 0.2]}});
        let one = to_canonical_json(&v).unwrap();
        let two = to_canonical_json(&v).unwrap();
        assert_eq!(one, two);
        let alpha = one.find("\"alpha\"").unwrap();
        let zeta = one.find("\"zeta\"").unwrap();
        assert!(alpha < zeta);
    }

    #[test]
    fn floats_use_17_significant_digits_and_round_trip() {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        let text = to_canonical_json(&json!({ "x": x })).unwrap();
        assert!(text.contains("7.0710678118654757e-1"), "{text}");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), x);
    }

    #[test]
    fn diff_reports_paths() {
        let a = json!({"x": [1.0, 2.0], "y": "s"});
        let b = json!({"x": [1.0, 2.5], "y": "s"});
        let d = diff_values(&a, &b, 1e-9);
        assert_eq!(d.len(), 1);
        assert!(d[0].starts_with("$.x[1]"));
        assert!(diff_values(&a, &a, 1e-9).is_empty());
        // within-tolerance float differences do not count
        let c = json!({"x": [1.0 + 1e-12, 2.0], "y": "s"});
        assert!(diff_values(&a, &c, 1e-9).is_empty());
    }
}
