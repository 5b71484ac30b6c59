//! Fixed formatting for exported tables and documents.

use serde::Serialize;

use crate::error::{Error, Result};

/// Twelve significant digits, scientific notation.
pub fn csv_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Pretty JSON with struct field order preserved and shortest round-trip
/// floats.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// CSV text from a header and rows of already formatted cells.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_have_twelve_digits() {
        assert_eq!(csv_float(6.0), "6.00000000000e0");
        assert_eq!(csv_float(-0.1), "-1.00000000000e-1");
    }

    #[test]
    fn json_floats_round_trip() {
        let v = 0.1 + 0.2;
        let s = to_json(&vec![v]).unwrap();
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0], v);
    }

    #[test]
    fn tables_end_lines_with_lf() {
        let t = csv_table(&["a", "b"], vec![vec!["1".into(), "2".into()]]);
        assert_eq!(t, "a,b\n1,2\n");
    }
}
