//! Helpers for the line-oriented text artifact formats.

/// Formats an `f64` so that parsing the text returns the identical bits.
/// Rust's shortest-round-trip float printing guarantees this; a decimal
/// point is forced so values stay unambiguous floats in every format.
pub fn format_f64(v: f64) -> String {
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains('E') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

/// Parses a whitespace-separated list of floats.
pub fn parse_f64_fields(line: &str) -> Result<Vec<f64>, String> {
    line.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| format!("bad float {t:?}: {e}")))
        .collect()
}
