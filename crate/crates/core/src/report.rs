//! Number formatting shared by every CSV writer.

/// Scientific notation with 16 significant digits; `-0` prints as `0`.
pub fn fmt_csv(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.15e}")
}

/// Comma-free list of angles for `#` header lines.
pub fn fmt_phis(phis: &[f64]) -> String {
    if phis.is_empty() {
        return "-".to_string();
    }
    phis.iter().map(|p| fmt_csv(*p)).collect::<Vec<_>>().join(";")
}
