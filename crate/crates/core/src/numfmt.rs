//! Float formatting shared by the JSON and CSV writers: 17 significant digits.

/// `v` in scientific notation with 17 significant digits, or `inf`, `-inf`, `nan`.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}
