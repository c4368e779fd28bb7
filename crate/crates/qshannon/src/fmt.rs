//! Deterministic number formatting for CSV/JSON output: fixed significant
//! digits, decimal in the human range, scientific outside it.

/// `x` at `digits` significant digits. Zero prints as "0"; exponents outside
/// [-4, 14] switch to scientific notation.
pub fn sig(x: f64, digits: u32) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..=14).contains(&exp) {
        format!("{:.*e}", digits as usize - 1, x)
    } else {
        let prec = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", prec, x)
    }
}

/// The crate-wide default: 12 significant digits.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}
