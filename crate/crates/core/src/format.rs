//! Fixed real-number formatting shared by every CSV writer.

/// Scientific notation with 17 significant digits; parses back to the same
/// `f64` bit pattern.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}
