//! Locale-independent number rendering shared by text and CSV output.

/// Shortest round-trip decimal for moderate magnitudes, scientific
/// notation otherwise.
pub fn num(x: f64) -> String {
    let ax = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if !x.is_finite() || (1e-4..1e15).contains(&ax) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn renders_without_locale_artifacts() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(1234567.25), "1234567.25");
        assert_eq!(num(2.5e-7), "2.5e-7");
        assert_eq!(num(-3e20), "-3e20");
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
