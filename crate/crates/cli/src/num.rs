//! Locale-independent number formatting.

/// Like C's `%.9g`: nine significant digits, trailing zeros dropped,
/// exponent form outside `1e-5 <= |v| < 1e9`.
pub fn g9(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{v:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let mant = trim(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mant}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp).max(0) as usize;
    trim(&format!("{v:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest representation that parses back to the same value.
pub fn exact(v: f64) -> String {
    if v.is_finite() {
        let s = format!("{v:?}");
        s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
    } else {
        g9(v)
    }
}

pub fn opt_g9(v: Option<f64>) -> String {
    v.map(g9).unwrap_or_else(|| "-".into())
}

pub fn opt_exact(v: Option<f64>) -> String {
    v.map(exact).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(g9(2.0 / 3.0), "0.666666667");
        assert_eq!(g9(6f64.sqrt() / 3.0), "0.816496581");
        assert_eq!(g9(1.0), "1");
        assert_eq!(g9(-2.5), "-2.5");
        assert_eq!(g9(123456789.0), "123456789");
        assert_eq!(g9(1234567891.0), "1.23456789e+09");
        assert_eq!(g9(0.0001), "0.0001");
        assert_eq!(g9(1.5e-7), "1.5e-07");
        assert_eq!(g9(0.0), "0");
    }

    #[test]
    fn round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1e21, 3.0] {
            assert_eq!(exact(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(exact(3.0), "3");
    }
}
