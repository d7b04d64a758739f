//! Fixed-precision number formatting shared by the CSV and JSON writers.

/// Significant digits used for every emitted float.
pub const SIG_DIGITS: usize = 15;

/// Formats `v` like C's `%.15g`: 15 significant digits, trailing zeros
/// stripped, scientific notation outside `1e-4 <= |v| < 1e15`.
pub fn fmt_g(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

/// Rounds to 15 significant digits, the value that `fmt_g` would print.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    fmt_g(v).parse().expect("fmt_g output parses")
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(std::f64::consts::SQRT_2), "1.4142135623731");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(-2.5), "-2.5");
        assert_eq!(fmt_g(0.353553390593274), "0.353553390593274");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1.25e20), "1.25e+20");
        assert_eq!(fmt_g(123456789012345.0), "123456789012345");
        assert_eq!(fmt_g(1234567890123456.0), "1.23456789012346e+15");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(0.0), "0");
    }

    proptest! {
        #[test]
        fn round_trip_is_stable(v in -1e300f64..1e300) {
            let once = fmt_g(v);
            let parsed: f64 = once.parse().unwrap();
            prop_assert_eq!(fmt_g(parsed), once);
            prop_assert!((parsed - v).abs() <= 1e-14 * v.abs());
        }
    }
}
