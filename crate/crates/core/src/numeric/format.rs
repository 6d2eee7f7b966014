//! Text formatting for reals: 17 significant digits, `%.17g` style.

/// Formats `x` like C's `%.17g` (round-trip safe for `f64`).
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent digits");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    if (-5..17).contains(&exp) {
        let body = if exp >= 0 {
            let split = (exp + 1) as usize;
            let (int, frac) = digits.split_at(split);
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                int.to_string()
            } else {
                format!("{int}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{digits}");
            format!("0.{}", frac.trim_end_matches('0'))
        };
        format!("{sign}{body}")
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let es = if exp < 0 { '-' } else { '+' };
        let ea = exp.abs();
        if rest.is_empty() {
            format!("{sign}{lead}e{es}{ea:02}")
        } else {
            format!("{sign}{lead}.{rest}e{es}{ea:02}")
        }
    }
}

/// JSON-safe number text (non-finite values become `null`).
pub fn json_real(x: f64) -> String {
    if x.is_finite() {
        fmt_real(x)
    } else {
        "null".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(0.25), "0.25");
        assert_eq!(fmt_real(-2.5), "-2.5");
        assert_eq!(fmt_real(0.1), "0.10000000000000001");
        assert_eq!(fmt_real(1e-7), "9.9999999999999995e-08");
        assert_eq!(fmt_real(1e20), "1e+20");
        assert_eq!(fmt_real(25.132741228718345), "25.132741228718345");
        assert_eq!(fmt_real(123456.0), "123456");
    }

    proptest! {
        #[test]
        fn round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = fmt_real(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
