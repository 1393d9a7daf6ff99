//! Number formatting shared by every text output.

/// Formats `x` with 12 significant digits, trimming trailing zeros.
///
/// Integers print without a decimal point and very large or very small
/// magnitudes switch to exponent notation.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}

pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exponent) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{}", trim_zeros(mantissa), exponent);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x))
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}
