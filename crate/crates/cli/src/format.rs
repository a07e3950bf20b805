//! number formatting for tables and reports

/// `x` rounded to `digits` significant digits; plain notation for moderate exponents
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // round first so that 9.99995 -> 10.000 picks the right exponent
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-4..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

/// full round-trip precision
pub fn full(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:?}")
}

/// `sig` or `full` depending on whether a precision was requested
pub fn num(x: f64, precision: Option<usize>) -> String {
    match precision {
        Some(d) => sig(x, d),
        None => full(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_digits() {
        assert_eq!(sig(std::f64::consts::FRAC_1_SQRT_2, 5), "0.70711");
        assert_eq!(sig(2.375f64.sqrt(), 5), "1.5411");
        assert_eq!(sig(123456.0, 5), "1.2346e5");
        assert_eq!(sig(9.99996, 5), "10.000");
        assert_eq!(sig(0.00012345678, 5), "0.00012346");
        assert_eq!(sig(1.5e-7, 5), "1.5000e-7");
        assert_eq!(sig(f64::INFINITY, 5), "inf");
        assert_eq!(sig(0.0, 5), "0");
    }

    #[test]
    fn full_round_trips() {
        let x = 0.1 + 0.2;
        assert_eq!(full(x).parse::<f64>().unwrap(), x);
    }
}
