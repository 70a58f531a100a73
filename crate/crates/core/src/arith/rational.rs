use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{parse_err, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| parse_err(text, "bad numerator"))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| parse_err(text, "bad denominator"))?;
        if d.is_zero() {
            return Err(parse_err(text, "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| parse_err(text, "bad decimal"))?;
        let n = if negative { -n } else { n };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| parse_err(text, "not a rational"))?;
    Ok(Rational::from_integer(n))
}

/// Exponentiation by squaring.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    Rational::new(pow_int(base.numer(), exp), pow_int(base.denom(), exp))
}

pub(crate) fn pow_int(base: &BigInt, mut exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &sq;
        }
        exp >>= 1;
        if exp > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// The rational square root of `r`, if there is one.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// `num/den` text form.
pub fn to_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64` (subnormal/zero on underflow).
pub fn to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let (n, d) = (r.numer().abs(), r.denom().clone());
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as usize) / d
    } else {
        n / (d << (-shift) as usize)
    };
    let mag = if shift > 1200 {
        0.0
    } else {
        let q = q.to_f64().unwrap_or(f64::INFINITY);
        let half = (shift / 2) as i32;
        q * 2f64.powi(-half) * 2f64.powi(-(shift as i32 - half))
    };
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

fn pow10(k: u64) -> BigInt {
    pow_int(&BigInt::from(10), k)
}

/// `floor(log10(|r|))` for nonzero `r`.
fn decimal_exponent(r: &Rational) -> i64 {
    let v = r.abs();
    // bit-length estimate, then correct
    let est = ((v.numer().bits() as f64 - v.denom().bits() as f64) * std::f64::consts::LOG10_2)
        .floor() as i64;
    let mut e = est;
    loop {
        let lower = scaled_pow10(e);
        let upper = scaled_pow10(e + 1);
        if v < lower {
            e -= 1;
        } else if v >= upper {
            e += 1;
        } else {
            return e;
        }
    }
}

fn scaled_pow10(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(pow10(e as u64))
    } else {
        Rational::new(BigInt::one(), pow10((-e) as u64))
    }
}

/// Rounds to the nearest integer, ties to even.
pub(crate) fn round_half_even(r: &Rational) -> BigInt {
    let fl = r.floor().to_integer();
    let frac = r - Rational::from_integer(fl.clone());
    let half = rat(1, 2);
    if frac > half || (frac == half && fl.is_odd()) {
        fl + 1
    } else {
        fl
    }
}

/// Scientific notation with `digits` significant digits, correctly rounded
/// (ties to even). Zero prints as `0`.
pub fn to_scientific(r: &Rational, digits: usize) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let v = r.abs();
    let mut exp = decimal_exponent(&v);
    let mut q = round_half_even(&(&v * scaled_pow10(digits as i64 - 1 - exp)));
    if q == pow10(digits as u64) {
        q /= 10;
        exp += 1;
    }
    format_mantissa(sign, &q, digits, exp)
}

pub(crate) fn format_mantissa(sign: &str, q: &BigInt, digits: usize, exp: i64) -> String {
    let s = q.to_str_radix(10);
    debug_assert_eq!(s.len(), digits);
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn powers_and_roots() {
        assert_eq!(pow(&rat(1, 2), 10), rat(1, 1024));
        assert_eq!(pow(&rat(2, 3), 0), int(1));
        assert_eq!(sqrt_exact(&rat(9, 25)), Some(rat(3, 5)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(-1, 4)), None);
    }

    #[test]
    fn scientific_rounding() {
        assert_eq!(to_scientific(&rat(1, 2), 3), "5.00e-1");
        assert_eq!(to_scientific(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(to_scientific(&rat(2, 3), 5), "6.6667e-1");
        assert_eq!(to_scientific(&rat(9995, 1000), 3), "1.00e1");
        // ties go to even
        assert_eq!(to_scientific(&rat(125, 1000), 2), "1.2e-1");
        assert_eq!(to_scientific(&rat(135, 1000), 2), "1.4e-1");
        assert_eq!(to_scientific(&rat(-7, 1), 1), "-7e0");
        assert_eq!(to_scientific(&int(0), 4), "0");
        assert_eq!(to_scientific(&rat(1, 1000), 2), "1.0e-3");
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert_eq!(to_f64(&rat(-3, 2)), -1.5);
        let tiny = pow(&rat(1, 2), 3000);
        assert_eq!(to_f64(&tiny), 0.0);
        assert!((to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }
}

/// Serializes a rational as the string `"num/den"`.
pub mod serde_fraction {
    use super::{to_fraction, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction(r))
    }
}
