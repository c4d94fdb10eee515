//! Exact rational scalars.
//!
//! The whole engine works over the rationals: cohomology dimensions are
//! computed from exact ranks, so no floating point is allowed anywhere.
//! A [`Scalar`] is an arbitrary-precision fraction kept in lowest terms
//! with a positive denominator (both guaranteed by `num-rational`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// (-1)^k as a scalar; `k` may be any integer since only parity matters.
pub fn sign_pow(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Parse a scalar from `"p"`, `"-p"` or `"p/q"`. Unnormalized input such as
/// `"2/4"` is reduced on construction.
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty scalar".to_string());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid numerator in scalar `{s}`"))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| format!("invalid denominator in scalar `{s}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in scalar `{s}`"));
    }
    Ok(Scalar::new(num, den))
}

/// Shortest textual form: integers print bare, everything else as `p/q`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_zero(x: &Scalar) -> bool {
    x.numer().is_zero()
}

/// True when every coefficient of the vector is zero.
pub fn all_zero(v: &[Scalar]) -> bool {
    v.iter().all(is_zero)
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_scalar("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("-6/3").unwrap(), int(-2));
        assert_eq!(parse_scalar(" 7 ").unwrap(), int(7));
        assert_eq!(parse_scalar("3/-6").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("a/2").is_err());
        assert!(parse_scalar("1/2/3").is_err());
    }

    #[test]
    fn format_shortest() {
        assert_eq!(format_scalar(&int(5)), "5");
        assert_eq!(format_scalar(&ratio(1, 2)), "1/2");
        assert_eq!(format_scalar(&ratio(-4, 2)), "-2");
    }

    #[test]
    fn sign_parity() {
        assert_eq!(sign_pow(0), one());
        assert_eq!(sign_pow(3), -one());
        assert_eq!(sign_pow(-1), -one());
        assert_eq!(sign_pow(-2), one());
    }
}
