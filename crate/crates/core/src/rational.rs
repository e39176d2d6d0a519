//! Exact rational helpers and their `"num/den"` text form.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    BigRational::new(num.into(), den.into())
}

pub fn from_counts(num: &BigUint, den: &BigUint) -> Rational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Always `num/den`, including integers (`1/1`).
pub fn to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (t.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// `⌊r⌋` for a nonnegative rational.
pub fn floor_nonneg(r: &Rational) -> BigUint {
    r.numer()
        .div_floor(r.denom())
        .to_biguint()
        .expect("nonnegative rational")
}

/// Decimal approximation, advisory only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let r = ratio(10, 16);
        assert_eq!(to_text(&r), "5/8");
        assert_eq!(parse("5/8").unwrap(), r);
        assert_eq!(parse("3").unwrap(), ratio(3, 1));
        assert_eq!(to_text(&ratio(3, 1)), "3/1");
        assert!(parse("1/0").is_none());
        assert!(parse("a/2").is_none());
        assert_eq!(floor_nonneg(&ratio(32, 9)), BigUint::from(3u32));
    }
}
