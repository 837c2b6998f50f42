//! Exact rational helpers for game values and rigidity thresholds.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Game values and probabilities: always a fraction with a power-of-two
/// denominator in practice, kept reduced.
pub type Value = Ratio<u64>;

/// `wins / 2^bits`, reduced.
pub fn fraction_of_pow2(wins: u64, bits: usize) -> Value {
    assert!(bits < 64, "2^{bits} does not fit in 64 bits");
    Ratio::new(wins, 1u64 << bits)
}

/// `value^n`, or `None` on overflow.
pub fn checked_pow(value: Value, n: u32) -> Option<Value> {
    let numer = value.numer().checked_pow(n)?;
    let denom = value.denom().checked_pow(n)?;
    Some(Ratio::new(numer, denom))
}

/// Whether `value < 2^(-r)`, evaluated exactly: with `value = a/b` and
/// `r = p/q` this is `a^q * 2^p < b^q`.
pub fn below_pow2_neg(value: Value, r: Ratio<u64>) -> bool {
    let q = u32::try_from(*r.denom()).expect("threshold denominator too large");
    let p = usize::try_from(*r.numer()).expect("threshold numerator too large");
    let a = BigUint::from(*value.numer()).pow(q);
    let b = BigUint::from(*value.denom()).pow(q);
    (a << p) < b
}

/// Parses `"3"`, `"3/2"` or `"0.5"`-free rational strings.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidArgument(format!("expected a nonnegative rational like 3 or 3/2, got {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Reduced fraction, e.g. `1/2`, `1`, `0`.
pub fn format_value(v: &Value) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &Value) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Fraction plus a six-decimal approximation: `1/2 (0.500000)`.
pub fn describe_value(v: &Value) -> String {
    format!("{} ({:.6})", format_value(v), to_f64(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_is_strict() {
        let half = Ratio::new(1, 2);
        assert!(!below_pow2_neg(half, Ratio::from_integer(1)));
        assert!(below_pow2_neg(Ratio::new(1, 4), Ratio::from_integer(1)));
        // 1/2 < 2^(-1/2) ≈ 0.707
        assert!(below_pow2_neg(half, Ratio::new(1, 2)));
        // 3/4 vs 2^(-1/2): 9/16 < 1/2 is false
        assert!(!below_pow2_neg(Ratio::new(3, 4), Ratio::new(1, 2)));
        assert!(!below_pow2_neg(Ratio::from_integer(1), Ratio::from_integer(0)));
        assert!(below_pow2_neg(Ratio::new(0, 1), Ratio::from_integer(5)));
    }

    #[test]
    fn ratio_parsing_and_formatting() {
        assert_eq!(parse_ratio("3/2").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_ratio(" 4 ").unwrap(), Ratio::from_integer(4));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("-1").is_err());
        assert_eq!(format_value(&Ratio::new(2, 4)), "1/2");
        assert_eq!(describe_value(&Ratio::new(1, 4)), "1/4 (0.250000)");
        assert_eq!(format_value(&Ratio::from_integer(1)), "1");
    }

    #[test]
    fn pow_overflow_is_reported() {
        assert_eq!(checked_pow(Ratio::new(1, 2), 3), Some(Ratio::new(1, 8)));
        assert_eq!(checked_pow(Ratio::new(1, 2), 64), None);
        assert_eq!(fraction_of_pow2(2, 2), Ratio::new(1, 2));
    }
}

/// Serde adapter writing a [`Value`] as its reduced fraction string.
pub mod value_string {
    use super::{format_value, parse_ratio, Value};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Value, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_value(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Value, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

/// Like [`value_string`] for optional values.
pub mod opt_value_string {
    use super::{format_value, Value};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Value>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&format_value(v)),
            None => s.serialize_none(),
        }
    }
}
