//! Exact rationals.
//!
//! Values cross text boundaries only as `"p/q"` (or bare integer) strings.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn ratio(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

pub fn from_count(count: usize, n: usize) -> Rational {
    Rational::new(count as i128, n as i128)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or `"p"`. Decimal points are rejected.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = |message: &str| Error::MalformedInput {
        line: 1,
        column: 1,
        message: format!("{message}: {t:?}"),
    };
    if t.is_empty() {
        return Err(bad("empty rational"));
    }
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(bad("decimal notation is not accepted, use p/q"));
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: i128 = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: i128 = den.parse().map_err(|_| bad("bad denominator"))?;
    if den == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Always prints `p/q`, including for integers (`1/1`), so outputs parse back uniformly.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `⌊r⌋` as an integer.
pub fn floor(r: &Rational) -> i128 {
    r.floor().to_integer()
}

pub(crate) mod serde_str {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(de::Error::custom)
    }
}
