//! Exact rational scalars and their textual form (`"p/q"` or `"p"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact scalar used by every sup-norm computation.
pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn half(x: &Q) -> Q {
    x / int(2)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn vec_to_f64(v: &[Q]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn ints(values: &[i64]) -> Vec<Q> {
    values.iter().map(|&n| int(n)).collect()
}

/// `x` clamped into `[lo, hi]`; assumes `lo <= hi`.
pub fn clamp(x: &Q, lo: &Q, hi: &Q) -> Q {
    if x < lo {
        lo.clone()
    } else if x > hi {
        hi.clone()
    } else {
        x.clone()
    }
}

pub fn max_of<'a>(values: impl IntoIterator<Item = &'a Q>) -> Option<Q> {
    values.into_iter().max().cloned()
}

pub fn min_of<'a>(values: impl IntoIterator<Item = &'a Q>) -> Option<Q> {
    values.into_iter().min().cloned()
}

/// Sup-norm distance between two equal-length vectors.
pub fn sup_dist(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Q::zero)
}

/// Parses `"p/q"` (q > 0) or an integer `"p"`. No whitespace, no signs on q.
pub fn parse(s: &str) -> Result<Q> {
    let bad = || Error::ParseRational(s.to_string());
    let valid_int = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    if !valid_int(p) || !q.bytes().all(|b| b.is_ascii_digit()) || q.is_empty() {
        return Err(bad());
    }
    let numer: BigInt = p.parse().map_err(|_| bad())?;
    let denom: BigInt = q.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(numer, denom))
}

/// Lowest-terms text; integers print without a denominator.
pub fn format(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapters that write rationals as strings.
pub mod serde_q {
    use serde::ser::{SerializeSeq, Serializer};

    use super::{format, Q};

    pub fn one<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn many<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format(x))?;
        }
        seq.end()
    }

    pub fn pairs<S: Serializer>(xs: &[(Q, Q)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for (lo, hi) in xs {
            seq.serialize_element(&[format(lo), format(hi)])?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse("-4").unwrap(), int(-4));
        assert_eq!(format(&frac(-6, 4)), "-3/2");
        assert_eq!(format(&int(7)), "7");
        for bad in ["", "1/0", "1/-2", " 1", "1.5", "a/b", "--1", "1/"] {
            assert!(parse(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn clamp_and_sup() {
        assert_eq!(clamp(&int(5), &int(0), &int(2)), int(2));
        assert_eq!(clamp(&int(-5), &int(0), &int(2)), int(0));
        assert_eq!(sup_dist(&ints(&[0, 0]), &ints(&[1, -3])), int(3));
    }
}
