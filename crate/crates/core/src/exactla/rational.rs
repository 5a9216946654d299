//! Exact rational scalars and their string form `p/q` (or `p` when `q = 1`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Column vector of rationals.
pub type Vector = Vec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let ok = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
    if !ok {
        return Err(ParseRationalError(s.to_string()));
    }
    t.parse::<Rational>()
        .map_err(|_| ParseRationalError(s.to_string()))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rational], c: &Rational) -> Vector {
    a.iter().map(|x| x * c).collect()
}

/// `a + c * b`, in place.
pub fn vec_axpy(a: &mut [Rational], c: &Rational, b: &[Rational]) {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    if c.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "vector length mismatch");
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum RawRational {
    Str(String),
    Int(i64),
}

impl RawRational {
    fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
        match self {
            RawRational::Str(s) => parse_rational(&s).map_err(E::custom),
            RawRational::Int(i) => Ok(int(i)),
        }
    }
}

pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        RawRational::deserialize(d)?.into_rational()
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector, D::Error> {
        Vec::<RawRational>::deserialize(d)?
            .into_iter()
            .map(RawRational::into_rational)
            .collect()
    }
}

pub mod serde_rational_vec_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vector], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = v
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vector>, D::Error> {
        Vec::<Vec<RawRational>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(RawRational::into_rational).collect())
            .collect()
    }
}

pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<RawRational>::deserialize(d)?
            .map(RawRational::into_rational)
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_uses_lowest_terms() {
        assert_eq!(format_rational(&frac(6, 4)), "3/2");
        assert_eq!(format_rational(&frac(-6, 3)), "-2");
        assert_eq!(format_rational(&frac(0, 7)), "0");
        assert_eq!(format_rational(&frac(1, -3)), "-1/3");
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational("-10/4").unwrap(), frac(-5, 2));
        assert_eq!(parse_rational(" 3/9 ").unwrap(), frac(1, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "abc", "1.5", "1/2/3", "--1", "1e3"] {
            assert!(parse_rational(s).is_err(), "{s:?} should be rejected");
        }
    }

    #[test]
    fn denominator_is_positive() {
        let q = frac(3, -9);
        assert!(q.denom() > &BigInt::zero());
        assert_eq!(q, frac(-1, 3));
    }
}
