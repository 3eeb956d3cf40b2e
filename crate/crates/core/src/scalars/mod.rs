//! Field backends, univariate slice polynomials and their roots.

mod field;
mod roots;
mod unipoly;

pub use field::{binomial, factorial, Field, GaussianRational, Scalar, Tolerance};
pub use roots::{exact_sqrt, find_approx_roots, find_exact_roots, residual_bound, RootSearch};
pub use unipoly::UniPoly;


use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Formats a rational as `num/den` (sign on the numerator).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `±num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (d != BigInt::from(0)).then(|| BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Exact { re: String, im: String },
    Approx { re: f64, im: f64 },
    /// Shorthand accepted on input: a bare integer.
    Integer(i64),
    /// Shorthand accepted on input: a real rational such as `"-3/4"`.
    Text(String),
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Scalar::Exact(g) => ScalarRepr::Exact { re: format_rational(&g.re), im: format_rational(&g.im) },
            Scalar::Approx(c) => ScalarRepr::Approx { re: c.re, im: c.im },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match ScalarRepr::deserialize(d)? {
            ScalarRepr::Exact { re, im } => {
                let re = parse_rational(&re).ok_or_else(|| D::Error::custom(format!("bad rational {re:?}")))?;
                let im = parse_rational(&im).ok_or_else(|| D::Error::custom(format!("bad rational {im:?}")))?;
                Ok(Scalar::Exact(GaussianRational::new(re, im)))
            }
            ScalarRepr::Approx { re, im } => Ok(Scalar::approx(re, im)),
            ScalarRepr::Integer(n) => Ok(Scalar::int(n)),
            ScalarRepr::Text(t) => parse_rational(&t)
                .map(Scalar::rational)
                .ok_or_else(|| D::Error::custom(format!("bad rational {t:?}"))),
        }
    }
}
