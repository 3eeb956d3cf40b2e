//! Scalar fields: exact ℚ and ℚ(i) over big rationals, and an approximate
//! double-precision complex backend.
//!
//! Arithmetic between an exact and an approximate value promotes to the
//! approximate backend. Exact arithmetic is bit-exact; `BigRational` keeps
//! every fraction in lowest terms with a positive denominator.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Backend tag carried by polynomials, vectors and subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Rational,
    GaussianRational,
    Complex64,
}

impl Field {
    /// The smallest backend that hosts values of both tags.
    pub fn join(self, other: Field) -> Field {
        self.max(other)
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Field::Complex64)
    }

    pub fn is_real(self) -> bool {
        matches!(self, Field::Rational)
    }

    /// Whether data tagged `data` may be fed to an object over `self`.
    /// Real objects only accept real exact data; complex objects accept anything.
    pub fn accepts(self, data: Field) -> bool {
        match self {
            Field::Rational => data == Field::Rational,
            _ => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Rational => "rational",
            Field::GaussianRational => "gaussian_rational",
            Field::Complex64 => "complex64",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Writes the value as `z / w` with `z` a Gaussian integer and `w > 0`
    /// the least common denominator of both parts.
    pub fn as_integer_ratio(&self) -> (BigInt, BigInt, BigInt) {
        let w = self.re.denom().lcm(self.im.denom());
        let zr = self.re.numer() * (&w / self.re.denom());
        let zi = self.im.numer() * (&w / self.im.denom());
        (zr, zi, w)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        if o.im.is_zero() {
            return GaussianRational { re: &self.re / &o.re, im: &self.im / &o.re };
        }
        self * &o.inv().expect("division by zero in ℚ(i)")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "({} - {}i)", self.re, -self.im.clone())
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: fall back to a ratio of floats.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// A field element on either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussianRational),
    Approx(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussianRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(GaussianRational::one())
    }

    pub fn i() -> Self {
        Scalar::Exact(GaussianRational::i())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(GaussianRational::from_ints(n, 0))
    }

    pub fn gauss(re: i64, im: i64) -> Self {
        Scalar::Exact(GaussianRational::from_ints(re, im))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(GaussianRational::real(BigRational::new(num.into(), den.into())))
    }

    pub fn rational(q: BigRational) -> Self {
        Scalar::Exact(GaussianRational::real(q))
    }

    pub fn approx(re: f64, im: f64) -> Self {
        Scalar::Approx(Complex64::new(re, im))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Approx(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_one(),
            Scalar::Approx(c) => c.re == 1.0 && c.im == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Smallest backend hosting this value.
    pub fn field(&self) -> Field {
        match self {
            Scalar::Exact(g) if g.is_real() => Field::Rational,
            Scalar::Exact(_) => Field::GaussianRational,
            Scalar::Approx(_) => Field::Complex64,
        }
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Scalar::Exact(g) => Some(g),
            Scalar::Approx(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => g.to_complex(),
            Scalar::Approx(c) => *c,
        }
    }

    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_complex())
    }

    /// Modulus as a double (exact values are rounded).
    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(g.conj()),
            Scalar::Approx(c) => Scalar::Approx(c.conj()),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(g) => g.inv().map(Scalar::Exact),
            Scalar::Approx(c) if c.re == 0.0 && c.im == 0.0 => None,
            Scalar::Approx(c) => Some(Scalar::Approx(c.inv())),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(g.pow(e)),
            Scalar::Approx(c) => Scalar::Approx(c.powu(e)),
        }
    }

    /// Whether the value is zero at the given level: bit-exactly for exact
    /// values, `|x| ≤ bound` for approximate ones.
    pub fn is_negligible(&self, bound: f64) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Approx(c) => c.norm() <= bound,
        }
    }

    /// Deterministic total order used for canonical choices among exact
    /// candidates: smaller numerator norm, then smaller denominator, then
    /// larger real part, then larger imaginary part. Approximate values sort
    /// after every exact value, by modulus.
    pub fn selection_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                let (ar, ai, aw) = a.as_integer_ratio();
                let (br, bi, bw) = b.as_integer_ratio();
                let an = &ar * &ar + &ai * &ai;
                let bn = &br * &br + &bi * &bi;
                an.cmp(&bn)
                    .then_with(|| aw.cmp(&bw))
                    .then_with(|| b.re.cmp(&a.re))
                    .then_with(|| b.im.cmp(&a.im))
            }
            (Scalar::Exact(_), Scalar::Approx(_)) => Ordering::Less,
            (Scalar::Approx(_), Scalar::Exact(_)) => Ordering::Greater,
            (Scalar::Approx(a), Scalar::Approx(b)) => a
                .norm()
                .total_cmp(&b.norm())
                .then_with(|| b.re.total_cmp(&a.re))
                .then_with(|| b.im.total_cmp(&a.im)),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<GaussianRational> for Scalar {
    fn from(g: GaussianRational) -> Self {
        Scalar::Exact(g)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Self {
        Scalar::Approx(c)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                match (self, o) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Approx(a.to_complex() $op b.to_complex()),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(-g),
            Scalar::Approx(c) => Scalar::Approx(-c),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => write!(f, "{g}"),
            Scalar::Approx(c) => write!(f, "({:e} + {:e}i)", c.re, c.im),
        }
    }
}

/// Relative residual bound for approximate computations. Zero exactly when
/// the computation is meant to be exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub epsilon: f64,
}

impl Tolerance {
    pub const fn exact() -> Self {
        Self { epsilon: 0.0 }
    }

    pub const fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }

    pub fn is_exact(&self) -> bool {
        self.epsilon == 0.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-9)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let i = Scalar::i();
        assert_eq!(&i * &i, Scalar::int(-1));
        let z = Scalar::gauss(3, 4);
        let w = &z / &z;
        assert!(w.is_one());
        assert_eq!((&z * &z.conj()), Scalar::int(25));
    }

    #[test]
    fn mixed_backends_promote() {
        let a = Scalar::ratio(1, 2);
        let b = Scalar::approx(0.25, 0.0);
        let c = &a + &b;
        assert!(!c.is_exact());
        assert_eq!(c.to_complex(), Complex64::new(0.75, 0.0));
    }

    #[test]
    fn fractions_stay_reduced() {
        let a = Scalar::ratio(6, -4);
        match a {
            Scalar::Exact(g) => {
                assert_eq!(g.re.numer(), &BigInt::from(-3));
                assert_eq!(g.re.denom(), &BigInt::from(2));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn selection_prefers_small_then_positive() {
        let mut roots = [Scalar::gauss(0, -1), Scalar::gauss(0, 1), Scalar::ratio(3, 2)];
        roots.sort_by(|a, b| a.selection_cmp(b));
        assert_eq!(roots[0], Scalar::i());
        assert_eq!(roots[1], Scalar::gauss(0, -1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(factorial(4), BigInt::from(24));
    }
}
