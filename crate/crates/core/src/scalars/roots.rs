//! Root finding for slice polynomials: an exact search over ℚ(i) and an
//! Aberth–Ehrlich simultaneous iteration for the approximate fallback.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, GaussianRational, Scalar, Tolerance, UniPoly};
use crate::error::{Error, Result};

/// Bounds for the exact root search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootSearch {
    /// Largest norm of a candidate numerator or denominator.
    pub divisor_bound: u64,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self { divisor_bound: 1_000_000 }
    }
}

fn sqrt_rational(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Square root inside the exact field, if one exists.
///
/// For `a + bi` with `b ≠ 0` a root `x + yi` must satisfy
/// `x² = (a + |a + bi|)/2` and `y = b/(2x)`, so the search reduces to two
/// rational square roots.
pub fn exact_sqrt(q: &Scalar) -> Result<Option<Scalar>> {
    let g = q.as_exact().ok_or(Error::BackendMismatch)?;
    if g.im.is_zero() {
        if let Some(r) = sqrt_rational(&g.re) {
            return Ok(Some(Scalar::rational(r)));
        }
        return Ok(sqrt_rational(&-g.re.clone())
            .map(|r| Scalar::Exact(GaussianRational::new(BigRational::zero(), r))));
    }
    let Some(modulus) = sqrt_rational(&g.norm_sqr()) else {
        return Ok(None);
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let Some(x) = sqrt_rational(&((&g.re + &modulus) * &half)) else {
        return Ok(None);
    };
    let y = &g.im / (&x * BigRational::from_integer(BigInt::from(2)));
    let r = GaussianRational::new(x, y);
    debug_assert_eq!(&r * &r, *g);
    Ok(Some(Scalar::Exact(r)))
}

/// Gaussian integer as a pair `(re, im)`.
type GaussInt = (BigInt, BigInt);

fn gauss_divides(d: &GaussInt, g: &GaussInt) -> bool {
    // g / d = g·conj(d) / N(d)
    let n = &d.0 * &d.0 + &d.1 * &d.1;
    if n.is_zero() {
        return false;
    }
    let re = &g.0 * &d.0 + &g.1 * &d.1;
    let im = &g.1 * &d.0 - &g.0 * &d.1;
    re.is_multiple_of(&n) && im.is_multiple_of(&n)
}

/// Integer divisors of `n` not exceeding `bound`.
fn small_divisors(n: &BigInt, bound: u64) -> Vec<u64> {
    let Some(mut rem) = n.to_u128() else {
        return vec![1];
    };
    if rem == 0 {
        return vec![1];
    }
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut p: u128 = 2;
    while p * p <= rem && p <= bound as u128 {
        if rem % p == 0 {
            let mut e = 0;
            while rem % p == 0 {
                rem /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rem > 1 && rem <= bound as u128 {
        factors.push((rem, 1));
    }
    let mut divisors = vec![1u128];
    for (p, e) in factors {
        let mut next = Vec::new();
        for &d in &divisors {
            let mut acc = d;
            for _ in 0..=e {
                if acc > bound as u128 {
                    break;
                }
                next.push(acc);
                acc *= p;
            }
        }
        divisors = next;
    }
    let mut out: Vec<u64> = divisors.into_iter().map(|d| d as u64).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Divisors of a nonzero Gaussian integer with norm ≤ `bound`, one
/// representative per associate class (`re > 0`, `im ≥ 0`).
fn gaussian_divisors(g: &GaussInt, bound: u64) -> Vec<GaussInt> {
    let n = &g.0 * &g.0 + &g.1 * &g.1;
    let mut out = Vec::new();
    for d in small_divisors(&n, bound) {
        let mut x: u64 = 1;
        while x * x <= d {
            let rest = d - x * x;
            let y = rest.sqrt();
            if y * y == rest {
                let cand = (BigInt::from(x), BigInt::from(y));
                if gauss_divides(&cand, g) {
                    out.push(cand);
                }
            }
            x += 1;
        }
    }
    out
}

fn associates(g: &GaussInt) -> [GaussInt; 4] {
    [
        (g.0.clone(), g.1.clone()),
        (-g.1.clone(), g.0.clone()),
        (-g.0.clone(), -g.1.clone()),
        (g.1.clone(), -g.0.clone()),
    ]
}

fn horner(coeffs: &[GaussianRational], t: &GaussianRational) -> GaussianRational {
    coeffs
        .iter()
        .rev()
        .fold(GaussianRational::zero(), |acc, c| &(&acc * t) + c)
}

/// Divides by `(t − r)`, assuming `r` is a root.
fn deflate(coeffs: &[GaussianRational], r: &GaussianRational) -> Vec<GaussianRational> {
    let d = coeffs.len() - 1;
    let mut out = vec![GaussianRational::zero(); d];
    let mut carry = GaussianRational::zero();
    for k in (1..=d).rev() {
        carry = &(&carry * r) + &coeffs[k];
        out[k - 1] = carry.clone();
    }
    out
}

fn to_gauss_ints(coeffs: &[GaussianRational]) -> Vec<GaussInt> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom()).lcm(c.im.denom()));
    coeffs
        .iter()
        .map(|c| {
            let re = c.re.numer() * (&lcm / c.re.denom());
            let im = c.im.numer() * (&lcm / c.im.denom());
            (re, im)
        })
        .collect()
}

fn divisor_candidate_root(coeffs: &[GaussianRational], search: &RootSearch) -> Option<GaussianRational> {
    let ints = to_gauss_ints(coeffs);
    let lead = ints.last()?;
    let constant = &ints[0];
    let numerators: Vec<GaussInt> = gaussian_divisors(constant, search.divisor_bound)
        .iter()
        .flat_map(associates)
        .collect();
    let denominators = gaussian_divisors(lead, search.divisor_bound);
    let mut candidates: Vec<Scalar> = Vec::new();
    for p in &numerators {
        for q in &denominators {
            let num = GaussianRational::new(
                BigRational::from_integer(p.0.clone()),
                BigRational::from_integer(p.1.clone()),
            );
            let den = GaussianRational::new(
                BigRational::from_integer(q.0.clone()),
                BigRational::from_integer(q.1.clone()),
            );
            candidates.push(Scalar::Exact(&num / &den));
        }
    }
    candidates.sort_by(|a, b| a.selection_cmp(b));
    candidates.dedup();
    candidates.into_iter().find_map(|c| match c {
        Scalar::Exact(r) if horner(coeffs, &r).is_zero() => Some(r),
        _ => None,
    })
}

fn quadratic_roots(c: &[GaussianRational]) -> Vec<GaussianRational> {
    let (c0, c1, c2) = (&c[0], &c[1], &c[2]);
    let four = GaussianRational::from_ints(4, 0);
    let two = GaussianRational::from_ints(2, 0);
    let disc = &(c1 * c1) - &(&four * &(c2 * c0));
    let Ok(Some(Scalar::Exact(s))) = exact_sqrt(&Scalar::Exact(disc)) else {
        return Vec::new();
    };
    let denom = &two * c2;
    let neg_b = -c1;
    vec![&(&neg_b + &s) / &denom, &(&neg_b - &s) / &denom]
}

/// Every root of `p` in the exact field that the bounded search certifies.
///
/// Degree 1 by division, degree 2 by the quadratic formula, higher degree
/// by a rational-root style enumeration over Gaussian-integer divisors of
/// the constant and leading coefficients followed by deflation. The result
/// is sorted by [`Scalar::selection_cmp`] and every entry is a bit-exact
/// root. Algebraic irrational roots are not found.
pub fn find_exact_roots(p: &UniPoly, search: &RootSearch) -> Result<Vec<Scalar>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut coeffs: Vec<GaussianRational> = p
        .coeffs()
        .iter()
        .map(|c| c.as_exact().cloned().ok_or(Error::BackendMismatch))
        .collect::<Result<_>>()?;
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        roots.push(GaussianRational::zero());
        coeffs.remove(0);
    }
    loop {
        match coeffs.len() - 1 {
            0 => break,
            1 => {
                roots.push(-&(&coeffs[0] / &coeffs[1]));
                break;
            }
            2 => {
                roots.extend(quadratic_roots(&coeffs));
                break;
            }
            _ => match divisor_candidate_root(&coeffs, search) {
                Some(r) => {
                    coeffs = deflate(&coeffs, &r);
                    roots.push(r);
                }
                None => break,
            },
        }
    }
    let real_only = p.field() == Field::Rational;
    let mut out: Vec<Scalar> = roots
        .into_iter()
        .filter(|r| !real_only || r.is_real())
        .map(Scalar::Exact)
        .filter(|r| p.eval(r).is_zero())
        .collect();
    out.sort_by(|a, b| a.selection_cmp(b));
    out.dedup();
    Ok(out)
}

fn eval_c(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a)
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Residual bound `ε · max|cⱼ| · (1 + |r|)^d` for a candidate root `r`.
pub fn residual_bound(p: &UniPoly, r: Complex64, tol: Tolerance) -> f64 {
    tol.epsilon * p.max_abs_coeff() * (1.0 + r.norm()).powi(p.degree() as i32)
}

/// All `d` roots (with multiplicity) of `p` to within the relative residual
/// bound, by Aberth–Ehrlich iteration from a fixed circle of starting points.
pub fn find_approx_roots(p: &UniPoly, tol: Tolerance, max_iterations: usize) -> Result<Vec<Scalar>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = p.degree();
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    let tol = if tol.is_exact() { Tolerance::new(1e-12) } else { tol };
    let c: Vec<Complex64> = p.coeffs().iter().map(Scalar::to_complex).collect();
    let lead = c[d].norm();
    let radius = if c[0].norm() > 0.0 {
        (c[0].norm() / lead).powf(1.0 / d as f64)
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let bound = |r: Complex64| residual_bound(p, r, tol);
    let accepted = |z: &[Complex64]| z.iter().all(|&r| eval_c(&c, r).norm() <= bound(r));

    for _ in 0..max_iterations {
        let mut max_step: f64 = 0.0;
        for k in 0..d {
            let (pk, dpk) = eval_with_derivative(&c, z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let ratio = pk / dpk;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::zero()
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step <= 1e-15 || (max_step <= 1e-10 && accepted(&z)) {
            break;
        }
    }
    // Newton polish for simple roots.
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (pk, dpk) = eval_with_derivative(&c, *r);
            if dpk.norm() == 0.0 || pk.norm() == 0.0 {
                break;
            }
            let next = *r - pk / dpk;
            if eval_c(&c, next).norm() < pk.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    if !accepted(&z) {
        return Err(Error::NoConvergence { iterations: max_iterations });
    }
    Ok(z.into_iter().map(Scalar::Approx).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(exact_sqrt(&q(9, 4)).unwrap(), Some(q(3, 2)));
        assert_eq!(exact_sqrt(&Scalar::int(-1)).unwrap(), Some(Scalar::i()));
        assert_eq!(exact_sqrt(&Scalar::int(2)).unwrap(), None);
        // (2 + i)² = 3 + 4i
        let r = exact_sqrt(&Scalar::gauss(3, 4)).unwrap().unwrap();
        assert_eq!(&r * &r, Scalar::gauss(3, 4));
        assert!(exact_sqrt(&Scalar::approx(4.0, 0.0)).is_err());
    }

    /// Independent oracle for `exact_sqrt(2) = None`: no reduced fraction
    /// with small numerator and denominator squares to 2, and 2 has an odd
    /// prime exponent so no rational square root exists at all.
    #[test]
    fn two_has_no_rational_root_oracle() {
        for b in 1i64..=200 {
            for a in 1i64..=300 {
                assert_ne!(a * a, 2 * b * b);
            }
        }
        let mut n = 2u64;
        let mut e = 0;
        while n.is_multiple_of(2) {
            n /= 2;
            e += 1;
        }
        assert_eq!(e % 2, 1);
    }

    #[test]
    fn exact_roots_examples() {
        let search = RootSearch::default();
        let p = UniPoly::new(Field::GaussianRational, vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        let roots = find_exact_roots(&p, &search).unwrap();
        assert_eq!(roots, vec![Scalar::i(), Scalar::gauss(0, -1)]);

        let p = UniPoly::new(Field::Rational, vec![q(-3, 2), Scalar::one()]);
        assert_eq!(find_exact_roots(&p, &search).unwrap(), vec![q(3, 2)]);

        let zero = UniPoly::new(Field::Rational, vec![]);
        assert!(matches!(find_exact_roots(&zero, &search), Err(Error::ZeroPolynomial)));
    }

    /// t³ − 1: only the root 1 lies in ℚ(i). Oracle: the primitive cube
    /// roots of unity are (−1 ± i√3)/2, whose imaginary part is irrational;
    /// check numerically that none of them is among the returned roots and
    /// that every enumerated candidate divisor other than 1 fails.
    #[test]
    fn cubic_roots_of_unity() {
        let p = UniPoly::new(
            Field::GaussianRational,
            vec![Scalar::int(-1), Scalar::zero(), Scalar::zero(), Scalar::one()],
        );
        let roots = find_exact_roots(&p, &RootSearch::default()).unwrap();
        assert_eq!(roots, vec![Scalar::one()]);
        let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        for r in &roots {
            assert!((r.to_complex() - w).norm() > 0.1);
            assert!((r.to_complex() - w.conj()).norm() > 0.1);
        }
        for cand in [Scalar::int(-1), Scalar::i(), Scalar::gauss(0, -1)] {
            assert!(!p.eval(&cand).is_zero());
        }
    }

    #[test]
    fn cubic_with_gaussian_roots() {
        // (t − i)(t + 2)(2t − 1) = 2t³ + (3 − 2i)t² + (−2 − 3i)t + 2i
        let p = UniPoly::new(
            Field::GaussianRational,
            vec![Scalar::gauss(0, 2), Scalar::gauss(-2, -3), Scalar::gauss(3, -2), Scalar::int(2)],
        );
        let roots = find_exact_roots(&p, &RootSearch::default()).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(p.eval(r).is_zero());
        }
        assert!(roots.contains(&q(1, 2)));
        assert!(roots.contains(&Scalar::i()));
        assert!(roots.contains(&Scalar::int(-2)));
    }

    #[test]
    fn real_field_filters_complex_roots() {
        let p = UniPoly::new(Field::Rational, vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        assert!(find_exact_roots(&p, &RootSearch::default()).unwrap().is_empty());
        let p = UniPoly::from_ints(&[1, 0, -1]);
        assert_eq!(find_exact_roots(&p, &RootSearch::default()).unwrap(), vec![Scalar::one(), Scalar::int(-1)]);
    }

    #[test]
    fn approx_roots_examples() {
        let p = UniPoly::new(Field::Rational, vec![Scalar::one(), Scalar::zero(), Scalar::one()]);
        let roots = find_approx_roots(&p, Tolerance::new(1e-12), 200).unwrap();
        assert_eq!(roots.len(), 2);
        for target in [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)] {
            assert!(roots.iter().any(|r| (r.to_complex() - target).norm() < 1e-12));
        }

        // Oracle for √2: bisection on [1, 2].
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid * mid - 2.0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let roots = find_approx_roots(&p, Tolerance::new(1e-12), 200).unwrap();
        assert!(roots.iter().any(|r| (r.to_complex() - Complex64::new(lo, 0.0)).norm() < 1e-12));
        assert!(roots.iter().any(|r| (r.to_complex() + Complex64::new(lo, 0.0)).norm() < 1e-12));

        let constant = UniPoly::from_ints(&[5]);
        assert!(matches!(find_approx_roots(&constant, Tolerance::new(1e-12), 200), Err(Error::ZeroDegree)));
    }

    #[test]
    fn approx_roots_respect_residual_bound_for_multiple_roots() {
        // (t − 1)³
        let p = UniPoly::from_ints(&[-1, 3, -3, 1]);
        let tol = Tolerance::new(1e-12);
        let roots = find_approx_roots(&p, tol, 200).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            let z = r.to_complex();
            assert!(p.eval(&r).abs() <= residual_bound(&p, z, tol));
        }
    }
}
