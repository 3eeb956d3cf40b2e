//! Rank, independence and small dense solves over the scalar backends.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polynomials::SparseVector;
use crate::scalars::{Field, GaussianRational, Scalar};

/// Pivot threshold for approximate elimination, relative to the largest entry.
pub const APPROX_PIVOT_RELATIVE: f64 = 1e-9;

/// Incremental row echelon form keyed by leading coordinate.
///
/// Exact rows are kept fraction-free: entries are Gaussian integers with
/// their common rational-integer content divided out, and elimination uses
/// cross-multiplication. Approximate rows use ordinary division with a
/// relative pivot threshold.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVector>,
    approximate: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn approximate() -> Self {
        Self { rows: BTreeMap::new(), approximate: true }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Leading coordinates of the stored rows, increasing.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Reduces `v` against the stored rows; `None` means `v` is dependent on them.
    fn reduce(&self, v: &SparseVector) -> Option<SparseVector> {
        if self.approximate || !v.is_exact() {
            return self.reduce_approx(v);
        }
        let mut w = primitive(v)?;
        while let Some(j) = w.min_index() {
            let Some(row) = self.rows.get(&j) else { return Some(w) };
            let a = row.get(j);
            let b = w.get(j);
            // a·w − b·row clears coordinate j and stays integral
            w = primitive(&w.scale(&a).axpy(&-&b, row))?;
        }
        None
    }

    fn reduce_approx(&self, v: &SparseVector) -> Option<SparseVector> {
        let threshold = APPROX_PIVOT_RELATIVE * v.max_abs();
        let mut w = chop(&v.to_approx(), threshold);
        while let Some(j) = w.min_index() {
            let Some(row) = self.rows.get(&j) else { return Some(w) };
            let c = &w.get(j) / &row.get(j);
            w = w.axpy(&-&c, row);
            w.set(j, Scalar::zero());
            w = chop(&w, threshold);
        }
        None
    }

    /// Adds `v` if it is independent of the stored rows; returns whether it was.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        if !v.is_exact() && !self.approximate {
            self.approximate = true;
            let rows: Vec<SparseVector> = self.rows.values().map(SparseVector::to_approx).collect();
            self.rows.clear();
            for r in rows {
                let j = r.min_index().expect("stored rows are nonzero");
                self.rows.insert(j, r);
            }
        }
        match self.reduce(v) {
            Some(w) => {
                let j = w.min_index().expect("reduced row is nonzero");
                self.rows.insert(j, w);
                true
            }
            None => false,
        }
    }

    pub fn is_independent(&self, v: &SparseVector) -> bool {
        if !v.is_exact() && !self.approximate {
            let mut copy = self.clone();
            return copy.insert(v);
        }
        self.reduce(v).is_some()
    }
}

fn chop(v: &SparseVector, threshold: f64) -> SparseVector {
    SparseVector::from_entries(v.field(), v.iter().filter(|(_, x)| x.abs() > threshold).map(|(j, x)| (j, x.clone())))
}

/// Scales an exact vector to Gaussian-integer entries with unit rational content.
fn primitive(v: &SparseVector) -> Option<SparseVector> {
    if v.is_zero() {
        return None;
    }
    let mut lcm = BigInt::one();
    for (_, x) in v.iter() {
        let g = x.as_exact().expect("exact vector");
        lcm = lcm.lcm(g.re.denom()).lcm(g.im.denom());
    }
    let mut gcd = BigInt::zero();
    let mut ints = Vec::with_capacity(v.nnz());
    for (j, x) in v.iter() {
        let g = x.as_exact().expect("exact vector");
        let re = (&g.re * BigRational::from_integer(lcm.clone())).to_integer();
        let im = (&g.im * BigRational::from_integer(lcm.clone())).to_integer();
        gcd = gcd.gcd(&re).gcd(&im);
        ints.push((j, re, im));
    }
    let gcd = gcd.abs();
    Some(SparseVector::from_entries(
        v.field(),
        ints.into_iter().map(|(j, re, im)| {
            let g = GaussianRational::new(BigRational::from_integer(re / &gcd), BigRational::from_integer(im / &gcd));
            (j, Scalar::Exact(g))
        }),
    ))
}

/// Rank of a list of vectors: fraction-free elimination when every vector
/// is exact, thresholded elimination otherwise.
pub fn exact_rank(vectors: &[SparseVector]) -> usize {
    let mut e = if vectors.iter().all(SparseVector::is_exact) { Echelon::new() } else { Echelon::approximate() };
    vectors.iter().filter(|v| e.insert(v)).count()
}

/// Inverse of a square matrix given by rows, or `None` if it is singular.
pub fn invert(rows: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = rows.len();
    let exact = rows.iter().flatten().all(Scalar::is_exact);
    let scale = rows.iter().flatten().map(Scalar::abs).fold(0.0, f64::max);
    let mut a: Vec<Vec<Scalar>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n, "square matrix");
            let mut row = r.clone();
            row.extend((0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = if exact {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            let best = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
            if a[best][col].abs() <= APPROX_PIVOT_RELATIVE * scale {
                return None;
            }
            best
        };
        a.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let c = a[r][col].clone();
                let pivot = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x = &*x - &(&c * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Field of a vector list (the join of the entries' fields).
pub fn common_field(vectors: &[SparseVector]) -> Field {
    vectors.iter().fold(Field::Rational, |f, v| f.join(v.field()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const R: Field = Field::Rational;

    #[test]
    fn rank_examples() {
        let e1 = SparseVector::unit(R, 1);
        let e2 = SparseVector::unit(R, 2);
        assert_eq!(exact_rank(&[e1.clone(), e2.clone(), e1.add(&e2)]), 2);
        assert_eq!(exact_rank(&[]), 0);
    }

    fn random_vector(rng: &mut ChaCha8Rng) -> SparseVector {
        SparseVector::from_entries(R, (1..=8).map(|j| (j, Scalar::ratio(rng.random_range(-6..=6), rng.random_range(1..=4)))))
    }

    /// Oracle: three random vectors plus two random combinations of them.
    #[test]
    fn rank_three_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let base: Vec<SparseVector> = (0..3).map(|_| random_vector(&mut rng)).collect();
            let independent = {
                let mut e = Echelon::new();
                base.iter().all(|v| e.insert(v))
            };
            if !independent {
                continue;
            }
            let mut vs = base.clone();
            for _ in 0..2 {
                let mut c = SparseVector::zero(R);
                for b in &base {
                    c = c.axpy(&Scalar::ratio(rng.random_range(-5..=5), rng.random_range(1..=3)), b);
                }
                vs.push(c);
            }
            assert_eq!(exact_rank(&vs), 3);
        }
    }

    #[test]
    fn gaussian_rank() {
        let g = Field::GaussianRational;
        let a = SparseVector::from_entries(g, [(1, Scalar::one()), (2, Scalar::i())]);
        let b = a.scale(&Scalar::gauss(2, -3));
        assert_eq!(exact_rank(&[a.clone(), b]), 1);
        let c = SparseVector::from_entries(g, [(1, Scalar::one()), (2, -Scalar::i())]);
        assert_eq!(exact_rank(&[a, c]), 2);
    }

    #[test]
    fn approximate_rank_threshold() {
        let a = SparseVector::from_entries(Field::Complex64, [(1, Scalar::approx(1.0, 0.0)), (2, Scalar::approx(2.0, 0.0))]);
        let b = SparseVector::from_entries(
            Field::Complex64,
            [(1, Scalar::approx(2.0, 0.0)), (2, Scalar::approx(4.0 + 1e-14, 0.0))],
        );
        assert_eq!(exact_rank(&[a.clone(), b]), 1);
        let c = SparseVector::from_entries(Field::Complex64, [(1, Scalar::approx(2.0, 0.0)), (2, Scalar::approx(4.1, 0.0))]);
        assert_eq!(exact_rank(&[a, c]), 2);
    }

    #[test]
    fn inverse() {
        let m = vec![vec![Scalar::int(1), Scalar::int(1)], vec![Scalar::int(1), Scalar::int(-1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], Scalar::ratio(1, 2));
        assert_eq!(inv[1][1], Scalar::ratio(-1, 2));
        assert!(invert(&[vec![Scalar::int(1), Scalar::int(2)], vec![Scalar::int(2), Scalar::int(4)]]).is_none());
    }
}
