use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Field, Scalar};

/// Univariate polynomial `Σ cⱼ tʲ`, coefficients indexed by power.
///
/// Trailing zero coefficients are trimmed, so the last coefficient is the
/// leading one unless the polynomial is identically zero (empty list).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        let field = coeffs.iter().fold(field, |f, c| f.join(c.field()));
        Self { field, coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(Field::Rational, coeffs.iter().map(|&c| Scalar::int(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `tᵏ` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::int(k as i64))
            .collect();
        UniPoly::new(self.field, coeffs)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·t")?,
                _ => write!(f, "{c}·t^{k}")?,
            }
        }
        Ok(())
    }
}
