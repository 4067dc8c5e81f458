//! Truncated power series with exact rational coefficients, enough to
//! extract counting-sequence terms from ordinary and exponential
//! generating functions. No floating point is involved anywhere.

use num::{BigInt, BigRational, One, Zero};

/// A power series truncated after a fixed number of coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    /// The polynomial with the given integer coefficients, truncated or
    /// zero-padded to `len` terms.
    pub fn from_integers(poly: &[i64], len: usize) -> Self {
        let mut coeffs: Vec<BigRational> = poly
            .iter()
            .take(len)
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        coeffs.resize(len, BigRational::zero());
        Self { coeffs }
    }

    /// `e^z` truncated to `len` terms.
    pub fn exponential(len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        let mut factorial = BigInt::one();
        for k in 0..len {
            if k > 0 {
                factorial *= BigInt::from(k);
            }
            coeffs.push(BigRational::new(BigInt::one(), factorial.clone()));
        }
        Self { coeffs }
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn scale(&self, factor: i64) -> Self {
        let factor = BigRational::from_integer(factor.into());
        Self { coeffs: self.coeffs.iter().map(|c| c * &factor).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        let len = self.len();
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self { coeffs }
    }

    /// Series division; the divisor must have a nonzero constant term.
    pub fn div(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        assert!(!other.coeffs[0].is_zero(), "divisor constant term is zero");
        let len = self.len();
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= &other.coeffs[j] * &coeffs[k - j];
            }
            coeffs.push(acc / &other.coeffs[0]);
        }
        Self { coeffs }
    }

    /// Ordinary-GF terms: the coefficients themselves, which must be
    /// integers.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "coefficient {c} is not an integer");
                c.to_integer()
            })
            .collect()
    }

    /// EGF terms: coefficient `n` times `n!`, which must be an integer.
    pub fn egf_terms(&self) -> Vec<BigInt> {
        let mut factorial = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    factorial *= BigInt::from(n);
                }
                let term = c * BigRational::from_integer(factorial.clone());
                assert!(term.is_integer(), "term {n} is not an integer: {term}");
                term.to_integer()
            })
            .collect()
    }
}
