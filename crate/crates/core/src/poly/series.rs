use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{IntPolynomial, PolyError};

/// Power series in `t` known exactly through `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Pads with zeros or truncates so that exactly `order + 1` terms remain.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn from_polynomial(p: &IntPolynomial, order: usize) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .take(order + 1)
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
            order,
        )
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    pub(crate) fn add_term(&mut self, k: usize, c: &BigRational) {
        if let Some(slot) = self.coeffs.get_mut(k) {
            *slot += c;
        }
    }

    /// Cauchy product, valid through the smaller of the two orders.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn mul_poly(&self, p: &IntPolynomial) -> Self {
        self.mul(&Self::from_polynomial(p, self.order()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Division by a polynomial with nonzero constant term.
    pub fn div_poly(&self, den: &IntPolynomial) -> Result<Self, PolyError> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(PolyError::DenominatorVanishesAtZero);
        }
        let d0 = BigRational::from_integer(d0);
        let den: Vec<BigRational> = den
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let mut acc = self.coeffs[k].clone();
            for j in 1..den.len().min(k + 1) {
                acc -= &den[j] * &out[k - j];
            }
            out.push(acc / &d0);
        }
        Ok(Self { coeffs: out })
    }

    /// Coefficients as integers, or the index of the first non-integer one.
    pub fn to_integers(&self) -> Result<Vec<BigInt>, usize> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if c.is_integer() { Ok(c.to_integer()) } else { Err(k) })
            .collect()
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
