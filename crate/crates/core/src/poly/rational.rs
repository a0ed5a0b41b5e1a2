use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntPolynomial, PolyError, TruncatedSeries};

/// Quotient of two integer polynomials.
///
/// Kept with content 1 and a positive leading denominator coefficient.
/// Common polynomial factors are not cancelled; equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunction {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let mut g = num.content().gcd(&den.content());
        if den.leading_coefficient().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let divide = |p: &IntPolynomial| IntPolynomial::new(p.coeffs().iter().map(|c| c / &g).collect());
        Ok(Self {
            num: divide(&num),
            den: divide(&den),
        })
    }

    pub fn from_polynomial(p: IntPolynomial) -> Self {
        Self::new(p, IntPolynomial::one()).expect("unit denominator")
    }

    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels the polynomial gcd of numerator and denominator.
    pub fn reduced(&self) -> Self {
        if self.num.is_zero() {
            return Self::from_polynomial(IntPolynomial::zero());
        }
        let g = self.num.gcd(&self.den);
        let num = self.num.exact_div(&g);
        let den = self.den.exact_div(&g);
        match (num, den) {
            (Some(n), Some(d)) => Self::new(n, d).expect("nonzero denominator"),
            // Primitive gcd always divides exactly over the integers by Gauss's lemma.
            _ => unreachable!("primitive gcd must divide both terms"),
        }
    }

    /// Multiplies by a polynomial without cancelling anything.
    pub fn mul_poly(&self, p: &IntPolynomial) -> Self {
        Self::new(&self.num * p, self.den.clone()).expect("nonzero denominator")
    }

    /// Exact polynomial value when the denominator divides the numerator.
    pub fn as_polynomial(&self) -> Option<IntPolynomial> {
        self.num.exact_div(&self.den)
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Maclaurin coefficients through `t^order`.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries, PolyError> {
        let shift = self.num.low_order().min(self.den.low_order());
        let num = self.num.shift_down(shift);
        let den = self.den.shift_down(shift);
        if den.coeff(0).is_zero() {
            return Err(PolyError::DenominatorVanishesAtZero);
        }
        TruncatedSeries::from_polynomial(&num, order).div_poly(&den)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == IntPolynomial::one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl From<BigInt> for RationalFunction {
    fn from(c: BigInt) -> Self {
        Self::from_polynomial(IntPolynomial::constant(c))
    }
}
