use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Polynomial in `t` with arbitrary-precision integer coefficients.
///
/// Coefficients are stored in ascending degree and kept canonical: the
/// highest stored coefficient is nonzero, and the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplicity of the root `t = 0`; zero for the zero polynomial.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `t^k`, dropping the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// `self / content`, normalised to a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading_coefficient().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sign of `self(x)` computed without fractions: with `x = n/d`, `d > 0`,
    /// the sign of `d^deg * self(x)` is the sign of `sum c_k n^k d^(deg-k)`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let Some(deg) = self.degree() else {
            return Ordering::Equal;
        };
        let (n, d) = (x.numer(), x.denom());
        let mut acc = self.coeffs[deg].clone();
        let mut d_pow = BigInt::one();
        for c in self.coeffs[..deg].iter().rev() {
            d_pow *= d;
            acc = acc * n + c * &d_pow;
        }
        acc.sign_ordering()
    }

    /// Euclidean division over the rationals; returns `None` when the
    /// quotient is not an integer polynomial or the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_rational(divisor)?;
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(q.len());
        for c in q {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(Self::new(out))
    }

    pub(crate) fn div_rem_rational(&self, divisor: &Self) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
        let dd = divisor.degree()?;
        let lc = BigRational::from_integer(divisor.coeffs[dd].clone());
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        if self.coeffs.len() <= dd {
            return Some((Vec::new(), rem));
        }
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / &lc;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * BigRational::from_integer(c.clone());
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Some((quot, rem))
    }

    /// Pseudo-remainder `lc(divisor)^(deg self - deg divisor + 1) * self mod divisor`,
    /// computed entirely over the integers.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("pseudo_rem by zero polynomial");
        let lc = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return self.clone();
        }
        // Exactly deg(self) - deg(divisor) + 1 scalings, even when a step's
        // leading term is already zero.
        for top in (dd..rem.len()).rev() {
            let lead = rem[top].clone();
            for c in rem[..top].iter_mut() {
                *c *= lc;
            }
            let shift = top - dd;
            for (j, c) in divisor.coeffs[..dd].iter().enumerate() {
                rem[shift + j] -= &lead * c;
            }
            rem[top] = BigInt::zero();
        }
        Self::new(rem)
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    /// `gcd(0, 0)` is zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .exact_div(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: &IntPolynomial) -> IntPolynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl fmt::Display for IntPolynomial {
    /// Ascending sparse form, e.g. `1 - 2*t - t^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolyParser::new(s).parse()
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: &str) -> PolyError {
        PolyError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|digits| digits.parse().ok())
    }

    fn parse(mut self) -> Result<IntPolynomial, PolyError> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let Some(c) = self.peek() else {
                if first {
                    return Err(self.err("empty polynomial"));
                }
                break;
            };
            let mut sign = BigInt::one();
            match c {
                b'+' | b'-' => {
                    if c == b'-' {
                        sign = -sign;
                    }
                    self.pos += 1;
                }
                _ if !first => return Err(self.err("expected '+' or '-'")),
                _ => {}
            }
            first = false;
            let coeff = self.integer();
            let mut degree = 0usize;
            if self.peek() == Some(b'*') {
                if coeff.is_none() {
                    return Err(self.err("'*' without a coefficient"));
                }
                self.pos += 1;
                if self.peek() != Some(b't') {
                    return Err(self.err("expected 't' after '*'"));
                }
            }
            if self.peek() == Some(b't') {
                self.pos += 1;
                degree = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    degree = self
                        .integer()
                        .and_then(|d| d.to_usize())
                        .ok_or_else(|| self.err("expected exponent"))?;
                }
            } else if coeff.is_none() {
                return Err(self.err("expected coefficient or 't'"));
            }
            let value = sign * coeff.unwrap_or_else(BigInt::one);
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, BigInt::zero());
            }
            coeffs[degree] += value;
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    // Schoolbook convolution on plain i64 slices, independent of `Mul`.
    fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for i in 0..a.len() {
            for j in 0..b.len() {
                out[i + j] += a[i] * b[j];
            }
        }
        out
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, -2]) * &p(&[1, 1]), p(&[1, -1, -2]));
        assert!((&p(&[3, 4, 5]) * &IntPolynomial::zero()).is_zero());
        let a = [1, 0, 0, 1];
        let b = [1, -2, 0, -1];
        let expected = convolve(&a, &b);
        assert_eq!(expected, vec![1, -2, 0, 0, -2, 0, -1]);
        assert_eq!(&p(&a) * &p(&b), p(&expected));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPolynomial::zero());
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert_eq!(q.coeffs().len(), 2);
        assert_eq!(IntPolynomial::from_i64s(&[0, 0]).degree(), None);
    }

    #[test]
    fn display_and_parse() {
        let q = p(&[1, -2, 0, -1]);
        assert_eq!(q.to_string(), "1 - 2*t - t^3");
        assert_eq!(p(&[0, 1]).to_string(), "t");
        assert_eq!(p(&[-3]).to_string(), "-3");
        assert_eq!(p(&[0, -1, 0, 4]).to_string(), "-t + 4*t^3");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!("1 - 2*t - t^3".parse::<IntPolynomial>().unwrap(), q);
        assert_eq!("  -t^3 -2 * t+1 ".parse::<IntPolynomial>().unwrap(), q);
        assert_eq!("t + t".parse::<IntPolynomial>().unwrap(), p(&[0, 2]));
        assert_eq!("-7".parse::<IntPolynomial>().unwrap(), p(&[-7]));
    }

    #[test]
    fn parse_errors_report_position() {
        let err = "1 - 2*x".parse::<IntPolynomial>().unwrap_err();
        assert!(matches!(err, PolyError::Parse { position: 6, .. }), "{err:?}");
        assert!("".parse::<IntPolynomial>().is_err());
        assert!("1 2".parse::<IntPolynomial>().is_err());
        assert!("t^".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn gcd_and_exact_division() {
        // (1 + t)(1 - 2t - t^3) and (1 + t)(1 - t + t^2) share 1 + t.
        let common = p(&[1, 1]);
        let a = &common * &p(&[1, -2, 0, -1]);
        let b = &common * &p(&[1, -1, 1]);
        assert_eq!(a.gcd(&b), common);
        assert_eq!(a.exact_div(&common), Some(p(&[1, -2, 0, -1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])), None);
        // 1 + t does not divide 1 + 2t over the integers.
        assert_eq!(p(&[1, 2]).exact_div(&p(&[2])), None);
    }

    #[test]
    fn square_free_part_removes_repeated_roots() {
        let q = &p(&[1, -1]).pow(3) * &p(&[0, 1]);
        assert_eq!(q.square_free_part(), p(&[0, -1, 1]));
    }

    #[test]
    fn sign_at_matches_rational_evaluation() {
        let q = p(&[1, -2, 0, -1]);
        for (n, d) in [(0, 1), (1, 2), (9, 20), (1, 1), (-3, 7), (5, 11)] {
            let x = BigRational::new(BigInt::from(n), BigInt::from(d));
            let v = q.eval_rational(&x);
            assert_eq!(q.sign_at(&x), v.cmp(&BigRational::zero()), "x = {x}");
        }
    }

    proptest! {
        #[test]
        fn parse_display_roundtrip(c in prop::collection::vec(-20i64..20, 0..8)) {
            let q = p(&c);
            prop_assert_eq!(q.to_string().parse::<IntPolynomial>().unwrap(), q);
        }

        #[test]
        fn multiplication_matches_convolution(
            a in prop::collection::vec(-9i64..9, 1..7),
            b in prop::collection::vec(-9i64..9, 1..7),
        ) {
            prop_assert_eq!(&p(&a) * &p(&b), p(&convolve(&a, &b)));
        }

        #[test]
        fn product_divides_exactly(
            a in prop::collection::vec(-9i64..9, 1..6),
            b in prop::collection::vec(-9i64..9, 1..6),
        ) {
            let (pa, pb) = (p(&a), p(&b));
            prop_assume!(!pb.is_zero());
            prop_assert_eq!((&pa * &pb).exact_div(&pb), Some(pa));
        }
    }
}
