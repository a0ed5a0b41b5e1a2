//! Real root isolation by Sturm sequences over exact rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPolynomial;

/// Default bisection width for root refinement.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Sturm chain of a square-free polynomial, kept in integer form.
///
/// Successive terms are `-prem(a, b)` scaled by positive factors only, so
/// sign variations are those of the classical rational chain.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let p0 = p.square_free_part();
        let mut chain = vec![p0.clone()];
        if p0.degree().unwrap_or(0) == 0 {
            return Self { chain };
        }
        let mut a = p0;
        let mut b = a.derivative();
        while !b.is_zero() {
            chain.push(b.clone());
            let db = b.degree().expect("nonzero");
            let da = a.degree().expect("nonzero");
            let lc = b.leading_coefficient().expect("nonzero").clone();
            // prem multiplies by lc^(da - db + 1); undo a negative factor's sign.
            let mut r = a.pseudo_rem(&b);
            if lc.is_negative() && (da - db + 1) % 2 == 1 {
                r = -r;
            }
            let r = -r;
            let content = r.content();
            let r = if content.is_zero() {
                r
            } else {
                IntPolynomial::new(r.coeffs().iter().map(|c| c / &content).collect())
            };
            a = b;
            b = r;
        }
        Self { chain }
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.chain[0]
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for q in &self.chain {
            let s = q.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Bracket `(lo, hi]` of width at most `tol` around the least root in the
    /// open interval `(lo, hi)`, or `None` if that interval holds no root.
    pub fn least_root_bracket(
        &self,
        lo: &BigRational,
        hi: &BigRational,
        tol: &BigRational,
    ) -> Option<(BigRational, BigRational)> {
        let p = self.polynomial();
        let mut lo = lo.clone();
        let mut hi = hi.clone();
        let mut roots = self.count_roots(&lo, &hi);
        if p.sign_at(&hi) == Ordering::Equal {
            roots = roots.saturating_sub(1);
        }
        if roots == 0 {
            return None;
        }
        // A root of p at lo itself would spoil the variation count.
        if p.sign_at(&lo) == Ordering::Equal {
            let mut step = (&hi - &lo) / BigInt::from(2);
            while self.count_roots(&lo, &(&lo + &step)) > 0 {
                step /= BigInt::from(2);
            }
            lo += step;
        }
        let two = BigInt::from(2);
        while &hi - &lo > *tol {
            let mid = (&lo + &hi) / &two;
            if self.count_roots(&lo, &mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((lo, hi))
    }
}

fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite tolerance")
}

fn midpoint_f64(lo: &BigRational, hi: &BigRational) -> f64 {
    ((lo + hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
}

/// Least real root of `p` in the open interval `(0, 1)`, to absolute
/// precision `tol`; `None` if there is none.
pub fn least_root_in_unit_interval(p: &IntPolynomial, tol: f64) -> Option<f64> {
    least_root_in_interval(p, &BigRational::zero(), &BigRational::one(), tol)
}

/// Least real root of `p` in the open interval `(lo, hi)`.
pub fn least_root_in_interval(p: &IntPolynomial, lo: &BigRational, hi: &BigRational, tol: f64) -> Option<f64> {
    assert!(tol > 0.0, "tolerance must be positive");
    if p.is_zero() {
        return None;
    }
    let chain = SturmChain::new(p);
    chain
        .least_root_bracket(lo, hi, &rational_from_f64(tol))
        .map(|(a, b)| midpoint_f64(&a, &b))
}

/// Cauchy bound: every root has modulus below the returned integer.
pub fn cauchy_root_bound(p: &IntPolynomial) -> BigInt {
    let Some(lc) = p.leading_coefficient() else {
        return BigInt::zero();
    };
    let lc = lc.abs();
    let max_ratio = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    BigInt::one() + (max_ratio + &lc - BigInt::one()) / lc
}

/// Least strictly positive real root of `p`.
pub fn least_positive_root(p: &IntPolynomial, tol: f64) -> Option<f64> {
    let bound = BigRational::from_integer(cauchy_root_bound(p) + BigInt::one());
    least_root_in_interval(p, &BigRational::zero(), &bound, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    // Plain f64 bisection on a bracket known to contain exactly one sign change.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn least_root_of_cubic() {
        let q = p(&[1, -2, 0, -1]);
        let root = least_root_in_unit_interval(&q, 1e-9).unwrap();
        let oracle = bisect(|t| 1.0 - 2.0 * t - t * t * t, 0.0, 1.0);
        assert!((root - oracle).abs() < 1e-9, "{root} vs {oracle}");
        assert!((root - 0.4534).abs() < 5e-5);
    }

    #[test]
    fn no_real_roots() {
        assert_eq!(least_root_in_unit_interval(&p(&[1, 0, 1]), 1e-9), None);
        assert_eq!(least_root_in_unit_interval(&p(&[1]), 1e-9), None);
        // root exactly at t = 1 is outside the open interval
        assert_eq!(least_root_in_unit_interval(&p(&[1, -1]), 1e-9), None);
    }

    #[test]
    fn quartic_growth_polynomial() {
        let q = p(&[1, -2, -2, 0, 1]);
        let root = least_root_in_unit_interval(&q, 1e-9).unwrap();
        let f = |t: f64| 1.0 - 2.0 * t - 2.0 * t * t + t.powi(4);
        assert!(f(root - 1e-9) * f(root + 1e-9) < 0.0);
        let oracle = bisect(f, 0.0, 0.5);
        assert!((root - oracle).abs() < 1e-9);
    }

    #[test]
    fn least_root_is_chosen_among_several() {
        // roots 1/5, 1/3, 1/2 and a double root at 1/4
        let q = &(&(&p(&[-1, 5]) * &p(&[-1, 3])) * &p(&[-1, 2])) * &p(&[-1, 4]).pow(2);
        let root = least_root_in_unit_interval(&q, 1e-12).unwrap();
        assert!((root - 0.2).abs() < 1e-12);
        let chain = SturmChain::new(&q);
        assert_eq!(chain.count_roots(&BigRational::zero(), &BigRational::one()), 4);
    }

    #[test]
    fn root_at_lower_endpoint_is_skipped() {
        // t(1 - 3t): root 0 excluded, root 1/3 found
        let root = least_root_in_unit_interval(&p(&[0, 1, -3]), 1e-12).unwrap();
        assert!((root - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn positive_root_beyond_one() {
        let root = least_positive_root(&p(&[-6, 1]), 1e-12).unwrap();
        assert!((root - 6.0).abs() < 1e-12);
        assert_eq!(least_positive_root(&p(&[1, 1]), 1e-12), None);
    }

    proptest! {
        #[test]
        fn returned_root_brackets_a_sign_change(roots in prop::collection::btree_set(1i64..99, 1..5)) {
            // Square-free product of (100 t - r) factors.
            let q = roots.iter().fold(p(&[1]), |acc, &r| &acc * &p(&[-r, 100]));
            let tol = 1e-10;
            let x = least_root_in_unit_interval(&q, tol).unwrap();
            let least = *roots.iter().next().unwrap() as f64 / 100.0;
            prop_assert!((x - least).abs() <= tol);
            let (a, b) = (q.eval_f64(x - tol), q.eval_f64(x + tol));
            prop_assert!(a * b <= 0.0);
        }
    }
}
