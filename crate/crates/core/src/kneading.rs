//! Kneading determinant, its increment-matrix oracle, the lap-number series
//! and the growth number.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::{least_root_in_unit_interval, IntPolynomial, PolyError, RationalFunction, TruncatedSeries};
use crate::symbolic::{KneadingPair, PeriodicSequence, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KneadingError {
    #[error("sequence {0} is not admissible")]
    NotAdmissible(String),
    #[error("sequence {0} is bistable; use the bistable determinant")]
    BistableInput(String),
    #[error("sequence {0} is not bistable")]
    NotBistable(String),
    #[error("need {needed} symbols, got {got}")]
    InsufficientSymbols { needed: usize, got: usize },
    #[error("lap coefficient {index} is not an integer ({value})")]
    NonIntegerLapCoefficient { index: usize, value: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn u_of_symbols(symbols: &[Symbol]) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); symbols.len() + 1];
    for (i, s) in symbols.iter().enumerate() {
        let k = i + 1;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        coeffs[k] = BigInt::from(sign * i64::from(s.phi()));
    }
    IntPolynomial::new(coeffs)
}

/// `u_p(t) = sum_{k=1..p} (-1)^k Phi(S_k) t^k`, with `S_1` the first symbol.
pub fn u_poly(s: &PeriodicSequence) -> IntPolynomial {
    u_of_symbols(s.symbols())
}

/// `1 - (-1)^n t^n`, or `1 + (-1)^n t^n` when `plus`.
fn closing_factor(n: usize, plus: bool) -> IntPolynomial {
    let odd = n % 2 == 1;
    // coefficient of t^n in 1 - (-1)^n t^n is +1 for odd n, -1 for even n
    let c = if odd != plus { 1 } else { -1 };
    &IntPolynomial::one() + &IntPolynomial::monomial(BigInt::from(c), n)
}

fn one_plus_t() -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, 1])
}

/// Periodic closed form applied to any period word, with no admissibility
/// or bistability checks.
pub fn determinant_formula(word: &Word) -> RationalFunction {
    let p = word.len();
    let e = closing_factor(p, false);
    let u = u_of_symbols(word.symbols());
    let num = &e + &u.scale(&BigInt::from(2));
    let den = &one_plus_t() * &e;
    RationalFunction::new(num, den).expect("nonzero denominator")
}

/// `(1 + 2 u_N(t)) / (1 + t)` from a finite itinerary prefix; the natural
/// truncation when no period has been detected.
pub fn prefix_determinant(word: &Word) -> RationalFunction {
    let u = u_of_symbols(word.symbols());
    let num = &IntPolynomial::one() + &u.scale(&BigInt::from(2));
    RationalFunction::new(num, one_plus_t()).expect("nonzero denominator")
}

/// Closed-form kneading determinant of an admissible, non-bistable periodic
/// kneading sequence.
pub fn kneading_determinant(s: &PeriodicSequence) -> Result<RationalFunction, KneadingError> {
    if !s.is_admissible() {
        return Err(KneadingError::NotAdmissible(s.to_string()));
    }
    if s.is_bistable() {
        return Err(KneadingError::BistableInput(s.to_string()));
    }
    Ok(determinant_formula(s.word()))
}

/// Kneading determinant of a bistable sequence `(Q tau(Q))^inf`, computed on
/// the half word `Q`.
pub fn kneading_determinant_bistable(s: &PeriodicSequence) -> Result<RationalFunction, KneadingError> {
    let half = s
        .bistable_half()
        .ok_or_else(|| KneadingError::NotBistable(s.to_string()))?;
    let q = half.len();
    let e = closing_factor(q, true);
    let u = u_of_symbols(half.symbols());
    let num = &e + &u.scale(&BigInt::from(2));
    let den = &one_plus_t() * &e;
    Ok(RationalFunction::new(num, den)?)
}

/// Dispatches to the plain or bistable closed form.
pub fn kneading_determinant_any(s: &PeriodicSequence) -> Result<RationalFunction, KneadingError> {
    if s.is_bistable() {
        if !s.is_admissible() {
            return Err(KneadingError::NotAdmissible(s.to_string()));
        }
        kneading_determinant_bistable(s)
    } else {
        kneading_determinant(s)
    }
}

/// Truncated invariant coordinate split on the collapsed symbols `L, M, R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSeries {
    pub l: TruncatedSeries,
    pub m: TruncatedSeries,
    pub r: TruncatedSeries,
}

impl SymbolSeries {
    fn zero(order: usize) -> Self {
        Self {
            l: TruncatedSeries::zero(order),
            m: TruncatedSeries::zero(order),
            r: TruncatedSeries::zero(order),
        }
    }

    pub fn order(&self) -> usize {
        self.l.order()
    }

    pub fn components(&self) -> [&TruncatedSeries; 3] {
        [&self.l, &self.m, &self.r]
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            l: &self.l - &rhs.l,
            m: &self.m - &rhs.m,
            r: &self.r - &rhs.r,
        }
    }
}

/// `theta(t) = sum_k (-1)^k X_k t^k` through `t^order`, with `A` counted
/// on the `L` component and `B` on the `R` component.
pub fn invariant_coordinate(it: &[Symbol], order: usize) -> Result<SymbolSeries, KneadingError> {
    if it.len() <= order {
        return Err(KneadingError::InsufficientSymbols {
            needed: order + 1,
            got: it.len(),
        });
    }
    let mut out = SymbolSeries::zero(order);
    for (k, s) in it.iter().take(order + 1).enumerate() {
        let c = BigRational::from_integer(BigInt::from(if k % 2 == 0 { 1 } else { -1 }));
        let slot = match s.phi() {
            -1 => &mut out.l,
            0 => &mut out.m,
            _ => &mut out.r,
        };
        slot.add_term(k, &c);
    }
    Ok(out)
}

/// The 2x3 kneading matrix truncated at a common order. Row `i` is the
/// increment at `c_i`, columns are `L, M, R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneadingMatrixTrunc {
    pub entries: [[TruncatedSeries; 3]; 2],
}

impl KneadingMatrixTrunc {
    pub fn zero(order: usize) -> Self {
        let z = || TruncatedSeries::zero(order);
        Self {
            entries: [[z(), z(), z()], [z(), z(), z()]],
        }
    }

    pub fn order(&self) -> usize {
        self.entries[0][0].order()
    }

    pub fn get(&self, row: usize, col: usize) -> &TruncatedSeries {
        &self.entries[row][col]
    }
}

fn limit_itinerary(first: Symbol, then: &PeriodicSequence, order: usize) -> Vec<Symbol> {
    std::iter::once(first).chain(then.prefix(order)).collect()
}

/// Increments `nu_i = theta(c_i^+) - theta(c_i^-)` through `t^order`.
///
/// The one-sided limits at the discontinuities have addresses `L | M` at
/// `c1` and `M | R` at `c2`; after one step they follow the orbits of `-a`
/// (from `c1^-` and `c2^-`) and `+a` (from `c1^+` and `c2^+`).
pub fn kneading_increments(pair: &KneadingPair, order: usize) -> KneadingMatrixTrunc {
    let plus = pair.upper();
    let minus = pair.lower();
    let theta = |first: Symbol, then: &PeriodicSequence| {
        invariant_coordinate(&limit_itinerary(first, then, order), order).expect("order + 1 symbols")
    };
    let nu1 = theta(Symbol::M, plus).sub(&theta(Symbol::L, minus));
    let nu2 = theta(Symbol::R, plus).sub(&theta(Symbol::M, minus));
    KneadingMatrixTrunc {
        entries: [[nu1.l, nu1.m, nu1.r], [nu2.l, nu2.m, nu2.r]],
    }
}

/// `(-1)^(j+1) D_j / (1 + t)`, where `D_j` is the 2x2 minor omitting
/// column `j` (1-based).
pub fn kneading_det_from_matrix(n: &KneadingMatrixTrunc, j: usize) -> TruncatedSeries {
    assert!((1..=3).contains(&j), "column index must be 1, 2 or 3");
    let cols: Vec<usize> = (0..3).filter(|&c| c != j - 1).collect();
    let (a, b) = (cols[0], cols[1]);
    let minor = &n.entries[0][a].mul(&n.entries[1][b]) - &n.entries[0][b].mul(&n.entries[1][a]);
    let signed = if j % 2 == 1 { minor } else { -&minor };
    signed.div_poly(&one_plus_t()).expect("1 + t is a unit")
}

/// Coefficients of `Lambda(t) = 1/(t (1 - t^2) D(t)) - 1/t`; entry `k - 1` is
/// the lap number of the `k`-th iterate.
pub fn lap_series(d: &RationalFunction, n_terms: usize) -> Result<Vec<BigInt>, KneadingError> {
    // 1/((1 - t^2) D) = den / ((1 - t^2) num); its constant term must be 1
    // for the 1/t poles to cancel.
    let inner = RationalFunction::new(d.den().clone(), &IntPolynomial::from_i64s(&[1, 0, -1]) * d.num())?;
    let series = inner.series(n_terms)?;
    let c0 = series.coeff(0);
    if !c0.is_one() {
        return Err(KneadingError::NonIntegerLapCoefficient {
            index: 0,
            value: format!("pole with residue {}", c0 - BigRational::one()),
        });
    }
    series.coeffs()[1..]
        .iter()
        .enumerate()
        .map(|(index, c)| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(KneadingError::NonIntegerLapCoefficient {
                    index,
                    value: c.to_string(),
                })
            }
        })
        .collect()
}

/// Least root `t0` of the kneading determinant in `(0, 1)` and `rho = 1/t0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthNumber {
    pub t0: Option<f64>,
    pub rho: f64,
}

/// Roots cancelled between numerator and denominator are not zeros of `D`,
/// so the fraction is reduced before root isolation.
pub fn growth_number(d: &RationalFunction, tol: f64) -> GrowthNumber {
    let reduced = d.reduced();
    match least_root_in_unit_interval(reduced.num(), tol) {
        Some(t0) => GrowthNumber {
            t0: Some(t0),
            rho: 1.0 / t0,
        },
        None => GrowthNumber { t0: None, rho: 1.0 },
    }
}
