//! Chain-level matrices relating the orbit permutation, the transition
//! matrix and the kneading determinant, and the identities between them.
//!
//! Indices follow the orbit table: `v`-coordinates for orbit points,
//! interval coordinates `I_0 .. I_(2p-2)` for the partition.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kneading::{growth_number, kneading_determinant, KneadingError};
use crate::markov::{build_orbit_table, spectral_radius, transition_matrix, MarkovError, OrbitTable, TransitionMatrix};
use crate::poly::{IntMatrix, IntPolynomial, PolyError, DEFAULT_ROOT_TOL};
use crate::symbolic::{enumerate_admissible, PeriodicSequence, SymbolicError, WordForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Kneading(#[from] KneadingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

/// `mu_ij = d(i+1, j) - d(i, j) - d(2p+1-i, j) + d(2p-i, j)`, 1-based,
/// as a `(2p-1) x 2p` matrix.
pub fn build_mu(p: usize) -> IntMatrix {
    assert!(p >= 1, "period must be positive");
    let n = 2 * p;
    let mut mu = IntMatrix::zeros(n - 1, n);
    for i in 1..n {
        for j in 1..=n {
            let x = delta(i + 1, j) - delta(i, j) - delta(n + 1 - i, j) + delta(n - i, j);
            mu.set(i - 1, j - 1, BigInt::from(x));
        }
    }
    mu
}

/// `blockdiag(sigma, sigma)` with `sigma` the `p x p` cyclic shift.
pub fn build_omega(p: usize) -> IntMatrix {
    let mut omega = IntMatrix::zeros(2 * p, 2 * p);
    for block in [0, p] {
        for i in 0..p {
            omega.set(block + i, block + (i + 1) % p, BigInt::one());
        }
    }
    omega
}

pub fn build_eta(mu: &IntMatrix, pi: &IntMatrix) -> Result<IntMatrix, PolyError> {
    mu.mul(pi)
}

/// `Phi` of the first symbol of each `v_j`.
pub fn s_vector(tbl: &OrbitTable) -> Vec<i64> {
    tbl.v.iter().map(|v| i64::from(v.at(0).phi())).collect()
}

pub fn build_s_vector(s: &PeriodicSequence) -> Result<Vec<i64>, HomologyError> {
    Ok(s_vector(&build_orbit_table(s)?))
}

/// `(boundary, boundary_s)`: the incidence matrix of the partition in
/// point coordinates, and its symmetrization under `I_k -> I_(2p-2-k)`.
pub fn build_boundaries(tbl: &OrbitTable) -> (IntMatrix, IntMatrix) {
    let n = 2 * tbl.p;
    let mut boundary = IntMatrix::zeros(n, n - 1);
    for k in 0..n - 1 {
        boundary.set(k, k, BigInt::from(-1));
        boundary.set(k + 1, k, BigInt::one());
    }
    let mut boundary_s = IntMatrix::zeros(n, n - 1);
    for k in 0..n - 1 {
        let mirror = n - 2 - k;
        for i in 0..n {
            boundary_s.set(i, k, boundary.get(i, k) - boundary.get(i, mirror));
        }
    }
    (boundary, boundary_s)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyData {
    pub p: usize,
    pub mu: IntMatrix,
    pub omega: IntMatrix,
    pub pi: IntMatrix,
    pub eta: IntMatrix,
    pub s: Vec<i64>,
    #[serde(rename = "Gamma")]
    pub big_gamma: IntMatrix,
    pub gamma: IntMatrix,
    #[serde(rename = "Theta")]
    pub theta: IntMatrix,
    pub boundary: IntMatrix,
    pub boundary_s: IntMatrix,
}

pub fn homology_data(tbl: &OrbitTable) -> Result<HomologyData, PolyError> {
    let p = tbl.p;
    let n = 2 * p;
    let mu = build_mu(p);
    let omega = build_omega(p);
    let eta = build_eta(&mu, &tbl.pi)?;
    let s = s_vector(tbl);
    let mut big_gamma = IntMatrix::zeros(n, n);
    for i in 0..n {
        big_gamma.set(i, 0, BigInt::from(s[i]));
        big_gamma.set(i, p, BigInt::from(s[(i + p) % n]));
    }
    let gamma = big_gamma.sub(&IntMatrix::identity(n))?;
    let theta = gamma.mul(&omega)?;
    let (boundary, boundary_s) = build_boundaries(tbl);
    Ok(HomologyData {
        p,
        mu,
        omega,
        pi: tbl.pi.clone(),
        eta,
        s,
        big_gamma,
        gamma,
        theta,
        boundary,
        boundary_s,
    })
}

pub fn build_theta(s: &PeriodicSequence) -> Result<HomologyData, HomologyError> {
    Ok(homology_data(&build_orbit_table(s)?)?)
}

/// `Theta` written out entry by entry from the symbols of `S`, without
/// going through `gamma * omega`.
pub fn theta_template(s: &PeriodicSequence) -> IntMatrix {
    let p = s.period();
    let n = 2 * p;
    // phi(k) = Phi(S_k) with S_0 = S_p the closing symbol, S_1 the first.
    let phi = |k: usize| i64::from(s.at((k + p - 1) % p).phi());
    let mut m = IntMatrix::zeros(n, n);
    let mut put = |i: usize, j: usize, x: i64| {
        let cur = m.get(i - 1, j - 1).clone();
        m.set(i - 1, j - 1, cur + x);
    };
    put(1, p + 2, -phi(0));
    put(p + 1, 2, -phi(0));
    for i in 2..=p {
        put(i, 2, phi(i - 1));
        put(i, p + 2, -phi(i - 1));
        put(p + i, 2, -phi(i - 1));
        put(p + i, p + 2, phi(i - 1));
        if i < p {
            put(i, i + 1, -1);
            put(p + i, p + i + 1, -1);
        }
    }
    put(p, 1, -1);
    put(n, p + 1, -1);
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub sequence: String,
    pub pi: IntMatrix,
    pub psi: IntMatrix,
    pub eta: IntMatrix,
    #[serde(rename = "Theta")]
    pub theta: IntMatrix,
}

/// Outcome of every identity check for one kneading sequence.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub sequence: String,
    pub period: usize,
    /// `eta Gamma = 0`
    pub eta_gamma_zero: bool,
    /// `eta omega = -psi eta`
    pub eta_omega_conjugacy: bool,
    /// `eta gamma = -eta`
    pub eta_gamma_minus_eta: bool,
    /// `det(I - t Theta) = (1 - (-1)^p t^p)^2 (1 + t) D(t)`
    pub theta_kneading: bool,
    /// `det(I - t Theta) = (1 + t) det(I - t psi)`
    pub theta_markov: bool,
    /// `rho(psi) t0 = 1`, with `t0 = 1` when `D` has no root in `(0, 1)`.
    pub spectral_match: bool,
    /// every entry of `psi` is 0 or 1
    pub psi_zero_one: bool,
    pub theta_template: bool,
    pub boundary_s_is_mu_transpose: bool,
    pub rank_eta_eq_rank_boundary_s: bool,
    pub boundary_s_column_space: bool,
    /// `rank(boundary) - rank(boundary_s)`, expected to be `p`
    pub boundary_rank_gap: usize,
    pub p_theta: String,
    pub det_psi: String,
    pub kneading_determinant: String,
    pub t0: Option<f64>,
    pub rho_psi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    /// Named results of the boolean checks.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("eta_gamma_zero", self.eta_gamma_zero),
            ("eta_omega_conjugacy", self.eta_omega_conjugacy),
            ("eta_gamma_minus_eta", self.eta_gamma_minus_eta),
            ("theta_kneading", self.theta_kneading),
            ("theta_markov", self.theta_markov),
            ("spectral_match", self.spectral_match),
            ("psi_zero_one", self.psi_zero_one),
            ("theta_template", self.theta_template),
            ("boundary_s_is_mu_transpose", self.boundary_s_is_mu_transpose),
            ("rank_eta_eq_rank_boundary_s", self.rank_eta_eq_rank_boundary_s),
            ("boundary_s_column_space", self.boundary_s_column_space),
            ("boundary_rank_gap", self.boundary_rank_gap == self.period),
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks()
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name)
            .collect()
    }
}

fn closing_factor(p: usize) -> IntPolynomial {
    let c = if p.is_multiple_of(2) { -1 } else { 1 };
    &IntPolynomial::one() + &IntPolynomial::monomial(BigInt::from(c), p)
}

/// Builds every matrix for `s` and checks all identities exactly;
/// `tol` bounds `|rho(psi) t0 - 1|`.
pub fn verify_identities(s: &PeriodicSequence, tol: f64) -> Result<VerificationReport, HomologyError> {
    let tbl = build_orbit_table(s)?;
    let psi = transition_matrix(&tbl)?;
    let d = kneading_determinant(s)?;
    Ok(verify_with(s, &tbl, &psi, &d, tol)?)
}

fn verify_with(
    s: &PeriodicSequence,
    tbl: &OrbitTable,
    psi: &TransitionMatrix,
    d: &crate::poly::RationalFunction,
    tol: f64,
) -> Result<VerificationReport, PolyError> {
    let h = homology_data(tbl)?;
    let p = h.p;
    let psi_m = &psi.psi;

    let eta_gamma_zero = h.eta.mul(&h.big_gamma)?.is_zero();
    let eta_omega = h.eta.mul(&h.omega)?;
    let eta_omega_conjugacy = eta_omega == psi_m.mul(&h.eta)?.neg();
    let eta_gamma_minus_eta = h.eta.mul(&h.gamma)? == h.eta.neg();

    let p_theta = h.theta.det_i_minus_t()?;
    let det_psi = psi.char_poly();
    let one_plus_t = IntPolynomial::from_i64s(&[1, 1]);
    let e2 = closing_factor(p).pow(2);
    // cross-multiplied: P_Theta den(D) = e^2 (1 + t) num(D)
    let theta_kneading = &p_theta * d.den() == &(&e2 * &one_plus_t) * d.num();
    let theta_markov = p_theta == &one_plus_t * &det_psi;

    let growth = growth_number(d, DEFAULT_ROOT_TOL);
    let rho_psi = spectral_radius(psi, DEFAULT_ROOT_TOL);
    // Zero-entropy words have their least root at t = 1 itself.
    let spectral_match = (rho_psi * growth.t0.unwrap_or(1.0) - 1.0).abs() <= tol;

    let psi_zero_one = psi_m.entries().iter().all(|x| x.is_zero() || x.is_one());
    let theta_template = h.theta == theta_template(s);

    let boundary_s_is_mu_transpose = h.boundary_s == h.mu.transpose();
    let rank_bs = h.boundary_s.rank();
    let rank_eta_eq_rank_boundary_s = h.eta.rank() == rank_bs;
    let boundary_s_column_space = h.boundary_s.column_space_equal(&h.boundary_s.mul(&h.eta)?)?;
    let boundary_rank_gap = h.boundary.rank() - rank_bs;

    let mut report = VerificationReport {
        sequence: s.to_string(),
        period: p,
        eta_gamma_zero,
        eta_omega_conjugacy,
        eta_gamma_minus_eta,
        theta_kneading,
        theta_markov,
        spectral_match,
        psi_zero_one,
        theta_template,
        boundary_s_is_mu_transpose,
        rank_eta_eq_rank_boundary_s,
        boundary_s_column_space,
        boundary_rank_gap,
        p_theta: p_theta.to_string(),
        det_psi: det_psi.to_string(),
        kneading_determinant: d.to_string(),
        t0: growth.t0,
        rho_psi,
        counterexample: None,
    };
    if !report.all_passed() {
        report.counterexample = Some(Counterexample {
            sequence: s.to_string(),
            pi: h.pi,
            psi: psi_m.clone(),
            eta: h.eta,
            theta: h.theta,
        });
    }
    Ok(report)
}

/// Result of running every identity over all Markov-form sequences up to a
/// period bound.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub max_period: usize,
    /// Number of sequences checked for each period `1..=max_period`.
    pub per_period: Vec<usize>,
    pub checked: usize,
    pub failures: Vec<VerificationReport>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies every Markov-form sequence of period at most `max_period`.
/// Work is spread over the current rayon pool; the result does not depend
/// on the number of threads.
pub fn verify_all_upto(max_period: usize, tol: f64) -> Result<SweepReport, SweepError> {
    let mut per_period = Vec::with_capacity(max_period);
    let mut failures = Vec::new();
    for p in 1..=max_period {
        let words = enumerate_admissible(p, WordForm::MARKOV)?;
        per_period.push(words.len());
        let reports: Vec<VerificationReport> = words
            .par_iter()
            .map(|s| verify_identities(s, tol))
            .collect::<Result<_, _>>()?;
        failures.extend(reports.into_iter().filter(|r| !r.all_passed()));
    }
    Ok(SweepReport {
        max_period,
        checked: per_period.iter().sum(),
        per_period,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}
