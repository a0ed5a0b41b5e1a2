//! Markov partition of the interval by the orbits of the discontinuities,
//! built from the kneading sequence alone.
//!
//! Orbit points are ordered by comparing their itineraries, so the
//! permutation and the transition matrix are exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{least_positive_root, IntMatrix, IntPolynomial, PolyError};
use crate::symbolic::{PeriodicSequence, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("sequence {0} is not of the form R...B")]
    NotMarkovForm(String),
    #[error("sequence {0} is not admissible")]
    NotAdmissible(String),
    #[error("sequence {0} has coinciding orbit points")]
    DuplicateItineraries(String),
    #[error("sequence {0}: an A or B is not followed by the orbit of -a or +a")]
    InconsistentOrbit(String),
    #[error("sequence {sequence}: interval {interval} has an empty image")]
    DegenerateInterval { sequence: String, interval: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The `2p` orbit points, their itineraries `v` and their order on the line.
///
/// `v[j]` is `sigma^((j - 1) mod p) S` for `j < p` and the same shift of
/// `tau S` for `j >= p` (zero-based), so `v[0]` is the point `c2` with
/// itinerary `B...` and `v[1] = S` is `+a`.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub p: usize,
    pub v: Vec<PeriodicSequence>,
    /// `order[i] = j` when the `i`-th point from the left is `v[j]`.
    pub order: Vec<usize>,
    /// Inverse of `order`.
    pub rank: Vec<usize>,
    pub pi: IntMatrix,
}

impl OrbitTable {
    pub fn sequence(&self) -> &PeriodicSequence {
        &self.v[1]
    }

    /// Itinerary of the `i`-th point from the left.
    pub fn w(&self, i: usize) -> &PeriodicSequence {
        &self.v[self.order[i]]
    }

    /// Index in `v` of the image of `v[j]` under the map.
    fn successor(&self, j: usize) -> usize {
        let p = self.p;
        let block = j / p * p;
        block + (j - block + 1) % p
    }
}

/// Sorts the orbit points of an admissible `R...B` kneading sequence.
///
/// Interior `A`/`B` symbols are accepted when the orbit they describe is
/// consistent.
pub fn build_orbit_table(s: &PeriodicSequence) -> Result<OrbitTable, MarkovError> {
    if !s.has_markov_shape(true) {
        return Err(MarkovError::NotMarkovForm(s.to_string()));
    }
    if !s.is_admissible() {
        return Err(MarkovError::NotAdmissible(s.to_string()));
    }
    if !s.is_orbit_consistent() {
        return Err(MarkovError::InconsistentOrbit(s.to_string()));
    }
    let p = s.period();
    let tau = s.tau();
    let v: Vec<PeriodicSequence> = (0..p)
        .map(|j| s.shift((j + p - 1) % p))
        .chain((0..p).map(|j| tau.shift((j + p - 1) % p)))
        .collect();
    let mut order: Vec<usize> = (0..2 * p).collect();
    order.sort_by(|&a, &b| v[a].compare(&v[b]));
    if order.windows(2).any(|w| v[w[0]].compare(&v[w[1]]) == Ordering::Equal) {
        return Err(MarkovError::DuplicateItineraries(s.to_string()));
    }
    let mut rank = vec![0; 2 * p];
    let mut pi = IntMatrix::zeros(2 * p, 2 * p);
    for (i, &j) in order.iter().enumerate() {
        rank[j] = i;
        pi.set(i, j, BigInt::one());
    }
    Ok(OrbitTable { p, v, order, rank, pi })
}

/// Transition matrix of the partition into the `2p - 1` intervals between
/// consecutive orbit points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionMatrix {
    pub psi: IntMatrix,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.psi.rows()
    }

    pub fn char_poly(&self) -> IntPolynomial {
        self.psi.det_i_minus_t().expect("square")
    }
}

/// `psi[i][j] = 1` when interval `j` lies in the image of interval `i`.
///
/// Every branch is decreasing, so the image of `(w_k, w_k+1)` runs from the
/// image of `w_k+1` to the image of `w_k`. At `c1` and `c2` the one-sided
/// images are `-a` from the left and `+a` from the right.
pub fn transition_matrix(tbl: &OrbitTable) -> Result<TransitionMatrix, MarkovError> {
    let p = tbl.p;
    let n = 2 * p - 1;
    let image_rank = |i: usize, approached_from_right: bool| -> usize {
        let j = tbl.order[i];
        match tbl.v[j].at(0) {
            Symbol::A | Symbol::B => {
                if approached_from_right {
                    tbl.rank[1]
                } else {
                    tbl.rank[p + 1]
                }
            }
            _ => tbl.rank[tbl.successor(j)],
        }
    };
    let mut psi = IntMatrix::zeros(n, n);
    for k in 0..n {
        let lo = image_rank(k + 1, false);
        let hi = image_rank(k, true);
        if lo >= hi {
            return Err(MarkovError::DegenerateInterval {
                sequence: tbl.sequence().to_string(),
                interval: k,
            });
        }
        for j in lo..hi {
            psi.set(k, j, BigInt::one());
        }
    }
    Ok(TransitionMatrix { psi })
}

/// `1 / t` for the least positive root `t` of `det(I - t psi)`; `0` when
/// there is none (nilpotent `psi`).
pub fn spectral_radius(psi: &TransitionMatrix, tol: f64) -> f64 {
    // rho = 1/t, so an error d in t becomes about d/t^2 in rho
    let tol_t = tol * 1e-2;
    match least_positive_root(&psi.char_poly(), tol_t) {
        Some(t) => 1.0 / t,
        None => 0.0,
    }
}
