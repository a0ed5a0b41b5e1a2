//! Symbols, words and periodic itineraries over the alphabet
//! `L < A < M < B < R`, with the signed-lexicographic itinerary order,
//! the symmetry `tau`, the shift and the admissibility rule.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest period accepted by [`enumerate_admissible`].
pub const DEFAULT_MAX_PERIOD: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("invalid symbol {ch:?} at position {position}")]
    InvalidSymbol { ch: char, position: usize },
    #[error("periodic sequence needs a nonempty period word")]
    EmptyPeriod,
    #[error("period {period} exceeds the enumeration limit {max}")]
    PeriodTooLarge { period: usize, max: usize },
    #[error("period must be at least 1")]
    PeriodZero,
    #[error("sequence {0} is not admissible")]
    NotAdmissible(String),
}

/// Address of a point relative to the discontinuities `c1 < c2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    /// left of `c1`
    L,
    /// at `c1`
    A,
    /// between the discontinuities
    M,
    /// at `c2`
    B,
    /// right of `c2`
    R,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [Symbol::L, Symbol::A, Symbol::M, Symbol::B, Symbol::R];

    pub fn order_index(self) -> usize {
        self as usize
    }

    /// Image under the odd symmetry: `L <-> R`, `A <-> B`, `M` fixed.
    pub fn tau(self) -> Symbol {
        match self {
            Symbol::L => Symbol::R,
            Symbol::A => Symbol::B,
            Symbol::M => Symbol::M,
            Symbol::B => Symbol::A,
            Symbol::R => Symbol::L,
        }
    }

    /// `-1` on `L, A`; `0` on `M`; `+1` on `B, R`.
    pub fn phi(self) -> i8 {
        match self {
            Symbol::L | Symbol::A => -1,
            Symbol::M => 0,
            Symbol::B | Symbol::R => 1,
        }
    }

    pub fn is_discontinuity(self) -> bool {
        matches!(self, Symbol::A | Symbol::B)
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::A => 'A',
            Symbol::M => 'M',
            Symbol::B => 'B',
            Symbol::R => 'R',
        }
    }

    pub fn from_char(ch: char) -> Option<Symbol> {
        match ch {
            'L' => Some(Symbol::L),
            'A' => Some(Symbol::A),
            'M' => Some(Symbol::M),
            'B' => Some(Symbol::B),
            'R' => Some(Symbol::R),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Finite string of symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tau(&self) -> Word {
        Word(self.0.iter().map(|s| s.tau()).collect())
    }

    /// Cyclic rotation by one: `S0 S1 .. S(n-1) -> S1 .. S(n-1) S0`.
    pub fn shift(&self) -> Word {
        self.rotate(1)
    }

    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Word(v)
    }

    /// `(-1)^len`.
    pub fn parity(&self) -> i8 {
        if self.0.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = SymbolicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .filter(|(_, ch)| !ch.is_whitespace())
            .map(|(position, ch)| Symbol::from_char(ch).ok_or(SymbolicError::InvalidSymbol { ch, position }))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// Compares two symbol streams position by position with the parity rule:
/// after a common prefix of odd length the symbol comparison is reversed.
fn signed_compare(len: usize, p: impl Fn(usize) -> Symbol, q: impl Fn(usize) -> Symbol) -> Ordering {
    for i in 0..len {
        let (a, b) = (p(i), q(i));
        if a != b {
            let ord = a.cmp(&b);
            return if i % 2 == 0 { ord } else { ord.reverse() };
        }
    }
    Ordering::Equal
}

/// Order of finite itinerary prefixes over their common length.
pub fn compare_words(p: &Word, q: &Word) -> Ordering {
    let n = p.len().min(q.len());
    signed_compare(n, |i| p.0[i], |i| q.0[i])
}

/// The infinite sequence `P P P ...` generated by a period word.
///
/// The period is the word length as given; `RMBRMB` has period 6 even though
/// it generates the same sequence as `RMB`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicSequence {
    word: Word,
}

impl PeriodicSequence {
    pub fn new(word: Word) -> Result<Self, SymbolicError> {
        if word.is_empty() {
            return Err(SymbolicError::EmptyPeriod);
        }
        Ok(Self { word })
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Self, SymbolicError> {
        Self::new(Word::new(symbols))
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn symbols(&self) -> &[Symbol] {
        self.word.symbols()
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// Symbol at position `i` (zero-based) of the infinite sequence.
    pub fn at(&self, i: usize) -> Symbol {
        self.word.0[i % self.word.len()]
    }

    /// First `n` symbols of the infinite sequence.
    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        (0..n).map(|i| self.at(i)).collect()
    }

    pub fn tau(&self) -> Self {
        Self { word: self.word.tau() }
    }

    /// `sigma^k`, a left rotation by `k mod p`.
    pub fn shift(&self, k: usize) -> Self {
        Self {
            word: self.word.rotate(k),
        }
    }

    /// Signed-lexicographic order of the infinite sequences.
    ///
    /// Two periodic sequences agreeing on `2 lcm(p, q)` symbols are equal.
    pub fn compare(&self, other: &Self) -> Ordering {
        let horizon = 2 * self.period().lcm(&other.period());
        signed_compare(horizon, |i| self.at(i), |i| other.at(i))
    }

    /// `tau S <= sigma^k S <= S` for every `k`.
    pub fn is_admissible(&self) -> bool {
        let lower = self.tau();
        (0..self.period()).all(|k| {
            let shifted = self.shift(k);
            lower.compare(&shifted) != Ordering::Greater && shifted.compare(self) != Ordering::Greater
        })
    }

    /// Period word of the form `Q tau(Q)`.
    pub fn is_bistable(&self) -> bool {
        let p = self.period();
        if !p.is_multiple_of(2) {
            return false;
        }
        let (first, second) = self.symbols().split_at(p / 2);
        first.iter().zip(second).all(|(a, b)| a.tau() == *b)
    }

    /// First half `Q` of a bistable period word `Q tau(Q)`.
    pub fn bistable_half(&self) -> Option<Word> {
        self.is_bistable()
            .then(|| Word::new(self.symbols()[..self.period() / 2].to_vec()))
    }

    /// Starts with `R`, ends with `B`, with interior symbols in `{L, M, R}`
    /// (or anything, when `allow_interior_discontinuities`), i.e. the shape
    /// of a periodic orbit of `c2+` that closes at the discontinuity.
    pub fn has_markov_shape(&self, allow_interior_discontinuities: bool) -> bool {
        let s = self.symbols();
        let p = s.len();
        p >= 2
            && s[0] == Symbol::R
            && s[p - 1] == Symbol::B
            && (allow_interior_discontinuities || s[1..p - 1].iter().all(|x| !x.is_discontinuity()))
    }

    /// Every `A` is followed by `tau S` and every `B` by `S`, as the orbit of
    /// `+a` must be once it lands on `c1` or `c2`.
    pub fn is_orbit_consistent(&self) -> bool {
        let tau = self.tau();
        self.symbols().iter().enumerate().all(|(i, s)| match s {
            Symbol::A => self.shift(i + 1).compare(&tau) == Ordering::Equal,
            Symbol::B => self.shift(i + 1).compare(self) == Ordering::Equal,
            _ => true,
        })
    }

    /// The `2p` sequences `sigma^k S`, `sigma^k tau S` are pairwise distinct.
    pub fn has_distinct_orbit_points(&self) -> bool {
        let p = self.period();
        let tau = self.tau();
        let all: Vec<PeriodicSequence> = (0..p)
            .map(|k| self.shift(k))
            .chain((0..p).map(|k| tau.shift(k)))
            .collect();
        (0..all.len()).all(|i| (i + 1..all.len()).all(|j| all[i].compare(&all[j]) != Ordering::Equal))
    }
}

impl fmt::Display for PeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

impl FromStr for PeriodicSequence {
    type Err = SymbolicError;

    /// Accepts `RMB`, `RMB^inf` and `(RMB)^inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut body = s.trim();
        if let Some(stripped) = body.strip_suffix("^inf") {
            body = stripped.trim_end();
            if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
                body = inner;
            }
        }
        let offset = s.find(body).unwrap_or(0);
        let word: Word = body.parse().map_err(|e| match e {
            SymbolicError::InvalidSymbol { ch, position } => SymbolicError::InvalidSymbol {
                ch,
                position: position + offset,
            },
            other => other,
        })?;
        Self::new(word)
    }
}

impl Serialize for PeriodicSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PeriodicSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Kneading data `(S, tau S)`: the itineraries of `+a` and `-a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneadingPair {
    upper: PeriodicSequence,
    lower: PeriodicSequence,
}

impl KneadingPair {
    pub fn new(upper: PeriodicSequence) -> Result<Self, SymbolicError> {
        if !upper.is_admissible() {
            return Err(SymbolicError::NotAdmissible(upper.to_string()));
        }
        let lower = upper.tau();
        Ok(Self { upper, lower })
    }

    /// Itinerary of `+a`.
    pub fn upper(&self) -> &PeriodicSequence {
        &self.upper
    }

    /// Itinerary of `-a`.
    pub fn lower(&self) -> &PeriodicSequence {
        &self.lower
    }
}

/// Which period words the enumerator keeps, besides admissibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordForm {
    Any,
    /// `R ... B`, not bistable, with `2p` distinct orbit points.
    Markov {
        allow_interior_discontinuities: bool,
    },
}

impl WordForm {
    pub const MARKOV: WordForm = WordForm::Markov {
        allow_interior_discontinuities: false,
    };
}

/// All admissible period-`p` words, sorted lexicographically by symbol order.
pub fn enumerate_admissible(p: usize, form: WordForm) -> Result<Vec<PeriodicSequence>, SymbolicError> {
    enumerate_admissible_up_to(p, form, DEFAULT_MAX_PERIOD)
}

pub fn enumerate_admissible_up_to(
    p: usize,
    form: WordForm,
    max_period: usize,
) -> Result<Vec<PeriodicSequence>, SymbolicError> {
    if p == 0 {
        return Err(SymbolicError::PeriodZero);
    }
    if p > max_period {
        return Err(SymbolicError::PeriodTooLarge {
            period: p,
            max: max_period,
        });
    }
    let (alphabet, fixed_ends): (&[Symbol], bool) = match form {
        WordForm::Any => (&Symbol::ALL, false),
        WordForm::Markov {
            allow_interior_discontinuities: true,
        } => (&Symbol::ALL, true),
        WordForm::Markov {
            allow_interior_discontinuities: false,
        } => (&[Symbol::L, Symbol::M, Symbol::R], true),
    };
    if fixed_ends && p < 2 {
        return Ok(Vec::new());
    }
    let free = if fixed_ends { p - 2 } else { p };
    let base = alphabet.len() as u64;
    let total = base.pow(free as u32);
    let words: Vec<PeriodicSequence> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut interior = vec![Symbol::M; free];
            for slot in interior.iter_mut().rev() {
                *slot = alphabet[(code % base) as usize];
                code /= base;
            }
            let symbols = if fixed_ends {
                let mut s = Vec::with_capacity(p);
                s.push(Symbol::R);
                s.extend(interior);
                s.push(Symbol::B);
                s
            } else {
                interior
            };
            let seq = PeriodicSequence::from_symbols(symbols).expect("nonempty");
            // sigma^k S <= S forces S0 to be the largest symbol of the word.
            if seq.symbols().iter().any(|&x| x > seq.symbols()[0]) {
                return None;
            }
            let keep = seq.is_admissible()
                && match form {
                    WordForm::Any => true,
                    WordForm::Markov { .. } => {
                        !seq.is_bistable() && seq.is_orbit_consistent() && seq.has_distinct_orbit_points()
                    }
                };
            keep.then_some(seq)
        })
        .collect();
    Ok(words)
}
