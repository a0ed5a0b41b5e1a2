//! Concrete odd maps with two discontinuities: numeric orbits, itineraries,
//! kneading detection and lap counting.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symbolic::{PeriodicSequence, Symbol, Word};

/// Snap distance to a discontinuity, relative to `|c2|`.
pub const DEFAULT_EPS: f64 = 1e-9;
/// How far an orbit may leave the closed interval before it is rejected.
pub const ESCAPE_GUARD: f64 = 1e-7;
/// State quantum for cycle detection.
const STATE_QUANTUM: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("x = {0} is a discontinuity; use the one-sided convention")]
    AtDiscontinuity(f64),
    #[error("orbit left the domain at step {step} (x = {x})")]
    OrbitEscapedDomain { step: usize, x: f64 },
    #[error("bisection failed on lap ({l}, {r}) for target {target}")]
    BisectionFailure { l: f64, r: f64, target: f64 },
    #[error("lap counting needs a bounded domain; use the arctan-conjugated family")]
    UnboundedDomain,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Odd interval map on `(-a, a)` with discontinuities at `-c2 < c2`,
/// decreasing on each of its three laps, jumping from `-a` to `+a` at both
/// discontinuities, and with `F(+-a) = +-b`.
pub trait IntervalMap: Sync {
    fn a(&self) -> f64;
    fn b(&self) -> f64;
    fn c2(&self) -> f64;

    /// Branch formula; only meaningful off the discontinuities.
    fn branch(&self, x: f64) -> f64;

    fn c1(&self) -> f64 {
        -self.c2()
    }

    /// `F(x)` with the endpoint values `F(+-a) = +-b`.
    fn apply(&self, x: f64) -> f64 {
        let a = self.a();
        if x >= a {
            self.b()
        } else if x <= -a {
            -self.b()
        } else {
            self.branch(x)
        }
    }

    /// `F(x)`, refusing the discontinuities themselves.
    fn eval(&self, x: f64) -> Result<f64, MapError> {
        if x == self.c1() || x == self.c2() {
            return Err(MapError::AtDiscontinuity(x));
        }
        Ok(self.apply(x))
    }

    fn address(&self, x: f64) -> Symbol {
        let (c1, c2) = (self.c1(), self.c2());
        if x < c1 {
            Symbol::L
        } else if x == c1 {
            Symbol::A
        } else if x < c2 {
            Symbol::M
        } else if x == c2 {
            Symbol::B
        } else {
            Symbol::R
        }
    }
}

/// `x -> -beta tanh(beta tan x)` on `(-beta, beta)`.
pub fn eval_g_beta(x: f64, beta: f64) -> Result<f64, MapError> {
    GBeta { beta }.eval(x)
}

/// `x -> x / (4x^2 - 1) - alpha u(x)` on the real line.
pub fn eval_g_alpha(x: f64, alpha: f64) -> Result<f64, MapError> {
    GAlpha { alpha }.eval(x)
}

/// Step function: `-1` for `x <= -1/2`, `0` in between, `1` for `x >= 1/2`.
pub fn step_u(x: f64) -> f64 {
    if x <= -0.5 {
        -1.0
    } else if x < 0.5 {
        0.0
    } else {
        1.0
    }
}

/// `h(x) = atan(x)`, mapping the real line onto `(-pi/2, pi/2)`.
pub fn conjugate_to_bounded(x: f64) -> f64 {
    x.atan()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GBeta {
    pub beta: f64,
}

impl IntervalMap for GBeta {
    fn a(&self) -> f64 {
        self.beta
    }
    fn b(&self) -> f64 {
        self.branch(self.beta)
    }
    fn c2(&self) -> f64 {
        FRAC_PI_2
    }
    fn branch(&self, x: f64) -> f64 {
        -self.beta * (self.beta * x.tan()).tanh()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GAlpha {
    pub alpha: f64,
}

impl IntervalMap for GAlpha {
    fn a(&self) -> f64 {
        f64::INFINITY
    }
    fn b(&self) -> f64 {
        -self.alpha
    }
    fn c2(&self) -> f64 {
        0.5
    }
    fn branch(&self, x: f64) -> f64 {
        x / (4.0 * x * x - 1.0) - self.alpha * step_u(x)
    }
}

/// `atan o G_alpha o tan` on `(-pi/2, pi/2)`, prolonged to the endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GAlphaArctan {
    pub alpha: f64,
}

impl IntervalMap for GAlphaArctan {
    fn a(&self) -> f64 {
        FRAC_PI_2
    }
    fn b(&self) -> f64 {
        -self.alpha.atan()
    }
    fn c2(&self) -> f64 {
        0.5f64.atan()
    }
    fn branch(&self, x: f64) -> f64 {
        GAlpha { alpha: self.alpha }.apply(x.tan()).atan()
    }
}

/// A named family member, as selected on the command line or in JSON:
/// `{"family": "g_beta", "beta": 3.1588}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    #[serde(rename = "g_beta")]
    GBeta { beta: f64 },
    #[serde(rename = "G_alpha")]
    GAlpha { alpha: f64 },
    #[serde(rename = "G_alpha_arctan")]
    GAlphaArctan { alpha: f64 },
}

impl Family {
    pub fn from_name(name: &str, param: f64) -> Result<Self, MapError> {
        let f =
            Self::named(name, param).ok_or_else(|| MapError::InvalidParameter(format!("unknown family {name:?}")))?;
        f.validate()?;
        Ok(f)
    }

    /// Like [`Family::from_name`] without checking the parameter.
    pub fn named(name: &str, param: f64) -> Option<Self> {
        match name {
            "g_beta" => Some(Family::GBeta { beta: param }),
            "G_alpha" => Some(Family::GAlpha { alpha: param }),
            "G_alpha_arctan" => Some(Family::GAlphaArctan { alpha: param }),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::GBeta { .. } => "g_beta",
            Family::GAlpha { .. } => "G_alpha",
            Family::GAlphaArctan { .. } => "G_alpha_arctan",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            Family::GBeta { beta } => beta,
            Family::GAlpha { alpha } | Family::GAlphaArctan { alpha } => alpha,
        }
    }

    pub fn with_param(&self, param: f64) -> Self {
        match self {
            Family::GBeta { .. } => Family::GBeta { beta: param },
            Family::GAlpha { .. } => Family::GAlpha { alpha: param },
            Family::GAlphaArctan { .. } => Family::GAlphaArctan { alpha: param },
        }
    }

    /// `g_beta` has exactly two discontinuities in `(-beta, beta)` only for
    /// `pi/2 < beta < 3pi/2`.
    pub fn validate(&self) -> Result<(), MapError> {
        match *self {
            Family::GBeta { beta } if !(beta > FRAC_PI_2 && beta < 1.5 * PI) => Err(MapError::InvalidParameter(
                format!("beta = {beta} is outside (pi/2, 3pi/2)"),
            )),
            Family::GAlpha { alpha } | Family::GAlphaArctan { alpha } if !alpha.is_finite() => {
                Err(MapError::InvalidParameter(format!("alpha = {alpha}")))
            }
            _ => Ok(()),
        }
    }

    /// The same map on a bounded interval: `G_alpha` is replaced by its
    /// arctan conjugate.
    pub fn bounded(&self) -> Self {
        match *self {
            Family::GAlpha { alpha } => Family::GAlphaArctan { alpha },
            other => other,
        }
    }
}

impl IntervalMap for Family {
    fn a(&self) -> f64 {
        match *self {
            Family::GBeta { beta } => GBeta { beta }.a(),
            Family::GAlpha { alpha } => GAlpha { alpha }.a(),
            Family::GAlphaArctan { alpha } => GAlphaArctan { alpha }.a(),
        }
    }
    fn b(&self) -> f64 {
        match *self {
            Family::GBeta { beta } => GBeta { beta }.b(),
            Family::GAlpha { alpha } => GAlpha { alpha }.b(),
            Family::GAlphaArctan { alpha } => GAlphaArctan { alpha }.b(),
        }
    }
    fn c2(&self) -> f64 {
        match *self {
            Family::GBeta { beta } => GBeta { beta }.c2(),
            Family::GAlpha { alpha } => GAlpha { alpha }.c2(),
            Family::GAlphaArctan { alpha } => GAlphaArctan { alpha }.c2(),
        }
    }
    fn branch(&self, x: f64) -> f64 {
        match *self {
            Family::GBeta { beta } => GBeta { beta }.branch(x),
            Family::GAlpha { alpha } => GAlpha { alpha }.branch(x),
            Family::GAlphaArctan { alpha } => GAlphaArctan { alpha }.branch(x),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.param())
    }
}

/// Address of `x` with snapping: within `eps |c2|` of a discontinuity the
/// point is taken to be on it.
fn snapped_step<M: IntervalMap + ?Sized>(m: &M, x: f64, eps: f64) -> (Symbol, f64) {
    let tol = eps * m.c2().abs();
    if (x - m.c1()).abs() <= tol {
        (Symbol::A, -m.a())
    } else if (x - m.c2()).abs() <= tol {
        (Symbol::B, m.a())
    } else {
        (m.address(x), m.apply(x))
    }
}

fn check_domain<M: IntervalMap + ?Sized>(m: &M, step: usize, x: f64) -> Result<(), MapError> {
    let a = m.a();
    if x.is_nan() || (a.is_finite() && x.abs() > a + ESCAPE_GUARD) {
        return Err(MapError::OrbitEscapedDomain { step, x });
    }
    Ok(())
}

/// Addresses of `x0, F(x0), ..., F^(n-1)(x0)`. At a discontinuity the orbit
/// continues from `-a` (after `c1`) or `+a` (after `c2`).
pub fn numeric_itinerary<M: IntervalMap + ?Sized>(m: &M, x0: f64, n: usize, eps: f64) -> Result<Word, MapError> {
    let mut x = x0;
    let mut out = Vec::with_capacity(n);
    for step in 0..n {
        check_domain(m, step, x)?;
        let (s, next) = snapped_step(m, x, eps);
        out.push(s);
        x = next;
    }
    Ok(Word::new(out))
}

/// Result of kneading detection on the orbit of `+a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Periodic(PeriodicSequence),
    /// No return to `+a` within the step budget.
    Prefix(Word),
}

impl Detection {
    pub fn periodic(&self) -> Option<&PeriodicSequence> {
        match self {
            Detection::Periodic(s) => Some(s),
            Detection::Prefix(_) => None,
        }
    }

    pub fn word(&self) -> &Word {
        match self {
            Detection::Periodic(s) => s.word(),
            Detection::Prefix(w) => w,
        }
    }
}

fn quantize(x: f64) -> i64 {
    if x.is_infinite() {
        if x > 0.0 {
            i64::MAX
        } else {
            i64::MIN
        }
    } else {
        (x / STATE_QUANTUM).round() as i64
    }
}

/// Itinerary of `+a`, returned as a periodic word when the orbit comes
/// back to `+a`.
///
/// States are compared after rounding to `1e-10`; a candidate period is
/// kept only if the itinerary computed over the whole budget repeats it.
pub fn detect_kneading<M: IntervalMap + ?Sized>(m: &M, n_max: usize, eps: f64) -> Detection {
    let mut x = m.a();
    let mut seen: HashMap<(Symbol, i64), usize> = HashMap::new();
    let mut symbols = Vec::new();
    let mut period = None;
    for step in 0..n_max {
        if check_domain(m, step, x).is_err() {
            break;
        }
        let (s, next) = snapped_step(m, x, eps);
        let key = (s, quantize(x));
        if period.is_none() {
            match seen.get(&key) {
                Some(&0) => period = Some(step),
                Some(_) => {}
                None => {
                    seen.insert(key, step);
                }
            }
        }
        symbols.push(s);
        x = next;
    }
    if let Some(p) = period {
        let consistent = symbols.iter().enumerate().all(|(i, s)| *s == symbols[i % p]);
        if consistent {
            let word = PeriodicSequence::from_symbols(symbols[..p].to_vec()).expect("nonempty");
            return Detection::Periodic(word);
        }
    }
    Detection::Prefix(Word::new(symbols))
}

/// Lap count together with the number of breakpoint values that fell within
/// the snap distance of a discontinuity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LapCount {
    pub laps: usize,
    pub near_coincidences: usize,
}

/// How a lap end whose value lands on a discontinuity is treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coincidence {
    /// A value on `c1` counts as just left of it and a value on `c2` as just
    /// right of it, the same folding `A -> L`, `B -> R` used by the kneading
    /// determinant. When the turning orbit hits a discontinuity this is the
    /// count the lap series gives; it is not the count of the map itself,
    /// nor of nearby parameters on either side.
    #[default]
    Fold,
    /// Laps of the map itself: an end value on a discontinuity never splits
    /// a lap and maps to the limit from the side it is approached.
    OneSided,
}

/// Lap of `F^m`: the open interval `(l, r)` and the one-sided limits of
/// `F^m` at its ends.
#[derive(Clone, Copy, Debug)]
struct Lap {
    l: f64,
    r: f64,
    vl: f64,
    vr: f64,
}

fn iterate<M: IntervalMap + ?Sized>(m: &M, x: f64, times: usize) -> f64 {
    (0..times).fold(x, |y, _| m.apply(y))
}

/// `x` in `(l, r)` with `F^times(x) = target`, where `F^times` is monotone
/// on the lap.
fn bisect<M: IntervalMap + ?Sized>(m: &M, lap: &Lap, times: usize, target: f64) -> Result<f64, MapError> {
    let increasing = lap.vr > lap.vl;
    let (mut lo, mut hi) = (lap.l, lap.r);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = iterate(m, mid, times);
        if !v.is_finite() {
            return Err(MapError::BisectionFailure {
                l: lap.l,
                r: lap.r,
                target,
            });
        }
        if (v < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Number of laps of `F^n` under the default [`Coincidence::Fold`] rule.
pub fn lap_count<M: IntervalMap + ?Sized>(m: &M, n: usize, eps: f64) -> Result<LapCount, MapError> {
    Ok(*lap_counts(m, n, eps)?.last().expect("n >= 1"))
}

/// Lap counts of `F, F^2, ..., F^n` under [`Coincidence::Fold`].
pub fn lap_counts<M: IntervalMap + ?Sized>(m: &M, n: usize, eps: f64) -> Result<Vec<LapCount>, MapError> {
    lap_counts_with(m, n, eps, Coincidence::Fold)
}

/// A breakpoint of a lap being split: either an original end with its value
/// or a preimage of the cut `c`.
#[derive(Clone, Copy)]
enum Point {
    End(f64, f64),
    Cut(f64, f64),
}

impl Point {
    fn x(self) -> f64 {
        match self {
            Point::End(x, _) | Point::Cut(x, _) => x,
        }
    }

    fn v(self) -> f64 {
        match self {
            Point::End(_, v) | Point::Cut(_, v) => v,
        }
    }
}

/// Lap counts of `F, F^2, ..., F^n`, splitting laps of `F^(k-1)` at the
/// preimages of the discontinuities.
pub fn lap_counts_with<M: IntervalMap + ?Sized>(
    m: &M,
    n: usize,
    eps: f64,
    rule: Coincidence,
) -> Result<Vec<LapCount>, MapError> {
    assert!(n >= 1, "need at least one iterate");
    let a = m.a();
    if !a.is_finite() {
        return Err(MapError::UnboundedDomain);
    }
    let tol = eps * m.c2().abs();
    let (c1, c2) = (m.c1(), m.c2());
    let cuts = [c1, c2];
    let on = |v: f64, c: f64| (v - c).abs() <= tol;
    // Side of v relative to the cut c, 0 when undecided.
    let side = |v: f64, c: f64| -> i8 {
        if on(v, c) {
            match rule {
                Coincidence::Fold if c == c2 => 1,
                Coincidence::Fold => -1,
                Coincidence::OneSided => 0,
            }
        } else if v > c {
            1
        } else {
            -1
        }
    };
    let limit = |s: i8| if s > 0 { a } else { -a };
    // F applied to the value at `p`, with `other` the value at the far end.
    let push_forward = |p: Point, other: f64| -> f64 {
        match p {
            Point::Cut(_, c) => limit(side(other, c)),
            Point::End(_, v) => match cuts.iter().find(|&&c| on(v, c)) {
                Some(&c) => match rule {
                    Coincidence::Fold => limit(if c == c2 { 1 } else { -1 }),
                    Coincidence::OneSided => limit(if other > v { 1 } else { -1 }),
                },
                None => m.apply(v),
            },
        }
    };
    let mut laps = vec![Lap {
        l: -a,
        r: a,
        vl: -a,
        vr: a,
    }];
    let mut near = 0;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut next = Vec::with_capacity(3 * laps.len());
        for lap in &laps {
            let mut targets: Vec<f64> = Vec::new();
            for &c in &cuts {
                if on(lap.vl, c) || on(lap.vr, c) {
                    near += usize::from(k > 0);
                }
                if side(lap.vl, c) * side(lap.vr, c) < 0 {
                    targets.push(c);
                }
            }
            if lap.vr < lap.vl {
                targets.reverse();
            }
            let mut points = vec![Point::End(lap.l, lap.vl)];
            for c in targets {
                let x = if on(lap.vl, c) {
                    lap.l
                } else if on(lap.vr, c) {
                    lap.r
                } else {
                    bisect(m, lap, k, c)?
                };
                points.push(Point::Cut(x, c));
            }
            points.push(Point::End(lap.r, lap.vr));
            for w in points.windows(2) {
                next.push(Lap {
                    l: w[0].x(),
                    r: w[1].x(),
                    vl: push_forward(w[0], w[1].v()),
                    vr: push_forward(w[1], w[0].v()),
                });
            }
        }
        laps = next;
        out.push(LapCount {
            laps: laps.len(),
            near_coincidences: near,
        });
    }
    Ok(out)
}

/// `(l(F^n))^(1/n)`.
pub fn lap_growth_estimate(laps: usize, n: usize) -> f64 {
    (laps as f64).powf(1.0 / n as f64)
}
