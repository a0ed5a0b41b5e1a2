//! Acceptance criteria, one PASS/FAIL line each.

use std::cmp::Ordering;
use std::io::Write;
use std::time::{Duration, Instant};

use kneading_core::homology::{build_theta, verify_identities};
use kneading_core::kneading::{
    growth_number, kneading_det_from_matrix, kneading_determinant, kneading_determinant_any, kneading_increments,
    lap_series,
};
use kneading_core::maps::{detect_kneading, lap_counts, numeric_itinerary, GAlpha, GAlphaArctan, GBeta, IntervalMap};
use kneading_core::markov::{build_orbit_table, spectral_radius, transition_matrix};
use kneading_core::poly::{IntMatrix, IntPolynomial, RationalFunction, DEFAULT_ROOT_TOL};
use kneading_core::symbolic::{compare_words, enumerate_admissible, KneadingPair, PeriodicSequence, Symbol, WordForm};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn seq(s: &str) -> PeriodicSequence {
    s.parse().unwrap()
}

fn m<const N: usize>(rows: &[[i64; N]]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c)
}

fn golden_alpha() -> f64 {
    (5f64.sqrt() - 1.0) / 4.0
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn markov_words_upto(p_max: usize) -> Vec<PeriodicSequence> {
    (1..=p_max)
        .flat_map(|p| enumerate_admissible(p, WordForm::MARKOV).unwrap())
        .collect()
}

fn example_exactness() -> Outcome {
    let start = Instant::now();
    let rmb = seq("RMB");
    let tbl = build_orbit_table(&rmb).map_err(|e| e.to_string())?;
    let psi = transition_matrix(&tbl).map_err(|e| e.to_string())?;
    let h = build_theta(&rmb).map_err(|e| e.to_string())?;
    let expect = [
        (
            "pi(RMB)",
            &tbl.pi,
            m(&[
                [0, 0, 0, 0, 1, 0],
                [0, 0, 0, 1, 0, 0],
                [0, 0, 1, 0, 0, 0],
                [0, 0, 0, 0, 0, 1],
                [1, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
            ]),
        ),
        (
            "psi(RMB)",
            &psi.psi,
            m(&[
                [1, 1, 1, 0, 0],
                [0, 0, 0, 0, 1],
                [0, 1, 1, 1, 0],
                [1, 0, 0, 0, 0],
                [0, 0, 1, 1, 1],
            ]),
        ),
        (
            "eta(RMB)",
            &h.eta,
            m(&[
                [1, -1, 0, 1, -1, 0],
                [-1, 0, 1, -1, 0, 1],
                [0, 0, 0, 0, 0, 0],
                [1, 0, -1, 1, 0, -1],
                [-1, 1, 0, -1, 1, 0],
            ]),
        ),
        (
            "gamma(RMB)",
            &h.gamma,
            m(&[
                [0, 0, 0, -1, 0, 0],
                [1, -1, 0, -1, 0, 0],
                [0, 0, -1, 0, 0, 0],
                [-1, 0, 0, 0, 0, 0],
                [-1, 0, 0, 1, -1, 0],
                [0, 0, 0, 0, 0, -1],
            ]),
        ),
        (
            "Theta(RMB)",
            &h.theta,
            m(&[
                [0, 0, 0, 0, -1, 0],
                [0, 1, -1, 0, -1, 0],
                [-1, 0, 0, 0, 0, 0],
                [0, -1, 0, 0, 0, 0],
                [0, -1, 0, 0, 1, -1],
                [0, 0, 0, -1, 0, 0],
            ]),
        ),
    ];
    for (name, got, want) in &expect {
        ensure(*got == want, || format!("{name}:\n{got}\nexpected\n{want}"))?;
    }
    let cp = psi.char_poly();
    let want = &poly(&[1, -1, 1]) * &poly(&[1, -2, 0, -1]);
    ensure(cp == want, || format!("det(I - t psi) for RMB is {cp}"))?;

    let rlmb = seq("RLMB");
    let tbl = build_orbit_table(&rlmb).map_err(|e| e.to_string())?;
    let psi = transition_matrix(&tbl).map_err(|e| e.to_string())?;
    let h = build_theta(&rlmb).map_err(|e| e.to_string())?;
    let expect = [
        (
            "pi(RLMB)",
            &tbl.pi,
            m(&[
                [0, 0, 0, 0, 0, 1, 0, 0],
                [0, 0, 1, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 1, 0, 0, 0],
                [0, 0, 0, 1, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 0, 1],
                [1, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 1, 0],
                [0, 1, 0, 0, 0, 0, 0, 0],
            ]),
        ),
        (
            "psi(RLMB)",
            &psi.psi,
            m(&[
                [0, 0, 0, 1, 1, 1, 0],
                [1, 1, 1, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 1, 1],
                [0, 0, 1, 1, 1, 0, 0],
                [1, 1, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 1, 1, 1],
                [0, 1, 1, 1, 0, 0, 0],
            ]),
        ),
        (
            "Theta(RLMB)",
            &h.theta,
            m(&[
                [0, 0, 0, 0, 0, -1, 0, 0],
                [0, 1, -1, 0, 0, -1, 0, 0],
                [0, -1, 0, -1, 0, 1, 0, 0],
                [-1, 0, 0, 0, 0, 0, 0, 0],
                [0, -1, 0, 0, 0, 0, 0, 0],
                [0, -1, 0, 0, 0, 1, -1, 0],
                [0, 1, 0, 0, 0, -1, 0, -1],
                [0, 0, 0, 0, -1, 0, 0, 0],
            ]),
        ),
    ];
    for (name, got, want) in &expect {
        ensure(*got == want, || format!("{name}:\n{got}\nexpected\n{want}"))?;
    }
    let cp = h.theta.det_i_minus_t().map_err(|e| e.to_string())?;
    let want = &poly(&[1, 0, 0, 0, -1]) * &poly(&[1, -2, -2, 0, 1]);
    ensure(cp == want, || format!("det(I - t Theta) for RLMB is {cp}"))?;
    let d = kneading_determinant(&rlmb).map_err(|e| e.to_string())?;
    let scaled = d.mul_poly(&poly(&[1, 1]));
    let want = RationalFunction::new(poly(&[1, -2, -2, 0, 1]), poly(&[1, 0, 0, 0, -1])).unwrap();
    ensure(scaled == want, || format!("(1 + t) D(t) for RLMB is {scaled}"))?;
    within(start.elapsed(), Duration::from_secs(1), "example matrices")?;
    Ok("RMB: pi, psi, eta, gamma, Theta, det(I - t psi); RLMB: pi, psi, Theta, char poly, (1+t)D".into())
}

fn growth_number_criterion() -> Outcome {
    let s = seq("RMB");
    let d = kneading_determinant(&s).map_err(|e| e.to_string())?;
    let g = growth_number(&d, DEFAULT_ROOT_TOL);
    let t0 = g.t0.ok_or("no root in (0, 1)")?;
    ensure((t0 - 0.45340).abs() <= 5e-5, || format!("t0 = {t0}"))?;
    ensure((g.rho - 2.2056).abs() <= 5e-4, || format!("rho = {}", g.rho))?;
    let psi = transition_matrix(&build_orbit_table(&s).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = spectral_radius(&psi, DEFAULT_ROOT_TOL);
    ensure((r * t0 - 1.0).abs() <= 1e-8, || {
        format!("rho(psi) t0 - 1 = {:e}", r * t0 - 1.0)
    })?;
    Ok(format!(
        "t0 = {t0:.6}, rho = {:.5}, |rho(psi) t0 - 1| = {:.1e}",
        g.rho,
        (r * t0 - 1.0).abs()
    ))
}

fn lap_series_criterion() -> Outcome {
    let start = Instant::now();
    let expected: Vec<BigInt> = [3, 7, 17, 39, 87, 193].iter().map(|&x| BigInt::from(x)).collect();
    let d = kneading_determinant(&seq("RMB")).map_err(|e| e.to_string())?;
    let series = lap_series(&d, 6).map_err(|e| e.to_string())?;
    ensure(series == expected, || format!("lap series {series:?}"))?;
    let g = GAlphaArctan { alpha: golden_alpha() };
    let counts: Vec<BigInt> = lap_counts(&g, 6, 1e-9)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| BigInt::from(c.laps))
        .collect();
    ensure(counts == expected, || format!("numeric lap counts {counts:?}"))?;
    within(start.elapsed(), Duration::from_secs(30), "lap counts")?;
    Ok("series and numeric counts both 3, 7, 17, 39, 87, 193".into())
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(f)
}

fn main_sweep() -> Outcome {
    let start = Instant::now();
    let words = single_threaded(|| markov_words_upto(8));
    let mut failures = Vec::new();
    for s in &words {
        let r = verify_identities(s, 1e-8).map_err(|e| format!("{s}: {e}"))?;
        let exact = r.eta_gamma_zero
            && r.eta_omega_conjugacy
            && r.eta_gamma_minus_eta
            && r.theta_kneading
            && r.theta_markov
            && r.psi_zero_one;
        if !exact || !r.spectral_match {
            failures.push(format!("{s}: {:?}", r.failures()));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    within(start.elapsed(), Duration::from_secs(300), "sweep")?;
    Ok(format!(
        "{} sequences checked, 0 failures, {:.1?}",
        words.len(),
        start.elapsed()
    ))
}

fn oracle_agreement() -> Outcome {
    let words = markov_words_upto(8);
    for s in &words {
        let order = 2 * s.period();
        let d = kneading_determinant_any(s).map_err(|e| format!("{s}: {e}"))?;
        let closed = d.series(order).map_err(|e| format!("{s}: {e}"))?;
        let n = kneading_increments(&KneadingPair::new(s.clone()).map_err(|e| e.to_string())?, order);
        // Signed minors: D1 = -D2 = D3 on the raw minors means all three agree here.
        for j in 1..=3 {
            let dj = kneading_det_from_matrix(&n, j);
            ensure(dj == closed, || {
                format!("{s}: D{j} disagrees with the closed form through t^{order}")
            })?;
        }
    }
    Ok(format!("{} sequences, through order 2p", words.len()))
}

fn fold(s: &PeriodicSequence) -> Vec<Symbol> {
    s.symbols()
        .iter()
        .map(|&x| match x {
            Symbol::A => Symbol::L,
            Symbol::B => Symbol::R,
            other => other,
        })
        .collect()
}

fn numeric_realization() -> Outcome {
    let d = detect_kneading(&GAlpha { alpha: golden_alpha() }, 200, 1e-9);
    let s = d
        .periodic()
        .ok_or_else(|| format!("G_alpha: no period, prefix {}", d.word()))?;
    ensure(*s == seq("RMB") && s.period() == 3, || format!("G_alpha detected {s}"))?;
    let d = detect_kneading(&GBeta { beta: 3.1588 }, 200, 1e-9);
    let b = d
        .periodic()
        .ok_or_else(|| format!("g_beta: no period, prefix {}", d.word()))?;
    ensure(b.period() == 3 && fold(b) == fold(&seq("RMB")), || {
        format!("g_beta detected {b}")
    })?;
    Ok(format!("G_alpha -> ({s})^inf, g_beta -> ({b})^inf"))
}

fn order_consistency() -> Outcome {
    let g = GAlphaArctan { alpha: golden_alpha() };
    let a = g.a();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 1000 {
        let (x, y): (f64, f64) = (rng.gen_range(-a..a), rng.gen_range(-a..a));
        if x == y {
            continue;
        }
        let (x, y) = (x.min(y), x.max(y));
        let ix = numeric_itinerary(&g, x, 40, 1e-9).map_err(|e| e.to_string())?;
        let iy = numeric_itinerary(&g, y, 40, 1e-9).map_err(|e| e.to_string())?;
        ensure(compare_words(&ix, &iy) != Ordering::Greater, || {
            format!("It({x}) = {ix} > It({y}) = {iy}")
        })?;
        checked += 1;
    }
    Ok("1000 pairs, depth 40, no inversion".into())
}

// Straight to the process stdout, so the lines show up without --nocapture.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("example exactness", example_exactness),
        ("growth number", growth_number_criterion),
        ("lap series", lap_series_criterion),
        ("identity sweep p <= 8", main_sweep),
        ("kneading oracle agreement", oracle_agreement),
        ("numeric realization", numeric_realization),
        ("order consistency", order_consistency),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => report(format!("PASS {} {name}: {detail}", i + 1)),
            Err(why) => {
                report(format!("FAIL {} {name}: {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
