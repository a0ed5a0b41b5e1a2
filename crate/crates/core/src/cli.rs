//! Command-line front end.
//!
//! Every command renders to a string so that reports are byte-identical for
//! identical inputs, whatever `--jobs` is.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::homology::{build_theta, verify_all_upto, verify_identities, HomologyError, SweepError};
use crate::kneading::{
    growth_number, kneading_det_from_matrix, kneading_determinant_any, kneading_increments, lap_series, u_poly,
    KneadingError,
};
use crate::maps::{detect_kneading, lap_counts_with, lap_growth_estimate, Coincidence, Detection, Family, MapError};
use crate::markov::{build_orbit_table, spectral_radius, transition_matrix, MarkovError};
use crate::poly::{IntMatrix, DEFAULT_ROOT_TOL};
use crate::symbolic::{enumerate_admissible, KneadingPair, PeriodicSequence, SymbolicError, WordForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "kneading",
    version,
    about = "Kneading determinants, Markov matrices and lap counts for odd bimodal maps with two discontinuities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Tolerance for floating-point identity checks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Truncation order for series computed from the increments (default 2p).
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweeps and scans.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kneading determinant, growth number and lap series of a sequence.
    Knead {
        sequence: String,
        /// Number of lap-series coefficients.
        #[arg(long, default_value_t = 6)]
        laps: usize,
    },
    /// Orbit permutation and transition matrix of a Markov sequence.
    Markov { sequence: String },
    /// Chain-level matrices of a Markov sequence.
    Theta { sequence: String },
    /// Check every identity for one sequence, or for all up to a period.
    Verify {
        #[arg(required_unless_present = "all_upto", conflicts_with = "all_upto")]
        sequence: Option<String>,
        #[arg(long)]
        all_upto: Option<usize>,
    },
    /// List admissible sequences of a given period.
    Enumerate {
        period: usize,
        /// All admissible sequences rather than the Markov-form ones.
        #[arg(long)]
        any: bool,
    },
    /// Lap counts of the iterates of a map.
    Laps {
        #[command(flatten)]
        map: MapSelect,
        #[arg(long, default_value_t = 6)]
        laps: usize,
        #[arg(long, value_enum, default_value_t = CoincidenceArg::Fold)]
        coincidence: CoincidenceArg,
        #[arg(long, default_value_t = crate::maps::DEFAULT_EPS)]
        eps: f64,
    },
    /// Detected kneading sequence and growth rates across a parameter range.
    Scan {
        /// g_beta, G_alpha or G_alpha_arctan.
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Iterate used for the lap-growth estimate.
        #[arg(long, default_value_t = 10)]
        laps: usize,
        /// Symbols of itinerary used for period detection.
        #[arg(long, default_value_t = 200)]
        depth: usize,
        #[arg(long, default_value_t = crate::maps::DEFAULT_EPS)]
        eps: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct MapSelect {
    #[arg(long, requires = "param", conflicts_with = "json")]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<f64>,
    /// Family as JSON, e.g. '{"family":"g_beta","beta":3.1588}'.
    #[arg(long)]
    pub json: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoincidenceArg {
    Fold,
    OneSided,
}

impl From<CoincidenceArg> for Coincidence {
    fn from(c: CoincidenceArg) -> Self {
        match c {
            CoincidenceArg::Fold => Coincidence::Fold,
            CoincidenceArg::OneSided => Coincidence::OneSided,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Io(_) => 1,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}
domain_from!(KneadingError, MarkovError, HomologyError, SweepError, MapError);

/// Parse errors are usage errors; the other symbolic errors are domain errors.
impl From<SymbolicError> for CliError {
    fn from(e: SymbolicError) -> Self {
        match e {
            SymbolicError::InvalidSymbol { .. } | SymbolicError::EmptyPeriod => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

/// A rendered report and the exit code it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

pub fn parse_sequence(s: &str) -> Result<PeriodicSequence, CliError> {
    Ok(s.trim().parse()?)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn no_csv(cmd: &str) -> CliError {
    CliError::Usage(format!("`{cmd}` has matrix output; use --format json or text"))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", g.tol)));
    }
    let body = || -> Result<Output, CliError> {
        match &cli.command {
            Command::Knead { sequence, laps } => cmd_knead(&parse_sequence(sequence)?, *laps, g),
            Command::Markov { sequence } => cmd_markov(&parse_sequence(sequence)?, g),
            Command::Theta { sequence } => cmd_theta(&parse_sequence(sequence)?, g),
            Command::Verify { sequence: Some(s), .. } => cmd_verify(&parse_sequence(s)?, g),
            Command::Verify { all_upto: Some(p), .. } => cmd_verify_all(*p, g),
            Command::Verify { .. } => Err(CliError::Usage("give a sequence or --all-upto".into())),
            Command::Enumerate { period, any } => cmd_enumerate(*period, *any, g),
            Command::Laps {
                map,
                laps,
                coincidence,
                eps,
            } => cmd_laps(&select_family(map)?, *laps, (*coincidence).into(), *eps, g),
            Command::Scan {
                family,
                from,
                to,
                step,
                laps,
                depth,
                eps,
            } => {
                let params = ScanParams {
                    family: family.clone(),
                    from: *from,
                    to: *to,
                    step: *step,
                    laps: *laps,
                    depth: *depth,
                    eps: *eps,
                };
                cmd_scan(&params, g)
            }
        }
    };
    match g.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(body),
        None => body(),
    }
}

/// Runs and writes the report to `--out` or stdout; returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(out) => {
            let written = match &cli.global.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn select_family(m: &MapSelect) -> Result<Family, CliError> {
    let fam = match (&m.family, m.param, &m.json) {
        (Some(name), Some(p), None) => Family::from_name(name, p)?,
        (None, None, Some(j)) => {
            let f: Family = serde_json::from_str(j).map_err(|e| CliError::Usage(format!("family JSON: {e}")))?;
            f.validate()?;
            f
        }
        _ => {
            return Err(CliError::Usage(
                "select a map with --family NAME --param X, or --json".into(),
            ))
        }
    };
    Ok(fam)
}

#[derive(Debug, Serialize)]
pub struct KneadReport {
    pub sequence: String,
    pub period: usize,
    pub admissible: bool,
    pub bistable: bool,
    pub orbit_consistent: bool,
    pub u: Option<String>,
    pub determinant: Option<String>,
    pub t0: Option<f64>,
    pub rho: Option<f64>,
    pub laps: Option<Vec<String>>,
    /// `D_1 = D_2 = D_3` from the increments, through `t^order`.
    pub increments_agree: Option<bool>,
    pub order: Option<usize>,
}

fn cmd_knead(s: &PeriodicSequence, n_laps: usize, g: &GlobalOpts) -> Result<Output, CliError> {
    let admissible = s.is_admissible();
    let mut r = KneadReport {
        sequence: s.to_string(),
        period: s.period(),
        admissible,
        bistable: s.is_bistable(),
        orbit_consistent: s.is_orbit_consistent(),
        u: None,
        determinant: None,
        t0: None,
        rho: None,
        laps: None,
        increments_agree: None,
        order: None,
    };
    if admissible {
        let d = kneading_determinant_any(s)?;
        let growth = growth_number(&d, DEFAULT_ROOT_TOL);
        let order = g.order.unwrap_or(2 * s.period());
        let n = kneading_increments(&KneadingPair::new(s.clone())?, order);
        let expected = d.series(order).map_err(KneadingError::from)?;
        r.u = Some(u_poly(s).to_string());
        r.determinant = Some(d.to_string());
        r.t0 = growth.t0;
        r.rho = Some(growth.rho);
        r.laps = lap_series(&d, n_laps)
            .ok()
            .map(|v| v.iter().map(|c| c.to_string()).collect());
        r.increments_agree = Some((1..=3).all(|j| kneading_det_from_matrix(&n, j) == expected));
        r.order = Some(order);
    }
    let text = match g.format {
        Format::Json => json(&r),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                sequence: &'a str,
                period: usize,
                admissible: bool,
                bistable: bool,
                determinant: &'a str,
                t0: Option<f64>,
                rho: Option<f64>,
                laps: String,
            }
            csv_rows(&[Row {
                sequence: &r.sequence,
                period: r.period,
                admissible: r.admissible,
                bistable: r.bistable,
                determinant: r.determinant.as_deref().unwrap_or(""),
                t0: r.t0,
                rho: r.rho,
                laps: r.laps.as_ref().map(|l| l.join(" ")).unwrap_or_default(),
            }])
        }
        Format::Text => {
            let mut t = String::new();
            let _ = writeln!(t, "sequence: ({})^inf, period {}", r.sequence, r.period);
            let _ = writeln!(t, "admissible: {}", r.admissible);
            let _ = writeln!(t, "bistable: {}", r.bistable);
            let _ = writeln!(t, "orbit consistent: {}", r.orbit_consistent);
            if let Some(d) = &r.determinant {
                let _ = writeln!(t, "u: {}", r.u.as_deref().unwrap_or(""));
                let _ = writeln!(t, "D(t) = {d}");
                match r.t0 {
                    Some(t0) => {
                        let _ = writeln!(t, "t0 = {t0:.10}");
                    }
                    None => {
                        let _ = writeln!(t, "t0: no root in (0, 1)");
                    }
                }
                let _ = writeln!(t, "rho = {:.10}", r.rho.unwrap_or(1.0));
                match &r.laps {
                    Some(l) => {
                        let _ = writeln!(t, "laps: {}", l.join(", "));
                    }
                    None => {
                        let _ = writeln!(t, "laps: not defined for this sequence");
                    }
                }
                let _ = writeln!(
                    t,
                    "increments agree through t^{}: {}",
                    r.order.unwrap_or(0),
                    r.increments_agree.unwrap_or(false)
                );
            }
            t
        }
    };
    let code = if !admissible {
        EXIT_DOMAIN
    } else if r.increments_agree == Some(false) {
        EXIT_VERIFICATION
    } else {
        EXIT_OK
    };
    Ok(Output { text, code })
}

#[derive(Debug, Serialize)]
pub struct MarkovReport {
    pub sequence: String,
    pub period: usize,
    pub orbit: Vec<String>,
    pub pi: IntMatrix,
    pub psi: IntMatrix,
    pub char_poly: String,
    pub rho: f64,
}

fn cmd_markov(s: &PeriodicSequence, g: &GlobalOpts) -> Result<Output, CliError> {
    let tbl = build_orbit_table(s)?;
    let psi = transition_matrix(&tbl)?;
    let r = MarkovReport {
        sequence: s.to_string(),
        period: tbl.p,
        orbit: (0..2 * tbl.p).map(|i| tbl.w(i).to_string()).collect(),
        pi: tbl.pi.clone(),
        char_poly: psi.char_poly().to_string(),
        rho: spectral_radius(&psi, DEFAULT_ROOT_TOL),
        psi: psi.psi,
    };
    let text = match g.format {
        Format::Json => json(&r),
        Format::Csv => return Err(no_csv("markov")),
        Format::Text => format!(
            "sequence: ({})^inf, period {}\norbit points, in order: {}\npi =\n{}\npsi =\n{}\ndet(I - t psi) = {}\nrho(psi) = {:.10}\n",
            r.sequence,
            r.period,
            r.orbit.join(" < "),
            r.pi,
            r.psi,
            r.char_poly,
            r.rho
        ),
    };
    Ok(Output::ok(text))
}

#[derive(Debug, Serialize)]
pub struct ThetaReport {
    pub sequence: String,
    pub period: usize,
    pub eta: IntMatrix,
    #[serde(rename = "Gamma")]
    pub big_gamma: IntMatrix,
    pub gamma: IntMatrix,
    #[serde(rename = "Theta")]
    pub theta: IntMatrix,
    pub char_poly: String,
}

fn cmd_theta(s: &PeriodicSequence, g: &GlobalOpts) -> Result<Output, CliError> {
    let h = build_theta(s)?;
    let char_poly = h.theta.det_i_minus_t().map_err(HomologyError::from)?.to_string();
    let r = ThetaReport {
        sequence: s.to_string(),
        period: h.p,
        eta: h.eta,
        big_gamma: h.big_gamma,
        gamma: h.gamma,
        theta: h.theta,
        char_poly,
    };
    let text = match g.format {
        Format::Json => json(&r),
        Format::Csv => return Err(no_csv("theta")),
        Format::Text => format!(
            "sequence: ({})^inf, period {}\neta =\n{}\nGamma =\n{}\ngamma =\n{}\nTheta =\n{}\ndet(I - t Theta) = {}\n",
            r.sequence, r.period, r.eta, r.big_gamma, r.gamma, r.theta, r.char_poly
        ),
    };
    Ok(Output::ok(text))
}

fn cmd_verify(s: &PeriodicSequence, g: &GlobalOpts) -> Result<Output, CliError> {
    let r = verify_identities(s, g.tol)?;
    let text = match g.format {
        Format::Json => json(&r),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                check: &'static str,
                passed: bool,
            }
            csv_rows(
                &r.checks()
                    .into_iter()
                    .map(|(check, passed)| Row { check, passed })
                    .collect::<Vec<_>>(),
            )
        }
        Format::Text => {
            let mut t = format!("sequence: ({})^inf, period {}\n", r.sequence, r.period);
            for (name, ok) in r.checks() {
                let _ = writeln!(t, "{name}: {}", if ok { "ok" } else { "FAILED" });
            }
            let _ = writeln!(t, "rank gap: {}", r.boundary_rank_gap);
            let _ = writeln!(t, "det(I - t Theta) = {}", r.p_theta);
            let _ = writeln!(t, "det(I - t psi) = {}", r.det_psi);
            let _ = writeln!(t, "D(t) = {}", r.kneading_determinant);
            t
        }
    };
    let code = if r.all_passed() { EXIT_OK } else { EXIT_VERIFICATION };
    Ok(Output { text, code })
}

fn cmd_verify_all(max_p: usize, g: &GlobalOpts) -> Result<Output, CliError> {
    let r = verify_all_upto(max_p, g.tol)?;
    let summary = format!("{} sequences checked, {} failures", r.checked, r.failures.len());
    let text = match g.format {
        Format::Json => json(&r),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                period: usize,
                sequences: usize,
            }
            let rows: Vec<Row> = r
                .per_period
                .iter()
                .enumerate()
                .map(|(i, &n)| Row {
                    period: i + 1,
                    sequences: n,
                })
                .collect();
            csv_rows(&rows)
        }
        Format::Text => {
            let mut t = String::new();
            for (i, n) in r.per_period.iter().enumerate() {
                let _ = writeln!(t, "period {}: {n}", i + 1);
            }
            for f in &r.failures {
                let _ = writeln!(t, "counterexample {}: {}", f.sequence, f.failures().join(", "));
            }
            let _ = writeln!(t, "{summary}");
            t
        }
    };
    let code = if r.all_passed() { EXIT_OK } else { EXIT_VERIFICATION };
    Ok(Output { text, code })
}

fn cmd_enumerate(p: usize, any: bool, g: &GlobalOpts) -> Result<Output, CliError> {
    let form = if any { WordForm::Any } else { WordForm::MARKOV };
    let words = enumerate_admissible(p, form)?;
    let text = match g.format {
        Format::Json => json(&words),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                word: String,
                period: usize,
                bistable: bool,
            }
            let rows: Vec<Row> = words
                .iter()
                .map(|w| Row {
                    word: w.to_string(),
                    period: w.period(),
                    bistable: w.is_bistable(),
                })
                .collect();
            csv_rows(&rows)
        }
        Format::Text => words.iter().map(|w| format!("{w}\n")).collect(),
    };
    Ok(Output::ok(text))
}

#[derive(Debug, Serialize)]
pub struct LapRow {
    pub n: usize,
    pub laps: usize,
    pub growth: f64,
    pub near_coincidences: usize,
}

fn cmd_laps(fam: &Family, n: usize, rule: Coincidence, eps: f64, g: &GlobalOpts) -> Result<Output, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--laps must be at least 1".into()));
    }
    let counts = lap_counts_with(&fam.bounded(), n, eps, rule)?;
    let rows: Vec<LapRow> = counts
        .iter()
        .enumerate()
        .map(|(k, c)| LapRow {
            n: k + 1,
            laps: c.laps,
            growth: lap_growth_estimate(c.laps, k + 1),
            near_coincidences: c.near_coincidences,
        })
        .collect();
    let text = match g.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                map: &'a Family,
                coincidence: Coincidence,
                laps: &'a [LapRow],
            }
            json(&Report {
                map: fam,
                coincidence: rule,
                laps: &rows,
            })
        }
        Format::Csv => csv_rows(&rows),
        Format::Text => {
            let mut t = format!("{fam}\n");
            for r in &rows {
                let _ = write!(t, "n = {}: {} laps, growth {:.6}", r.n, r.laps, r.growth);
                if r.near_coincidences > 0 {
                    let _ = write!(t, " ({} values on a discontinuity)", r.near_coincidences);
                }
                t.push('\n');
            }
            t
        }
    };
    Ok(Output::ok(text))
}

/// Parameters of a scan.
#[derive(Debug, Clone)]
pub struct ScanParams {
    pub family: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub laps: usize,
    pub depth: usize,
    pub eps: f64,
}

impl ScanParams {
    /// Grid points `from + i*step` up to `to`, snapped to the step's decimals.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(CliError::Usage(format!("--step must be positive, got {}", self.step)));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || self.to < self.from {
            return Err(CliError::Usage("need finite --from <= --to".into()));
        }
        let count = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(CliError::Usage(format!("{count} grid points is too many")));
        }
        let scale = 1e12;
        Ok((0..count)
            .map(|i| ((self.from + i as f64 * self.step) * scale).round() / scale)
            .collect())
    }
}

/// One row of a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub param: f64,
    pub word: String,
    pub period: Option<usize>,
    pub rho_kneading: Option<f64>,
    pub rho_laps: Option<f64>,
    /// `ok`, `prefix` (no period found) or `error: ...`.
    pub status: String,
}

pub fn scan_row(fam: &Family, params: &ScanParams) -> ScanRow {
    let mut row = ScanRow {
        param: fam.param(),
        word: String::new(),
        period: None,
        rho_kneading: None,
        rho_laps: None,
        status: "ok".into(),
    };
    if let Err(e) = fam.validate() {
        row.status = format!("error: {e}");
        return row;
    }
    let detection = detect_kneading(fam, params.depth, params.eps);
    match &detection {
        Detection::Periodic(s) => {
            row.word = s.to_string();
            row.period = Some(s.period());
            if !s.is_admissible() {
                row.status = "error: detected word is not admissible".into();
            } else {
                match kneading_determinant_any(s) {
                    Ok(d) => row.rho_kneading = Some(growth_number(&d, DEFAULT_ROOT_TOL).rho),
                    Err(e) => row.status = format!("error: {e}"),
                }
            }
        }
        Detection::Prefix(w) => {
            let shown: String = w.to_string().chars().take(24).collect();
            row.word = format!("{shown}...");
            row.status = "prefix".into();
        }
    }
    match lap_counts_with(&fam.bounded(), params.laps, params.eps, Coincidence::Fold) {
        Ok(c) => {
            let last = c.last().expect("laps >= 1");
            row.rho_laps = Some(lap_growth_estimate(last.laps, params.laps));
        }
        Err(e) if row.status == "ok" || row.status == "prefix" => row.status = format!("error: {e}"),
        Err(_) => {}
    }
    row
}

pub fn scan(params: &ScanParams) -> Result<Vec<ScanRow>, CliError> {
    if params.laps == 0 || params.depth == 0 {
        return Err(CliError::Usage("--laps and --depth must be at least 1".into()));
    }
    let base = Family::named(&params.family, params.from)
        .ok_or_else(|| CliError::Usage(format!("unknown family {:?}", params.family)))?;
    let grid = params.grid()?;
    Ok(grid
        .par_iter()
        .map(|&p| scan_row(&base.with_param(p), params))
        .collect())
}

fn cmd_scan(params: &ScanParams, g: &GlobalOpts) -> Result<Output, CliError> {
    let rows = scan(params)?;
    let text = match g.format {
        Format::Json => json(&rows),
        Format::Csv | Format::Text => csv_rows(&rows),
    };
    Ok(Output::ok(text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Output, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("kneading").chain(args.iter().copied())).expect("parses");
        run(&cli)
    }

    #[test]
    fn knead_rmb_text() {
        let out = run_args(&["knead", "RMB"]).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.text.contains("D(t) = (1 - 2*t - t^3)/"), "{}", out.text);
        assert!(out.text.contains("rho = 2.20556"), "{}", out.text);
        assert!(out.text.contains("laps: 3, 7, 17, 39, 87, 193"), "{}", out.text);
    }

    #[test]
    fn knead_mmm_has_growth_one() {
        let out = run_args(&["knead", "MMM", "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["admissible"], true);
        assert_eq!(v["u"], "0");
        assert_eq!(v["rho"], 1.0);
    }

    #[test]
    fn knead_rlmb_laps_prefix() {
        let out = run_args(&["knead", "RLMB", "--laps", "4", "--format", "json"]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["laps"][0], "3");
        assert_eq!(v["laps"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn non_admissible_is_a_verdict() {
        let out = run_args(&["knead", "LRM"]).unwrap();
        assert_eq!(out.code, EXIT_DOMAIN);
        assert!(out.text.contains("admissible: false"));
    }

    #[test]
    fn bad_symbol_is_usage_error() {
        let e = run_args(&["knead", "RXB"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        assert!(e.to_string().contains('1'), "{e}");
    }

    #[test]
    fn markov_form_error_is_domain() {
        let e = run_args(&["markov", "MMM"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_DOMAIN);
    }

    #[test]
    fn matrix_commands_reject_csv() {
        assert_eq!(
            run_args(&["theta", "RMB", "--format", "csv"]).unwrap_err().exit_code(),
            EXIT_USAGE
        );
    }

    #[test]
    fn scan_step_zero_is_usage_error() {
        let e = run_args(&["scan", "g_beta", "--from", "3.1", "--to", "3.2", "--step", "0"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn unknown_family_is_usage_error() {
        let e = run_args(&["scan", "h_gamma", "--from", "3.1", "--to", "3.2", "--step", "0.1"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn grid_is_snapped() {
        let params = ScanParams {
            family: "g_beta".into(),
            from: 3.1,
            to: 3.2,
            step: 0.01,
            laps: 4,
            depth: 50,
            eps: 1e-9,
        };
        let grid = params.grid().unwrap();
        assert_eq!(grid.len(), 11);
        assert_eq!(grid[3], 3.13);
        assert_eq!(grid[10], 3.2);
    }

    #[test]
    fn laps_from_json_family() {
        let out = run_args(&[
            "laps",
            "--json",
            r#"{"family":"g_beta","beta":2.4}"#,
            "--laps",
            "2",
            "--format",
            "csv",
        ])
        .unwrap();
        assert!(
            out.text.starts_with("n,laps,growth,near_coincidences\n1,3,"),
            "{}",
            out.text
        );
    }
}
