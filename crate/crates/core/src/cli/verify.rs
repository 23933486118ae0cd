//! Built-in verification suites. Each check compares the numeric pipeline
//! against a closed form or a known invariant and reports the largest
//! error it saw. Seeds are fixed so every run is identical.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::CliError;
use crate::chsh::{chsh_value, max_chsh, mtm_eigs, optimize_settings, ChshSettings};
use crate::conjecture4::{conjecture_sum, generalized_ghz4, search, SearchOptions};
use crate::qcore::random::Sampler;
use crate::qcore::{bloch_decompose, haar_random_state, sample_seed, DensityMatrix, PureState};
use crate::slocc::{classify, make_product, BiseparableParams, FamilyParams, FreeQubit, GhzParams, WParams};
use crate::tolerances::TOL_TANGLE;
use crate::tradeoff3::{
    closed_form_ghz, pairwise_chsh_squares_mixed, trace_identity, tradeoff_sum, tradeoff_sum_family,
};
use crate::Result;

const SEED_THEOREM3: u64 = 0x7433;
const SEED_HORODECKI: u64 = 0x4852;
const SEED_IDENTITY: u64 = 0x1d3e;
const SEED_MIXTURES: u64 = 0x3e17;
const SEED_SEARCH: u64 = 0x5eac;
const SEED_CLASSIFIER: u64 = 0xc1a5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Identity,
    Horodecki,
    Conjecture,
    Classifier,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Theorem4,
        Suite::Identity,
        Suite::Horodecki,
        Suite::Conjecture,
        Suite::Classifier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Identity => "identity",
            Suite::Horodecki => "horodecki",
            Suite::Conjecture => "conjecture",
            Suite::Classifier => "classifier",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> std::result::Result<Self, CliError> {
        Suite::EACH.into_iter().chain([Suite::All]).find(|x| x.name() == s).ok_or_else(|| {
            CliError::Parse(format!(
                "unknown suite `{s}` (expected theorem1..theorem4, identity, horodecki, conjecture, classifier or all)"
            ))
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    /// Extra lines printed under the status line.
    pub notes: Vec<String>,
}

impl CheckResult {
    fn new(suite: Suite, name: &str, passed: bool, max_error: f64) -> Self {
        Self { suite: suite.name(), name: name.into(), passed, max_error, notes: Vec::new() }
    }

    fn with_note(mut self, note: String) -> Self {
        self.notes.push(note);
        self
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{} max_error={:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.max_error
        )?;
        for note in &self.notes {
            write!(f, "\n    {note}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<CheckResult>> {
    match suite {
        Suite::Theorem1 => theorem1(),
        Suite::Theorem2 => theorem2(),
        Suite::Theorem3 => theorem3(),
        Suite::Theorem4 => theorem4(),
        Suite::Identity => identity(),
        Suite::Horodecki => horodecki(),
        Suite::Conjecture => conjecture(),
        Suite::Classifier => classifier(),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(s)?);
            }
            Ok(out)
        }
    }
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

/// `n` evenly spaced points covering `[lo, hi]`.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

fn theorem1() -> Result<Vec<CheckResult>> {
    let r = tradeoff_sum(&make_product())?;
    let err = max_of([(r.total - 12.0).abs(), (r.s_ab - 4.0).abs(), (r.s_ac - 4.0).abs(), (r.s_bc - 4.0).abs()]);
    Ok(vec![CheckResult::new(Suite::Theorem1, "product-total", err < 1e-10, err)])
}

fn theorem2() -> Result<Vec<CheckResult>> {
    let deltas = linspace(0.01, FRAC_PI_4, 50);
    let mut err: f64 = 0.0;
    let mut in_range = true;
    for free_qubit in [FreeQubit::A, FreeQubit::B, FreeQubit::C] {
        for &delta in &deltas {
            let r = tradeoff_sum_family(&FamilyParams::Biseparable(BiseparableParams { free_qubit, delta }))?;
            let expected = 4.0 * (2.0 * delta).cos().powi(2) + 8.0;
            err = err.max((r.total - expected).abs());
            in_range &= r.total >= 8.0 - 1e-9 && r.total < 12.0;
        }
    }
    Ok(vec![
        CheckResult::new(Suite::Theorem2, "closed-form", err < 1e-8, err),
        CheckResult::new(Suite::Theorem2, "range[8,12)", in_range, 0.0),
    ])
}

/// Uniform point of the open simplex `a + b + c < 1`, all positive.
fn simplex_interior(s: &mut Sampler) -> WParams {
    loop {
        let e: Vec<f64> = (0..4).map(|_| -s.uniform().ln()).collect();
        let sum: f64 = e.iter().sum();
        let p = WParams { a: e[0] / sum, b: e[1] / sum, c: e[2] / sum };
        if p.a > 1e-6 && p.b > 1e-6 && p.c > 1e-6 && p.d() > 1e-6 {
            return p;
        }
    }
}

fn theorem3() -> Result<Vec<CheckResult>> {
    let mut s = Sampler::new(SEED_THEOREM3);
    let points: Vec<WParams> = (0..200).map(|_| simplex_interior(&mut s)).collect();
    let mut err: f64 = 0.0;
    let mut in_range = true;
    for p in &points {
        let r = tradeoff_sum_family(&FamilyParams::W(*p))?;
        let v = w_v(p.a, p.b, p.c);
        let expected = 2.0 * (3.0 * (1.0 + v.sqrt()) + 4.0 * (p.a * p.b + p.a * p.c + p.b * p.c));
        err = err.max((r.total - expected).abs());
        in_range &= r.total > 8.0 - 1e-9 && r.total < 12.0 + 1e-9;
    }
    let third = 1.0 / 3.0;
    let golden = tradeoff_sum_family(&FamilyParams::W(WParams { a: third, b: third, c: third }))?;
    let golden_err = (golden.total - 32.0 / 3.0).abs();
    Ok(vec![
        CheckResult::new(Suite::Theorem3, "closed-form", err < 1e-8, err),
        CheckResult::new(Suite::Theorem3, "range(8,12)", in_range, 0.0),
        CheckResult::new(Suite::Theorem3, "symmetric-point", golden_err < 1e-8, golden_err),
    ])
}

/// `V = [(√a+√b+√c)² + d][(√a+√b−√c)² + d][(√a−√b+√c)² + d][(−√a+√b+√c)² + d]` with `d = 1−a−b−c`.
fn w_v(a: f64, b: f64, c: f64) -> f64 {
    let d = 1.0 - a - b - c;
    let (x, y, z) = (a.sqrt(), b.sqrt(), c.sqrt());
    ((x + y + z).powi(2) + d) * ((x + y - z).powi(2) + d) * ((x - y + z).powi(2) + d) * ((-x + y + z).powi(2) + d)
}

/// Points of the 10×5×5×5 grid used for the GHZ family checks.
pub fn theorem4_grid() -> Vec<[f64; 4]> {
    let deltas = linspace(PI / 40.0, FRAC_PI_4, 10);
    let angles = linspace(PI / 10.0, FRAC_PI_2, 5);
    let mut out = Vec::with_capacity(1250);
    for &d in &deltas {
        for &a in &angles {
            for &b in &angles {
                for &c in &angles {
                    out.push([d, a, b, c]);
                }
            }
        }
    }
    out
}

struct GhzPoint {
    discrepancy: f64,
    f: f64,
    total: f64,
}

fn ghz_point(p: [f64; 4], phi: f64) -> Result<GhzPoint> {
    let [delta, alpha, beta, gamma] = p;
    let r = tradeoff_sum_family(&FamilyParams::Ghz(GhzParams { delta, alpha, beta, gamma, phi }))?;
    let cf = closed_form_ghz(delta, alpha, beta, gamma)?;
    Ok(GhzPoint { discrepancy: (r.total - cf.pairs.total).abs(), f: cf.f, total: r.total })
}

fn theorem4() -> Result<Vec<CheckResult>> {
    let grid = theorem4_grid();
    let at_half_pi: Vec<GhzPoint> = grid.par_iter().map(|&p| ghz_point(p, FRAC_PI_2)).collect::<Result<_>>()?;
    let err = max_of(at_half_pi.iter().map(|g| g.discrepancy));
    let matched = at_half_pi.iter().filter(|g| g.discrepancy < 1e-8).count();
    let f_err = max_of(at_half_pi.iter().map(|g| (-1.0 - g.f).max(g.f)));
    let f_ok = at_half_pi.iter().all(|g| g.f >= -1.0 - 1e-12 && g.f <= 1e-12);
    let range_ok = at_half_pi.iter().all(|g| g.total >= 8.0 - 1e-9 && g.total <= 12.0 + 1e-9);

    let mut closed = CheckResult::new(Suite::Theorem4, "closed-form(phi=pi/2)", err < 1e-8, err)
        .with_note(format!("{matched}/{} grid points within 1e-8", grid.len()));
    if let Some((i, worst)) = at_half_pi.iter().enumerate().max_by(|a, b| a.1.discrepancy.total_cmp(&b.1.discrepancy)) {
        let [d, a, b, c] = grid[i];
        closed = closed.with_note(format!(
            "worst at delta={d:.6} alpha={a:.6} beta={b:.6} gamma={c:.6}: discrepancy {:.6e}",
            worst.discrepancy
        ));
    }
    for phi in [PI / 8.0, FRAC_PI_4, 3.0 * PI / 4.0, PI] {
        let pts: Vec<GhzPoint> = grid.par_iter().map(|&p| ghz_point(p, phi)).collect::<Result<_>>()?;
        let e = max_of(pts.iter().map(|g| g.discrepancy));
        let m = pts.iter().filter(|g| g.discrepancy < 1e-8).count();
        closed = closed.with_note(format!(
            "recorded: phi={phi:.6} max discrepancy {e:.6e}, {m}/{} points within 1e-8",
            grid.len()
        ));
    }
    Ok(vec![
        closed,
        CheckResult::new(Suite::Theorem4, "f-in[-1,0]", f_ok, f_err),
        CheckResult::new(Suite::Theorem4, "range[8,12]", range_ok, 0.0),
    ])
}

fn identity() -> Result<Vec<CheckResult>> {
    let states: Vec<PureState> =
        (0..1000).map(|i| haar_random_state(3, sample_seed(SEED_IDENTITY, i))).collect::<Result<_>>()?;
    let trace_err =
        max_of(states.par_iter().map(|s| trace_identity(s).map(|t| (t - 3.0).abs())).collect::<Result<Vec<_>>>()?);
    let pure_totals: Vec<f64> = states.par_iter().map(|s| tradeoff_sum(s).map(|r| r.total)).collect::<Result<_>>()?;
    let mut sampler = Sampler::new(SEED_MIXTURES);
    let mixtures: Vec<DensityMatrix> = (0..200).map(|i| sampler.random_mixture(3, 2 + i % 4)).collect::<Result<_>>()?;
    let mixed_totals: Vec<f64> =
        mixtures.par_iter().map(|m| pairwise_chsh_squares_mixed(m).map(|p| p.total())).collect::<Result<_>>()?;

    let upper = pure_totals.iter().chain(&mixed_totals).all(|&t| t <= 12.0 + 1e-9);
    let lower = pure_totals.iter().all(|&t| t >= 8.0 - 1e-9);
    let over = max_of(pure_totals.iter().chain(&mixed_totals).map(|t| t - 12.0));
    let under = max_of(pure_totals.iter().map(|t| 8.0 - t));
    Ok(vec![
        CheckResult::new(Suite::Identity, "trace-sum=3", trace_err < 1e-9, trace_err),
        CheckResult::new(Suite::Identity, "upper-bound-12", upper, over),
        CheckResult::new(Suite::Identity, "pure-lower-bound-8", lower, under),
    ])
}

fn horodecki() -> Result<Vec<CheckResult>> {
    let mut sampler = Sampler::new(SEED_HORODECKI);
    let mut rhos: Vec<DensityMatrix> = (0..100)
        .map(|i| haar_random_state(2, sample_seed(SEED_HORODECKI, i)).map(|s| s.density()))
        .collect::<Result<_>>()?;
    for i in 0..100 {
        rhos.push(sampler.random_mixture(2, 2 + i % 3)?);
    }
    let rows: Vec<(f64, f64)> = rhos
        .par_iter()
        .enumerate()
        .map(|(i, rho)| {
            let closed = max_chsh(rho)?;
            let (_, value) = optimize_settings(rho, 8, sample_seed(SEED_HORODECKI ^ 0xff, i as u64))?;
            // Random settings must never beat the closed form either.
            let mut s = Sampler::new(sample_seed(SEED_HORODECKI ^ 0xabc, i as u64));
            let mut excess = value - closed;
            for _ in 0..20 {
                let settings = ChshSettings::new(s.unit_vector(), s.unit_vector(), s.unit_vector(), s.unit_vector())?;
                excess = excess.max(chsh_value(rho, &settings)?.abs() - closed);
            }
            let m = bloch_decompose(rho)?.m;
            let tau = mtm_eigs(&m);
            let oracle = 2.0 * tau.top_two().sqrt();
            Ok(((value - oracle).abs(), excess))
        })
        .collect::<Result<_>>()?;
    let err = max_of(rows.iter().map(|r| r.0));
    let excess = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        CheckResult::new(Suite::Horodecki, "optimizer-vs-closed", err < 1e-6, err),
        CheckResult::new(Suite::Horodecki, "never-exceeds-max", excess <= 1e-9, excess.max(0.0)),
    ])
}

fn conjecture() -> Result<Vec<CheckResult>> {
    let mut err = (conjecture_sum(&PureState::basis(4, 0)?)?.total - 3.0).abs();
    for theta in linspace(0.0, FRAC_PI_2, 20) {
        err = err.max((conjecture_sum(&generalized_ghz4(theta))?.total - 3.0).abs());
    }
    let opts =
        SearchOptions { n: 4, samples: 10_000, restarts: 10, seed: SEED_SEARCH, anchor: 0, warm_starts: Vec::new() };
    let first = search(&opts)?;
    let second = search(&opts)?;
    let excess = first.best_total - 3.0;
    let deterministic = first == second;
    Ok(vec![
        CheckResult::new(Suite::Conjecture, "saturating-cases", err < 1e-10, err),
        CheckResult::new(Suite::Conjecture, "search<=3", excess <= 1e-9, excess.max(0.0))
            .with_note(format!("best_total {:.15}", first.best_total)),
        CheckResult::new(Suite::Conjecture, "search-deterministic", deterministic, 0.0),
    ])
}

/// Interior parameter sample for one of the generator families.
pub fn interior_family_sample(s: &mut Sampler, which: usize) -> FamilyParams {
    let between = |s: &mut Sampler, lo: f64, hi: f64| lo + (hi - lo) * s.uniform();
    match which % 6 {
        0 => FamilyParams::Product,
        k @ 1..=3 => FamilyParams::Biseparable(BiseparableParams {
            free_qubit: [FreeQubit::A, FreeQubit::B, FreeQubit::C][k - 1],
            delta: between(s, 0.05, FRAC_PI_4),
        }),
        4 => FamilyParams::W(simplex_interior(s)),
        _ => FamilyParams::Ghz(GhzParams {
            delta: between(s, 0.05, FRAC_PI_4),
            alpha: between(s, 0.25, FRAC_PI_2),
            beta: between(s, 0.25, FRAC_PI_2),
            gamma: between(s, 0.25, FRAC_PI_2),
            phi: between(s, 0.0, 2.0 * PI),
        }),
    }
}

fn classifier() -> Result<Vec<CheckResult>> {
    let mut s = Sampler::new(SEED_CLASSIFIER);
    let samples: Vec<FamilyParams> = (0..500).map(|i| interior_family_sample(&mut s, i)).collect();
    let mut mismatches = Vec::new();
    for (i, p) in samples.iter().enumerate() {
        let got = classify(&p.state()?, TOL_TANGLE)?.tag;
        if got != p.expected_tag() {
            mismatches.push((i, p.expected_tag(), got));
        }
    }
    let mut check =
        CheckResult::new(Suite::Classifier, "generator-classes", mismatches.is_empty(), mismatches.len() as f64);
    for (i, want, got) in mismatches.iter().take(5) {
        check = check.with_note(format!("sample {i}: expected {want}, got {got}"));
    }
    Ok(vec![check])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("theorem5".parse::<Suite>().is_err());
    }

    #[test]
    fn fast_suites_pass() {
        for suite in [Suite::Theorem1, Suite::Theorem2, Suite::Theorem3, Suite::Classifier] {
            for check in run_suite(suite).unwrap() {
                assert!(check.passed, "{check}");
            }
        }
    }

    #[test]
    fn w_v_symmetric_point() {
        let t = 1.0 / 3.0;
        assert!((w_v(t, t, t) - 1.0 / 9.0).abs() < 1e-14);
    }
}
