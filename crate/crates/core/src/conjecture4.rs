//! Pair correlation tensors of multi-qubit pure states and the anchored
//! bound `tr[T_AB T_ABᵀ] + tr[T_AC T_ACᵀ] + tr[T_AD T_ADᵀ] ≤ 3` for four
//! qubits.
//!
//! For `n > 4` qubits [`conjecture_sum_n`] sums over every pair that
//! contains the anchor. That is one possible reading of the generalization
//! and reports label it `"anchored"`; no bound is asserted for it.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::pauli::PauliAction;
use crate::qcore::state::check_labels;
use crate::qcore::{
    bloch_decompose, c64, haar_random_state, label_name, sample_seed, CorrelationMatrix, Pauli, PauliString, PureState,
};
use crate::tolerances::TOL_BOUND;

/// Bound on the anchored sum where one is claimed: 3 for four qubits, and
/// 3 for three qubits, where it follows from the full pair identity.
pub fn conjecture_bound(n: usize) -> Option<f64> {
    matches!(n, 3 | 4).then_some(3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTensor {
    pub pair: (usize, usize),
    pub t: CorrelationMatrix,
}

impl PairTensor {
    /// `tr[T Tᵀ]`
    pub fn trace_ttt(&self) -> f64 {
        self.t.frobenius_sqr()
    }
}

fn check_pair(n: usize, x: usize, y: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension("pair tensors need at least two qubits".into()));
    }
    check_labels(n, &[x, y])
}

/// `t_ij = ⟨ψ| σ_i(x) ⊗ σ_j(y) ⊗ I |ψ⟩`, evaluated on the full state.
pub fn pair_tensor(state: &PureState, x: usize, y: usize) -> Result<PairTensor> {
    let n = state.n_qubits();
    check_pair(n, x, y)?;
    let mut t = [[0.0; 3]; 3];
    for (i, &pi) in Pauli::XYZ.iter().enumerate() {
        for (j, &pj) in Pauli::XYZ.iter().enumerate() {
            t[i][j] = state.expectation(&PauliString::pair(n, x, pi, y, pj))?;
        }
    }
    Ok(PairTensor { pair: (x, y), t: CorrelationMatrix(t) })
}

/// The same tensor via the reduced state `ρ_xy` and its Bloch decomposition.
pub fn pair_tensor_reduced(state: &PureState, x: usize, y: usize) -> Result<PairTensor> {
    check_pair(state.n_qubits(), x, y)?;
    let rho = state.density().partial_trace(&[x, y])?;
    Ok(PairTensor { pair: (x, y), t: bloch_decompose(&rho)?.m })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairValue {
    /// Pair label such as `"AB"`.
    pub pair: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureResult {
    pub n_qubits: usize,
    pub anchored_qubit: char,
    /// Always `"anchored"`: pairs (anchor, Y) for every other qubit Y.
    pub pair_set: String,
    pub per_pair: Vec<PairValue>,
    pub total: f64,
}

fn pair_label(x: usize, y: usize) -> String {
    [label_name(x), label_name(y)].iter().collect()
}

/// Anchored sum for a four-qubit state with anchor A.
pub fn conjecture_sum(state: &PureState) -> Result<ConjectureResult> {
    if state.n_qubits() != 4 {
        return Err(Error::Dimension(format!("the four-qubit sum needs n = 4, got {}", state.n_qubits())));
    }
    conjecture_sum_n(state, 0)
}

/// `Σ_{Y ≠ anchor} tr[T_{anchor,Y} T_{anchor,Y}ᵀ]` for `n ≥ 3`.
pub fn conjecture_sum_n(state: &PureState, anchor: usize) -> Result<ConjectureResult> {
    let n = state.n_qubits();
    if n < 3 {
        return Err(Error::Dimension(format!("anchored pair sums need n >= 3, got {n}")));
    }
    check_labels(n, &[anchor])?;
    let per_pair = (0..n)
        .filter(|&y| y != anchor)
        .map(|y| Ok(PairValue { pair: pair_label(anchor, y), value: pair_tensor(state, anchor, y)?.trace_ttt() }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConjectureResult {
        n_qubits: n,
        anchored_qubit: label_name(anchor),
        pair_set: "anchored".into(),
        total: per_pair.iter().map(|p| p.value).sum(),
        per_pair,
    })
}

/// `Σ_{x<y} tr[T_xy T_xyᵀ]` over every pair of qubits.
pub fn all_pairs_sum(state: &PureState) -> Result<f64> {
    let n = state.n_qubits();
    let mut total = 0.0;
    for x in 0..n {
        for y in (x + 1)..n {
            total += pair_tensor(state, x, y)?.trace_ttt();
        }
    }
    Ok(total)
}

/// `cos θ |0000⟩ + sin θ |1111⟩`
pub fn generalized_ghz4(theta: f64) -> PureState {
    let mut amps = vec![c64(0.0, 0.0); 16];
    amps[0] = c64(theta.cos(), 0.0);
    amps[15] = c64(theta.sin(), 0.0);
    PureState::from_normalized(4, amps)
}

/// Anchored objective with the 9·(n−1) Pauli actions precomputed. Works on
/// unnormalized amplitude vectors (it divides by the squared norm).
struct AnchoredObjective {
    actions: Vec<PauliAction>,
}

impl AnchoredObjective {
    fn new(n: usize, anchor: usize) -> Self {
        let mut actions = Vec::with_capacity(9 * (n - 1));
        for y in (0..n).filter(|&y| y != anchor) {
            for &pi in &Pauli::XYZ {
                for &pj in &Pauli::XYZ {
                    actions.push(PauliString::pair(n, anchor, pi, y, pj).action());
                }
            }
        }
        Self { actions }
    }

    /// `x` holds real parts then imaginary parts.
    fn eval(&self, x: &[f64]) -> f64 {
        let dim = x.len() / 2;
        let (re, im) = x.split_at(dim);
        let norm_sqr: f64 = x.iter().map(|v| v * v).sum();
        let amp = |k: usize| c64(re[k], im[k]);
        let sum: f64 = self
            .actions
            .iter()
            .map(|act| {
                let e: f64 = (0..dim).map(|k| (amp(k ^ act.flip).conj() * act.phase(k) * amp(k)).re).sum();
                e * e
            })
            .sum();
        sum / (norm_sqr * norm_sqr)
    }
}

fn to_real(state: &PureState) -> Vec<f64> {
    let a = state.amplitudes();
    a.iter().map(|z| z.re).chain(a.iter().map(|z| z.im)).collect()
}

fn from_real(n: usize, x: &[f64]) -> Result<PureState> {
    let dim = x.len() / 2;
    PureState::new(n, (0..dim).map(|k| c64(x[k], x[dim + k])).collect())
}

/// Central-difference step of the ascent.
pub const FD_STEP: f64 = 1e-5;
/// The ascent stops once an accepted step gains less than this.
pub const ASCENT_MIN_GAIN: f64 = 1e-10;
pub const ASCENT_MAX_ITERS: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult {
    pub state: PureState,
    pub total: f64,
    pub iterations: usize,
}

/// Gradient ascent of the anchored sum over the real `2^(n+1)`
/// parametrization (real and imaginary parts, renormalized every step),
/// using central differences and a backtracking step length.
pub fn ascend(start: &PureState, anchor: usize) -> Result<AscentResult> {
    let n = start.n_qubits();
    if n < 3 {
        return Err(Error::Dimension(format!("anchored pair sums need n >= 3, got {n}")));
    }
    check_labels(n, &[anchor])?;
    let objective = AnchoredObjective::new(n, anchor);
    let mut x = to_real(start);
    let mut value = objective.eval(&x);
    let mut step = 0.1;
    let mut grad = vec![0.0; x.len()];
    let mut probe = x.clone();
    let mut iterations = 0;

    while iterations < ASCENT_MAX_ITERS {
        iterations += 1;
        for i in 0..x.len() {
            probe[i] = x[i] + FD_STEP;
            let up = objective.eval(&probe);
            probe[i] = x[i] - FD_STEP;
            let down = objective.eval(&probe);
            probe[i] = x[i];
            grad[i] = (up - down) / (2.0 * FD_STEP);
        }
        if grad.iter().map(|g| g * g).sum::<f64>().sqrt() < 1e-12 {
            break;
        }
        let mut t = step;
        let accepted = loop {
            let mut cand: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi + t * gi).collect();
            let norm = cand.iter().map(|v| v * v).sum::<f64>().sqrt();
            cand.iter_mut().for_each(|v| *v /= norm);
            let cand_value = objective.eval(&cand);
            if cand_value > value {
                break Some((cand, cand_value));
            }
            t *= 0.5;
            if t < 1e-14 {
                break None;
            }
        };
        let Some((cand, cand_value)) = accepted else { break };
        let gain = cand_value - value;
        x = cand;
        probe.copy_from_slice(&x);
        value = cand_value;
        step = (2.0 * t).min(10.0);
        if gain < ASCENT_MIN_GAIN {
            break;
        }
    }
    Ok(AscentResult { state: from_real(n, &x)?, total: value, iterations })
}

pub const HISTOGRAM_BIN_WIDTH: f64 = 0.05;
pub const HISTOGRAM_BINS: usize = 80;

/// Bin of width 0.05 over [0, 4]; values at or above 4 land in the last bin.
pub fn histogram_bin(total: f64) -> usize {
    ((total / HISTOGRAM_BIN_WIDTH).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub n: usize,
    pub samples: usize,
    pub restarts: usize,
    pub seed: u64,
    pub anchor: usize,
    /// Extra ascent starting points, run after the sampled restarts.
    pub warm_starts: Vec<PureState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best_total: f64,
    pub best_state: PureState,
    /// Largest anchored sum among the Haar samples alone.
    pub sampled_best: f64,
    /// Final totals of each ascent run, sampled restarts first.
    pub ascent_totals: Vec<f64>,
    pub histogram: Vec<u64>,
    /// Whether `best_total` exceeds the bound for this `n` by more than 1e-9.
    pub violation_found: bool,
}

/// Haar sampling followed by local ascent from the best samples.
pub fn search_max(n: usize, samples: usize, restarts: usize, seed: u64) -> Result<SearchOutcome> {
    search(&SearchOptions { n, samples, restarts, seed, anchor: 0, warm_starts: Vec::new() })
}

/// Sample `i` uses seed `seed + i`, so the outcome does not depend on how
/// rayon schedules the work.
pub fn search(opts: &SearchOptions) -> Result<SearchOutcome> {
    let n = opts.n;
    if !(3..=crate::qcore::MAX_QUBITS).contains(&n) {
        return Err(Error::Dimension(format!("search needs 3 <= n <= 6, got {n}")));
    }
    if opts.samples == 0 {
        return Err(Error::Param("at least one sample is required".into()));
    }
    check_labels(n, &[opts.anchor])?;
    if opts.warm_starts.iter().any(|s| s.n_qubits() != n) {
        return Err(Error::Dimension("warm start has the wrong qubit count".into()));
    }
    let objective = AnchoredObjective::new(n, opts.anchor);

    let totals: Vec<f64> = (0..opts.samples as u64)
        .into_par_iter()
        .map(|i| haar_random_state(n, sample_seed(opts.seed, i)).map(|s| objective.eval(&to_real(&s))))
        .collect::<Result<_>>()?;

    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    for &t in &totals {
        histogram[histogram_bin(t)] += 1;
    }

    let mut ranked: Vec<usize> = (0..totals.len()).collect();
    ranked.sort_by(|&i, &j| totals[j].total_cmp(&totals[i]).then(i.cmp(&j)));
    let sampled_best_index = ranked[0];
    let sampled_best = totals[sampled_best_index];

    let mut starts: Vec<PureState> = ranked
        .iter()
        .take(opts.restarts)
        .map(|&i| haar_random_state(n, sample_seed(opts.seed, i as u64)))
        .collect::<Result<_>>()?;
    starts.extend(opts.warm_starts.iter().cloned());

    let runs: Vec<AscentResult> = starts.par_iter().map(|s| ascend(s, opts.anchor)).collect::<Result<_>>()?;

    let mut best_total = sampled_best;
    let mut best_state = haar_random_state(n, sample_seed(opts.seed, sampled_best_index as u64))?;
    for run in &runs {
        if run.total.total_cmp(&best_total) == Ordering::Greater {
            best_total = run.total;
            best_state = run.state.clone();
        }
    }
    let violation_found = conjecture_bound(n).is_some_and(|b| best_total > b + TOL_BOUND);
    Ok(SearchOutcome {
        best_total,
        best_state,
        sampled_best,
        ascent_totals: runs.iter().map(|r| r.total).collect(),
        histogram,
        violation_found,
    })
}
