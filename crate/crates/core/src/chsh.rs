//! Maximal CHSH value of two-qubit states.
//!
//! The closed route takes the two largest eigenvalues `τ₁ ≥ τ₂` of `MᵀM`
//! and returns `2√(τ₁+τ₂)`. The independent route evaluates the CHSH
//! operator for explicit measurement directions and maximizes over them by
//! alternating ascent; the two must agree.
//!
//! Note on `τ₃`: some hand calculations write the squared value as
//! `4(τ₁+τ₃)`. That only coincides with `4(τ₁+τ₂)` when `τ₂ = τ₃`; this
//! module always uses the two largest eigenvalues.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add3, dot3, norm3, normalize3, sub3, symmetric_eigenvalues3, Vec3};
use crate::qcore::random::Sampler;
use crate::qcore::{bloch_decompose, sample_seed, CorrelationMatrix, DensityMatrix};

/// Alternating ascent stops after this many rounds ...
pub const ASCENT_MAX_ITERS: usize = 500;
/// ... or once one round changes the value by less than this.
pub const ASCENT_TOL: f64 = 1e-12;

/// Eigenvalues of `MᵀM`, descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenTriple {
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
}

impl EigenTriple {
    pub fn sum(&self) -> f64 {
        self.tau1 + self.tau2 + self.tau3
    }

    /// `τ₁ + τ₂`, clamped at zero against rounding.
    pub fn top_two(&self) -> f64 {
        (self.tau1 + self.tau2).max(0.0)
    }
}

pub fn mtm_eigs(m: &CorrelationMatrix) -> EigenTriple {
    let [tau1, tau2, tau3] = symmetric_eigenvalues3(&m.gram());
    EigenTriple { tau1, tau2, tau3 }
}

/// `2√(τ₁+τ₂)` for a correlation matrix.
pub fn max_chsh_from_correlations(m: &CorrelationMatrix) -> f64 {
    2.0 * mtm_eigs(m).top_two().sqrt()
}

/// Largest CHSH expectation over all projective ±1 observables.
pub fn max_chsh(rho: &DensityMatrix) -> Result<f64> {
    Ok(max_chsh_from_correlations(&bloch_decompose(rho)?.m))
}

/// `⟨CHSH⟩²_max = 4(τ₁+τ₂)`, without the square-root round trip.
pub fn max_chsh_squared(rho: &DensityMatrix) -> Result<f64> {
    Ok(4.0 * mtm_eigs(&bloch_decompose(rho)?.m).top_two())
}

/// Measurement directions for `A₁ = a·σ`, `A₂ = a′·σ`, `B₁ = b·σ`, `B₂ = b′·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: Vec3,
    pub a_prime: Vec3,
    pub b: Vec3,
    pub b_prime: Vec3,
}

impl ChshSettings {
    pub fn new(a: Vec3, a_prime: Vec3, b: Vec3, b_prime: Vec3) -> Result<Self> {
        let s = Self { a, a_prime, b, b_prime };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("a'", self.a_prime), ("b", self.b), ("b'", self.b_prime)] {
            let n = norm3(&v);
            if !n.is_finite() || (n - 1.0).abs() > 1e-10 {
                return Err(Error::Dimension(format!("setting {name} has norm {n}, expected 1")));
            }
        }
        Ok(())
    }

    /// `aᵀM(b+b′) + a′ᵀM(b−b′)`
    pub fn evaluate(&self, m: &CorrelationMatrix) -> f64 {
        dot3(&self.a, &m.apply(&add3(&self.b, &self.b_prime)))
            + dot3(&self.a_prime, &m.apply(&sub3(&self.b, &self.b_prime)))
    }

    fn components(&self) -> impl Iterator<Item = f64> + '_ {
        [self.a, self.a_prime, self.b, self.b_prime].into_iter().flatten()
    }

    fn lexicographic_cmp(&self, other: &Self) -> Ordering {
        self.components()
            .zip(other.components())
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

/// Expectation of `A₁B₁ + A₁B₂ + A₂B₁ − A₂B₂` for the given directions.
pub fn chsh_value(rho: &DensityMatrix, settings: &ChshSettings) -> Result<f64> {
    settings.validate()?;
    Ok(settings.evaluate(&bloch_decompose(rho)?.m))
}

/// Maximizes [`chsh_value`] over settings by alternating ascent from
/// `restarts` random starting points. Restart `k` draws from seed
/// `seed + k`. The best run wins; ties go to the lexicographically smallest
/// settings, so the answer does not depend on thread scheduling.
pub fn optimize_settings(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<(ChshSettings, f64)> {
    if restarts == 0 {
        return Err(Error::Param("at least one restart is required".into()));
    }
    let m = bloch_decompose(rho)?.m;
    optimize_correlations(&m, restarts, seed)
}

pub fn optimize_correlations(m: &CorrelationMatrix, restarts: usize, seed: u64) -> Result<(ChshSettings, f64)> {
    if restarts == 0 {
        return Err(Error::Param("at least one restart is required".into()));
    }
    let runs: Vec<(ChshSettings, f64)> = (0..restarts as u64)
        .into_par_iter()
        .map(|k| alternating_ascent(m, &mut Sampler::new(sample_seed(seed, k))))
        .collect();
    Ok(runs
        .into_iter()
        .reduce(|best, cand| match cand.1.total_cmp(&best.1) {
            Ordering::Greater => cand,
            Ordering::Equal if cand.0.lexicographic_cmp(&best.0).is_lt() => cand,
            _ => best,
        })
        .expect("restarts >= 1"))
}

fn direction_or_random(v: Vec3, rng: &mut Sampler) -> Vec3 {
    normalize3(&v).unwrap_or_else(|| rng.unit_vector())
}

fn alternating_ascent(m: &CorrelationMatrix, rng: &mut Sampler) -> (ChshSettings, f64) {
    let mut s =
        ChshSettings { a: [0.0, 0.0, 1.0], a_prime: [1.0, 0.0, 0.0], b: rng.unit_vector(), b_prime: rng.unit_vector() };
    let mut best = (s, f64::NEG_INFINITY);
    let mut previous = f64::NEG_INFINITY;
    for _ in 0..ASCENT_MAX_ITERS {
        // Alice's best response: each term of the bilinear form separately.
        s.a = direction_or_random(m.apply(&add3(&s.b, &s.b_prime)), rng);
        s.a_prime = direction_or_random(m.apply(&sub3(&s.b, &s.b_prime)), rng);
        // Bob's: bᵀMᵀ(a+a′) + b′ᵀMᵀ(a−a′).
        s.b = direction_or_random(m.apply_transpose(&add3(&s.a, &s.a_prime)), rng);
        s.b_prime = direction_or_random(m.apply_transpose(&sub3(&s.a, &s.a_prime)), rng);

        let value = s.evaluate(m);
        if value > best.1 {
            best = (s, value);
        }
        if (value - previous).abs() < ASCENT_TOL {
            break;
        }
        previous = value;
    }
    best
}
