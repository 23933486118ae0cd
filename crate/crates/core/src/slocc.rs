//! The six SLOCC classes of three-qubit pure states: canonical generators
//! and a numerical classifier based on single-qubit ranks and the 3-tangle.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::hermitian2_eigenvalues;
use crate::qcore::{c64, PureState};
use crate::tolerances::{AMBIGUITY_FACTOR, TOL_RANK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreeQubit {
    A,
    B,
    C,
}

impl FreeQubit {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// `|0⟩_free ⊗ (C_δ|00⟩ + S_δ|11⟩)` on the two other qubits, in label order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiseparableParams {
    pub free_qubit: FreeQubit,
    pub delta: f64,
}

/// `√a|001⟩ + √b|010⟩ + √c|100⟩ + √d|000⟩` with `d = 1 − a − b − c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl WParams {
    pub fn d(&self) -> f64 {
        1.0 - (self.a + self.b + self.c)
    }
}

/// `√κ (C_δ|000⟩ + S_δ e^{iφ} |ψ_A⟩|ψ_B⟩|ψ_C⟩)` with
/// `|ψ_X⟩ = cos x |0⟩ + sin x |1⟩` for `x = α, β, γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzParams {
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub phi: f64,
}

impl GhzParams {
    /// `κ = (1 + 2 C_δ S_δ C_α C_β C_γ C_φ)⁻¹`
    pub fn kappa(&self) -> f64 {
        let overlap = self.delta.cos()
            * self.delta.sin()
            * self.alpha.cos()
            * self.beta.cos()
            * self.gamma.cos()
            * self.phi.cos();
        1.0 / (1.0 + 2.0 * overlap)
    }
}

/// A generator family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    Product,
    Biseparable(BiseparableParams),
    W(WParams),
    Ghz(GhzParams),
}

impl FamilyParams {
    pub fn state(&self) -> Result<PureState> {
        match self {
            FamilyParams::Product => Ok(make_product()),
            FamilyParams::Biseparable(p) => make_biseparable(p),
            FamilyParams::W(p) => make_w(p),
            FamilyParams::Ghz(p) => make_ghz(p),
        }
    }

    pub fn expected_tag(&self) -> SloccTag {
        match self {
            FamilyParams::Product => SloccTag::ProductABC,
            FamilyParams::Biseparable(p) => match p.free_qubit {
                FreeQubit::A => SloccTag::BiseparableA,
                FreeQubit::B => SloccTag::BiseparableB,
                FreeQubit::C => SloccTag::BiseparableC,
            },
            FamilyParams::W(_) => SloccTag::W,
            FamilyParams::Ghz(_) => SloccTag::Ghz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SloccTag {
    #[serde(rename = "A-B-C")]
    ProductABC,
    #[serde(rename = "A-BC")]
    BiseparableA,
    #[serde(rename = "B-AC")]
    BiseparableB,
    #[serde(rename = "C-AB")]
    BiseparableC,
    W,
    #[serde(rename = "GHZ")]
    Ghz,
    /// Some rank or the tangle sits too close to its threshold to decide.
    #[serde(rename = "ambiguous")]
    Ambiguous,
}

impl fmt::Display for SloccTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SloccTag::ProductABC => "A-B-C",
            SloccTag::BiseparableA => "A-BC",
            SloccTag::BiseparableB => "B-AC",
            SloccTag::BiseparableC => "C-AB",
            SloccTag::W => "W",
            SloccTag::Ghz => "GHZ",
            SloccTag::Ambiguous => "ambiguous",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SloccEvidence {
    /// Numerical ranks of ρ_A, ρ_B, ρ_C.
    pub ranks: [u8; 3],
    /// Smaller eigenvalue of each single-qubit reduction.
    pub min_eigenvalues: [f64; 3],
    pub tangle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SloccClass {
    pub tag: SloccTag,
    pub evidence: SloccEvidence,
}

/// `|000⟩`
pub fn make_product() -> PureState {
    PureState::basis(3, 0).expect("3 qubits is in range")
}

pub fn make_biseparable(p: &BiseparableParams) -> Result<PureState> {
    check_delta(p.delta)?;
    let (c, s) = (p.delta.cos(), p.delta.sin());
    let pair_mask = match p.free_qubit {
        FreeQubit::A => 0b011,
        FreeQubit::B => 0b101,
        FreeQubit::C => 0b110,
    };
    let mut amps = vec![c64(0.0, 0.0); 8];
    amps[0] = c64(c, 0.0);
    amps[pair_mask] = c64(s, 0.0);
    Ok(PureState::from_normalized(3, amps))
}

pub fn make_w(p: &WParams) -> Result<PureState> {
    check_w(p)?;
    let mut amps = vec![c64(0.0, 0.0); 8];
    amps[0b001] = c64(p.a.sqrt(), 0.0);
    amps[0b010] = c64(p.b.sqrt(), 0.0);
    amps[0b100] = c64(p.c.sqrt(), 0.0);
    amps[0b000] = c64(p.d().max(0.0).sqrt(), 0.0);
    Ok(PureState::from_normalized(3, amps))
}

/// φ is taken modulo 2π.
pub fn make_ghz(p: &GhzParams) -> Result<PureState> {
    let p = GhzParams { phi: wrap_phase(p.phi)?, ..*p };
    check_ghz_angles(p.delta, p.alpha, p.beta, p.gamma)?;
    let kappa = p.kappa();
    if !(kappa > 0.5 && kappa.is_finite()) {
        return Err(Error::Param(format!("normalization factor {kappa} outside (1/2, ∞)")));
    }
    let local = [p.alpha, p.beta, p.gamma].map(|x| [x.cos(), x.sin()]);
    let branch = c64(0.0, p.phi).exp() * p.delta.sin();
    let root_kappa = kappa.sqrt();
    let amps = (0..8usize)
        .map(|idx| {
            let product: f64 = (0..3).map(|q| local[q][(idx >> (2 - q)) & 1]).product();
            let head = if idx == 0 { p.delta.cos() } else { 0.0 };
            (branch * product + head) * root_kappa
        })
        .collect();
    Ok(PureState::from_normalized(3, amps))
}

fn wrap_phase(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::Param("φ must be finite".into()));
    }
    let w = phi.rem_euclid(TAU);
    Ok(if w == 0.0 { TAU } else { w })
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::Param(format!("δ = {delta} outside (0, π/4]")))
    }
}

pub(crate) fn check_w(p: &WParams) -> Result<()> {
    if !(p.a > 0.0 && p.b > 0.0 && p.c > 0.0) {
        return Err(Error::Param(format!("W weights must be positive, got ({}, {}, {})", p.a, p.b, p.c)));
    }
    if p.d() < 0.0 {
        return Err(Error::Param(format!("W weights sum to {} > 1", p.a + p.b + p.c)));
    }
    Ok(())
}

pub(crate) fn check_ghz_angles(delta: f64, alpha: f64, beta: f64, gamma: f64) -> Result<()> {
    check_delta(delta)?;
    for (name, x) in [("α", alpha), ("β", beta), ("γ", gamma)] {
        if !(x > 0.0 && x <= FRAC_PI_2) {
            return Err(Error::Param(format!("{name} = {x} outside (0, π/2]")));
        }
    }
    Ok(())
}

/// Three-tangle `4|d₁ − 2d₂ + 4d₃|` from the Cayley hyperdeterminant of the
/// amplitude tensor.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    if state.n_qubits() != 3 {
        return Err(Error::Dimension("the 3-tangle is defined for three qubits".into()));
    }
    let a = state.amplitudes();
    let sq = |x: Complex64| x * x;
    let d1 = sq(a[0]) * sq(a[7]) + sq(a[1]) * sq(a[6]) + sq(a[2]) * sq(a[5]) + sq(a[4]) * sq(a[3]);
    let d2 = a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1];
    let d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
    Ok(4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm())
}

/// Assigns a three-qubit pure state to its SLOCC class.
///
/// All single-qubit ranks 1 gives the product class; exactly one rank 1
/// gives the matching biseparable class; all ranks 2 splits GHZ from W by
/// comparing the 3-tangle with `tangle_tol`. Values within a factor of 10
/// of either threshold yield [`SloccTag::Ambiguous`].
pub fn classify(state: &PureState, tangle_tol: f64) -> Result<SloccClass> {
    if state.n_qubits() != 3 {
        return Err(Error::Dimension(format!("SLOCC classification needs three qubits, got {}", state.n_qubits())));
    }
    let rho = state.density();
    let mut min_eigenvalues = [0.0; 3];
    for (q, slot) in min_eigenvalues.iter_mut().enumerate() {
        let r = rho.partial_trace(&[q])?;
        let m: [Complex64; 4] = r.entries().try_into().expect("2x2");
        *slot = hermitian2_eigenvalues(&m)[0].max(0.0);
    }
    let ranks = min_eigenvalues.map(|l| if l > TOL_RANK { 2u8 } else { 1 });
    let tangle = three_tangle(state)?;
    let evidence = SloccEvidence { ranks, min_eigenvalues, tangle };

    let near = |x: f64, thr: f64| x >= thr / AMBIGUITY_FACTOR && x <= thr * AMBIGUITY_FACTOR;
    let rank_ambiguous = min_eigenvalues.iter().any(|&l| near(l, TOL_RANK));
    let tag = if rank_ambiguous {
        SloccTag::Ambiguous
    } else {
        match ranks {
            [1, 1, 1] => SloccTag::ProductABC,
            [1, 2, 2] => SloccTag::BiseparableA,
            [2, 1, 2] => SloccTag::BiseparableB,
            [2, 2, 1] => SloccTag::BiseparableC,
            [2, 2, 2] if near(tangle, tangle_tol) => SloccTag::Ambiguous,
            [2, 2, 2] if tangle > tangle_tol => SloccTag::Ghz,
            [2, 2, 2] => SloccTag::W,
            // Two rank-one marginals force the third; only rounding gets here.
            _ => SloccTag::Ambiguous,
        }
    };
    Ok(SloccClass { tag, evidence })
}
