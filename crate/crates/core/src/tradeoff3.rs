//! Pairwise CHSH trade-off sums for three-qubit states.
//!
//! The numeric pipeline (partial trace, Bloch decomposition, eigenvalues of
//! `MᵀM`) is the reference. The closed forms per SLOCC family are evaluated
//! as printed and compared against it.
//!
//! Pair labels: the closed forms below return their per-pair terms under
//! this crate's A-most-significant ordering. For the W and GHZ families the
//! printed expression headed "AB" describes the pair (B, C) in this
//! ordering and vice versa; the "AC" expression is unaffected.

use serde::{Deserialize, Serialize};

use crate::chsh::max_chsh_squared;
use crate::error::{Error, Result};
use crate::qcore::{bloch_decompose, DensityMatrix, PureState};
use crate::slocc::{
    check_delta, check_ghz_angles, check_w, classify, BiseparableParams, FamilyParams, FreeQubit, SloccClass, WParams,
};
use crate::tolerances::{TOL_MATCH, TOL_TANGLE};

/// The three qubit pairs of a three-qubit register, in report order.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Squared maximal CHSH values of ρ_AB, ρ_AC, ρ_BC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSquares {
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
}

impl PairSquares {
    pub fn total(&self) -> f64 {
        self.s_ab + self.s_ac + self.s_bc
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s_ab, self.s_ac, self.s_bc]
    }

    fn from_array([s_ab, s_ac, s_bc]: [f64; 3]) -> Self {
        Self { s_ab, s_ac, s_bc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffReport {
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    pub total: f64,
    pub closed_form_total: Option<f64>,
    pub discrepancy: Option<f64>,
    /// Set when the closed form misses the numeric total by more than `TOL_MATCH`.
    pub discrepancy_flag: bool,
    pub class: SloccClass,
}

fn require_three(n: usize) -> Result<()> {
    if n == 3 {
        Ok(())
    } else {
        Err(Error::Dimension(format!("expected a 3-qubit state, got {n} qubits")))
    }
}

/// `⟨CHSH⟩²_max` of each two-qubit reduction, fully numeric.
pub fn pairwise_chsh_squares(state: &PureState) -> Result<PairSquares> {
    require_three(state.n_qubits())?;
    pairwise_chsh_squares_mixed(&state.density())
}

/// Same as [`pairwise_chsh_squares`] for an arbitrary three-qubit density matrix.
pub fn pairwise_chsh_squares_mixed(rho: &DensityMatrix) -> Result<PairSquares> {
    require_three(rho.n_qubits())?;
    let mut out = [0.0; 3];
    for (slot, (x, y)) in out.iter_mut().zip(PAIRS) {
        *slot = max_chsh_squared(&rho.partial_trace(&[x, y])?)?;
    }
    Ok(PairSquares::from_array(out))
}

pub fn tradeoff_sum(state: &PureState) -> Result<TradeoffReport> {
    build_report(state, None)
}

/// Generates the family's state and attaches the matching closed form.
pub fn tradeoff_sum_family(family: &FamilyParams) -> Result<TradeoffReport> {
    let state = family.state()?;
    let closed = match family {
        FamilyParams::Product => Some(12.0),
        FamilyParams::Biseparable(p) => Some(closed_form_biseparable_for(p)?.total),
        FamilyParams::W(p) => Some(closed_form_w(p.a, p.b, p.c)?.pairs.total),
        FamilyParams::Ghz(p) => Some(closed_form_ghz(p.delta, p.alpha, p.beta, p.gamma)?.pairs.total),
    };
    build_report(&state, closed)
}

fn build_report(state: &PureState, closed_form_total: Option<f64>) -> Result<TradeoffReport> {
    let pairs = pairwise_chsh_squares(state)?;
    let total = pairs.total();
    let discrepancy = closed_form_total.map(|c| (total - c).abs());
    Ok(TradeoffReport {
        s_ab: pairs.s_ab,
        s_ac: pairs.s_ac,
        s_bc: pairs.s_bc,
        total,
        closed_form_total,
        discrepancy,
        discrepancy_flag: discrepancy.is_some_and(|d| d > TOL_MATCH),
        class: classify(state, TOL_TANGLE)?,
    })
}

/// Closed-form pair values and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    pub total: f64,
}

/// Biseparable family with the free qubit A:
/// `s_ab = s_ac = 4(C_δ² − S_δ²)²`, `s_bc = 16 C_δ² S_δ² + 4`, total `4 cos²2δ + 8`.
pub fn closed_form_biseparable(delta: f64) -> Result<ClosedForm> {
    check_delta(delta)?;
    let (c2, s2) = (delta.cos().powi(2), delta.sin().powi(2));
    let side = 4.0 * (c2 - s2).powi(2);
    Ok(ClosedForm {
        s_ab: side,
        s_ac: side,
        s_bc: 16.0 * c2 * s2 + 4.0,
        total: 4.0 * (2.0 * delta).cos().powi(2) + 8.0,
    })
}

/// [`closed_form_biseparable`] with the pair values permuted for the free qubit.
pub fn closed_form_biseparable_for(p: &BiseparableParams) -> Result<ClosedForm> {
    let base = closed_form_biseparable(p.delta)?;
    let (side, entangled) = (base.s_ab, base.s_bc);
    let [s_ab, s_ac, s_bc] = match p.free_qubit {
        FreeQubit::A => [side, side, entangled],
        FreeQubit::B => [side, entangled, side],
        FreeQubit::C => [entangled, side, side],
    };
    Ok(ClosedForm { s_ab, s_ac, s_bc, total: base.total })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WClosedForm {
    pub pairs: ClosedForm,
    pub v: f64,
}

/// W family: per-pair `2[1 + 12xy − 4xz − 4yz + √V]` and total
/// `2[3(1+√V) + 4(ab+ac+bc)]` with
/// `V = [(√a+√b+√c)²+d][(√a+√b−√c)²+d][(√a−√b+√c)²+d][(−√a+√b+√c)²+d]`.
pub fn closed_form_w(a: f64, b: f64, c: f64) -> Result<WClosedForm> {
    let p = WParams { a, b, c };
    check_w(&p)?;
    let d = p.d().max(0.0);
    let (ra, rb, rc) = (a.sqrt(), b.sqrt(), c.sqrt());
    let v = ((ra + rb + rc).powi(2) + d)
        * ((ra + rb - rc).powi(2) + d)
        * ((ra - rb + rc).powi(2) + d)
        * ((-ra + rb + rc).powi(2) + d);
    let root = v.sqrt();
    // Printed "AB" term (12ab) belongs to qubits (B, C) here: a sits on C, c on A.
    let printed_ab = 2.0 * (1.0 + 12.0 * a * b - 4.0 * a * c - 4.0 * b * c + root);
    let printed_ac = 2.0 * (1.0 + 12.0 * a * c - 4.0 * a * b - 4.0 * b * c + root);
    let printed_bc = 2.0 * (1.0 + 12.0 * b * c - 4.0 * a * b - 4.0 * a * c + root);
    Ok(WClosedForm {
        pairs: ClosedForm {
            s_ab: printed_bc,
            s_ac: printed_ac,
            s_bc: printed_ab,
            total: 2.0 * (3.0 * (1.0 + root) + 4.0 * (a * b + a * c + b * c)),
        },
        v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzClosedForm {
    pub pairs: ClosedForm,
    /// `f(a,b,c) = 2ab + 2ac + 2bc − a − b − c − 3abc`, expected in `[−1, 0]`.
    pub f: f64,
}

/// `f(a, b, c) = 2ab + 2ac + 2bc − a − b − c − 3abc`
pub fn ghz_f(a: f64, b: f64, c: f64) -> f64 {
    2.0 * a * b + 2.0 * a * c + 2.0 * b * c - a - b - c - 3.0 * a * b * c
}

/// GHZ family closed forms. They carry no phase argument; they agree with
/// the numeric pipeline only on part of the parameter space (see the
/// verification suite).
pub fn closed_form_ghz(delta: f64, alpha: f64, beta: f64, gamma: f64) -> Result<GhzClosedForm> {
    check_ghz_angles(delta, alpha, beta, gamma)?;
    let (a, b, c) = (alpha.cos().powi(2), beta.cos().powi(2), gamma.cos().powi(2));
    Ok(ghz_closed_form_from_squares(delta, a, b, c))
}

/// Closed forms in terms of `a = C_α²`, `b = C_β²`, `c = C_γ²` without range checks.
pub fn ghz_closed_form_from_squares(delta: f64, a: f64, b: f64, c: f64) -> GhzClosedForm {
    let s = (2.0 * delta).sin().powi(2);
    let abc = a * b * c;
    let den = (1.0 + abc * s).powi(2);
    let term = |x: f64, y: f64, z: f64| 4.0 * (1.0 + ((x - y - z + 2.0 * y * z) * s - abc * s) / den);
    // Printed "AB" term is led by C_α², i.e. the pair not containing A.
    let printed_ab = term(a, b, c);
    let printed_ac = term(b, a, c);
    let printed_bc = term(c, a, b);
    let f = ghz_f(a, b, c);
    GhzClosedForm {
        pairs: ClosedForm { s_ab: printed_bc, s_ac: printed_ac, s_bc: printed_ab, total: 12.0 + 4.0 * f * s / den },
        f,
    }
}

/// `tr(M_ABᵀM_AB) + tr(M_ACᵀM_AC) + tr(M_BCᵀM_BC)`; equals 3 on pure states.
pub fn trace_identity(state: &PureState) -> Result<f64> {
    require_three(state.n_qubits())?;
    let rho = state.density();
    PAIRS
        .iter()
        .try_fold(0.0, |acc, &(x, y)| Ok(acc + bloch_decompose(&rho.partial_trace(&[x, y])?)?.m.frobenius_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slocc::{make_biseparable, make_product, make_w, GhzParams};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn product_state_squares() {
        let p = pairwise_chsh_squares(&make_product()).unwrap();
        assert_eq!(p.as_array(), [4.0, 4.0, 4.0]);
        let r = tradeoff_sum(&make_product()).unwrap();
        assert_eq!(r.total, 12.0);
        assert!(r.closed_form_total.is_none());
    }

    #[test]
    fn maximally_entangled_pair() {
        let s = make_biseparable(&BiseparableParams { free_qubit: FreeQubit::A, delta: FRAC_PI_4 }).unwrap();
        let p = pairwise_chsh_squares(&s).unwrap();
        assert!(p.s_ab.abs() < 1e-14 && p.s_ac.abs() < 1e-14);
        assert!((p.s_bc - 8.0).abs() < 1e-14);
        assert!((p.total() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn standard_ghz_pairs() {
        let g = FamilyParams::Ghz(GhzParams {
            delta: FRAC_PI_4,
            alpha: FRAC_PI_2,
            beta: FRAC_PI_2,
            gamma: FRAC_PI_2,
            phi: 2.0 * std::f64::consts::PI,
        });
        let p = pairwise_chsh_squares(&g.state().unwrap()).unwrap();
        for v in p.as_array() {
            assert!((v - 4.0).abs() < 1e-14);
        }
        let r = tradeoff_sum_family(&g).unwrap();
        assert!(r.discrepancy.unwrap() < 1e-12);
        assert!(!r.discrepancy_flag);
    }

    #[test]
    fn biseparable_closed_form_values() {
        assert!((closed_form_biseparable(FRAC_PI_4).unwrap().total - 8.0).abs() < 1e-14);
        assert!((closed_form_biseparable(FRAC_PI_6).unwrap().total - 9.0).abs() < 1e-14);
        assert!(closed_form_biseparable(0.0).is_err());
        for k in 1..=40 {
            let t = closed_form_biseparable(FRAC_PI_4 * k as f64 / 40.0).unwrap().total;
            assert!((8.0..12.0).contains(&t));
        }
    }

    #[test]
    fn biseparable_permutations_match_numeric_pairs() {
        for free_qubit in [FreeQubit::A, FreeQubit::B, FreeQubit::C] {
            let p = BiseparableParams { free_qubit, delta: 0.37 };
            let cf = closed_form_biseparable_for(&p).unwrap();
            let num = pairwise_chsh_squares(&make_biseparable(&p).unwrap()).unwrap();
            for (x, y) in [cf.s_ab, cf.s_ac, cf.s_bc].iter().zip(num.as_array()) {
                assert!((x - y).abs() < 1e-12, "{free_qubit:?}");
            }
        }
    }

    #[test]
    fn w_symmetric_point() {
        let third = 1.0 / 3.0;
        let cf = closed_form_w(third, third, third).unwrap();
        assert!((cf.v - 1.0 / 9.0).abs() < 1e-14);
        for s in [cf.pairs.s_ab, cf.pairs.s_ac, cf.pairs.s_bc] {
            assert!((s - 32.0 / 9.0).abs() < 1e-13);
        }
        assert!((cf.pairs.total - 32.0 / 3.0).abs() < 1e-13);
        let num = tradeoff_sum(&make_w(&WParams { a: third, b: third, c: third }).unwrap()).unwrap();
        assert!((num.total - 32.0 / 3.0).abs() < TOL_MATCH);
    }

    #[test]
    fn w_limits() {
        let near8 = closed_form_w(0.5 - 1e-7, 0.5 - 1e-7, 1e-7).unwrap().pairs.total;
        assert!((near8 - 8.0).abs() < 1e-3, "{near8}");
        let near12 = closed_form_w(1e-8, 1e-8, 1e-8).unwrap().pairs.total;
        assert!((near12 - 12.0).abs() < 1e-3, "{near12}");
    }

    #[test]
    fn w_per_pair_terms_follow_qubit_labels() {
        let (a, b, c) = (0.1, 0.25, 0.45);
        let cf = closed_form_w(a, b, c).unwrap().pairs;
        let num = pairwise_chsh_squares(&make_w(&WParams { a, b, c }).unwrap()).unwrap();
        assert!((cf.s_ab - num.s_ab).abs() < 1e-10);
        assert!((cf.s_ac - num.s_ac).abs() < 1e-10);
        assert!((cf.s_bc - num.s_bc).abs() < 1e-10);
    }

    #[test]
    fn ghz_closed_form_corners() {
        let g = closed_form_ghz(0.3, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!(g.f.abs() < 1e-15);
        assert!((g.pairs.total - 12.0).abs() < 1e-14);
        let g = ghz_closed_form_from_squares(FRAC_PI_4, 1.0, 0.0, 0.0);
        assert_eq!(g.f, -1.0);
        assert!((g.pairs.total - 8.0).abs() < 1e-14);
        assert!(closed_form_ghz(0.3, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ghz_closed_form_exact_when_one_angle_is_right() {
        // With γ = π/2 the product C_αC_βC_γ vanishes and the printed form is exact.
        let (delta, alpha, beta, gamma) = (0.4, 0.3, 0.7, FRAC_PI_2);
        let cf = closed_form_ghz(delta, alpha, beta, gamma).unwrap().pairs;
        for phi in [0.5, FRAC_PI_2, 3.0] {
            let num =
                pairwise_chsh_squares(&crate::slocc::make_ghz(&GhzParams { delta, alpha, beta, gamma, phi }).unwrap())
                    .unwrap();
            assert!((cf.s_ab - num.s_ab).abs() < 1e-10);
            assert!((cf.s_ac - num.s_ac).abs() < 1e-10);
            assert!((cf.s_bc - num.s_bc).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_identity_examples() {
        assert!((trace_identity(&make_product()).unwrap() - 3.0).abs() < 1e-14);
        let s = make_biseparable(&BiseparableParams { free_qubit: FreeQubit::A, delta: 0.2 }).unwrap();
        assert!((trace_identity(&s).unwrap() - 3.0).abs() < 1e-13);
        let two = crate::qcore::PureState::basis(2, 0).unwrap();
        assert!(matches!(trace_identity(&two), Err(Error::Dimension(_))));
    }
}
