use serde::{Deserialize, Serialize};

use super::{c64, DensityMatrix, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::linalg::{mat3_mul, mat3_vec, transpose3, Mat3, Vec3};

/// Real 3×3 matrix of Pauli-Pauli expectations `m_ij = tr(ρ σ_i ⊗ σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CorrelationMatrix(pub Mat3);

impl CorrelationMatrix {
    pub fn zero() -> Self {
        Self([[0.0; 3]; 3])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        Self(m)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self(transpose3(&self.0))
    }

    /// `MᵀM`
    pub fn gram(&self) -> Mat3 {
        mat3_mul(&transpose3(&self.0), &self.0)
    }

    /// `tr(MᵀM)`, the squared Frobenius norm.
    pub fn frobenius_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum()
    }

    /// `M x`
    pub fn apply(&self, x: &Vec3) -> Vec3 {
        mat3_vec(&self.0, x)
    }

    /// `Mᵀ x`
    pub fn apply_transpose(&self, x: &Vec3) -> Vec3 {
        mat3_vec(&transpose3(&self.0), x)
    }

    /// `O₁ M O₂ᵀ`
    pub fn rotated(&self, left: &Mat3, right: &Mat3) -> Self {
        Self(mat3_mul(&mat3_mul(left, &self.0), &transpose3(right)))
    }
}

/// Local Bloch vectors and correlation matrix of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochData {
    pub r: Vec3,
    pub s: Vec3,
    pub m: CorrelationMatrix,
}

/// `ρ = ¼(I⊗I + Σ r_i σ_i⊗I + Σ s_j I⊗σ_j + Σ m_ij σ_i⊗σ_j)`
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochData> {
    if rho.n_qubits() != 2 {
        return Err(Error::Dimension(format!(
            "Bloch decomposition needs a 2-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    let mut r = [0.0; 3];
    let mut s = [0.0; 3];
    let mut m = [[0.0; 3]; 3];
    for (i, &pi) in Pauli::XYZ.iter().enumerate() {
        r[i] = rho.expectation(&PauliString::new(vec![pi, Pauli::I]))?;
        s[i] = rho.expectation(&PauliString::new(vec![Pauli::I, pi]))?;
        for (j, &pj) in Pauli::XYZ.iter().enumerate() {
            m[i][j] = rho.expectation(&PauliString::new(vec![pi, pj]))?;
        }
    }
    Ok(BlochData { r, s, m: CorrelationMatrix(m) })
}

impl BlochData {
    /// Rebuilds the 4×4 operator from its Bloch coefficients. No validation.
    pub fn reconstruct(&self) -> DensityMatrix {
        let mut terms: Vec<(f64, Pauli, Pauli)> = vec![(1.0, Pauli::I, Pauli::I)];
        for (i, &pi) in Pauli::XYZ.iter().enumerate() {
            terms.push((self.r[i], pi, Pauli::I));
            terms.push((self.s[i], Pauli::I, pi));
            for (j, &pj) in Pauli::XYZ.iter().enumerate() {
                terms.push((self.m.0[i][j], pi, pj));
            }
        }
        let mut data = vec![c64(0.0, 0.0); 16];
        for (w, a, b) in terms {
            let (ma, mb) = (a.matrix(), b.matrix());
            for row in 0..4 {
                for col in 0..4 {
                    data[row * 4 + col] += ma[row >> 1][col >> 1] * mb[row & 1][col & 1] * (0.25 * w);
                }
            }
        }
        DensityMatrix::from_raw(2, data)
    }
}
