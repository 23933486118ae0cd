use num_complex::Complex64;

use super::state::{check_labels, check_qubit_count};
use super::{c64, qubit_bit, qubit_mask, Mat2, PauliString, PureState};
use crate::error::{Error, Result};
use crate::linalg::is_psd_within;
use crate::tolerances::{TOL_HERM, TOL_NORM, TOL_PSD};

/// Density operator on `n` qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n)?;
        let dim = 1usize << n;
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!("{} entries supplied for a {dim}x{dim} matrix", entries.len())));
        }
        let rho = Self { n, data: entries };
        rho.check_invariants()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>) -> Self {
        Self { n, data }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        let data = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
        Self { n: state.n_qubits(), data }
    }

    /// Convex combination `Σ w_i |ψ_i⟩⟨ψ_i|` with weights rescaled to sum to one.
    pub fn mixture(components: &[(f64, &PureState)]) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::DegenerateInput("empty mixture".into()));
        };
        let n = first.n_qubits();
        if components.iter().any(|(_, s)| s.n_qubits() != n) {
            return Err(Error::Dimension("mixture components differ in qubit count".into()));
        }
        if components.iter().any(|(w, _)| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::Param("mixture weights must be finite and nonnegative".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if total <= 0.0 {
            return Err(Error::DegenerateInput("mixture weights sum to zero".into()));
        }
        let dim = 1usize << n;
        let mut data = vec![c64(0.0, 0.0); dim * dim];
        for (w, s) in components {
            let a = s.amplitudes();
            let w = w / total;
            for i in 0..dim {
                for j in 0..dim {
                    data[i * dim + j] += a[i] * a[j].conj() * w;
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let dim = 1usize << n;
        let mut data = vec![c64(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c64(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn check_invariants(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let d = self.get(i, j) - self.get(j, i).conj();
                if d.norm() > TOL_HERM {
                    return Err(Error::Numerical(format!("not Hermitian at ({i},{j}): deviation {:e}", d.norm())));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TOL_NORM || tr.im.abs() > TOL_NORM {
            return Err(Error::Numerical(format!("trace {tr} differs from 1")));
        }
        if !is_psd_within(&self.data, dim, TOL_PSD) {
            return Err(Error::Numerical("eigenvalue below -1e-10".into()));
        }
        Ok(())
    }

    /// Reduced state on the qubits in `keep`, ordered as listed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }

    /// `Re tr(ρ P)`; fails when the imaginary part is not negligible.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::Dimension(format!("Pauli string of length {} applied to {} qubits", p.len(), self.n)));
        }
        let act = p.action();
        let value: Complex64 = (0..self.dim()).map(|k| self.get(k, k ^ act.flip) * act.phase(k)).sum();
        super::pauli::real_part_checked(value)
    }

    /// `U ρ U†` with `u` acting on qubit `q`.
    pub fn conjugate_local(&self, q: usize, u: &Mat2) -> Result<Self> {
        check_labels(self.n, &[q])?;
        let dim = self.dim();
        let mask = qubit_mask(self.n, q);
        let mut left = self.data.clone();
        // rows
        for col in 0..dim {
            for r0 in (0..dim).filter(|r| r & mask == 0) {
                let r1 = r0 | mask;
                let (x0, x1) = (self.data[r0 * dim + col], self.data[r1 * dim + col]);
                left[r0 * dim + col] = u[0][0] * x0 + u[0][1] * x1;
                left[r1 * dim + col] = u[1][0] * x0 + u[1][1] * x1;
            }
        }
        // columns, with U†
        let mut out = left.clone();
        for row in 0..dim {
            for c0 in (0..dim).filter(|c| c & mask == 0) {
                let c1 = c0 | mask;
                let (x0, x1) = (left[row * dim + c0], left[row * dim + c1]);
                out[row * dim + c0] = x0 * u[0][0].conj() + x1 * u[0][1].conj();
                out[row * dim + c1] = x0 * u[1][0].conj() + x1 * u[1][1].conj();
            }
        }
        Ok(Self { n: self.n, data: out })
    }
}

/// Traces out every qubit not listed in `keep`. The result orders its qubits
/// as in `keep`. Implemented with basis-index arithmetic.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(Error::Dimension("partial trace must keep at least one qubit".into()));
    }
    check_labels(n, keep)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();

    // Full-register index contributed by each reduced / environment index.
    let scatter = |qubits: &[usize], local: usize| -> usize {
        let m = qubits.len();
        qubits.iter().enumerate().fold(0, |acc, (pos, &q)| acc | (qubit_bit(local, m, pos) * qubit_mask(n, q)))
    };
    let kept_idx: Vec<usize> = (0..1usize << k).map(|r| scatter(keep, r)).collect();
    let env_idx: Vec<usize> =
        if traced.is_empty() { vec![0] } else { (0..1usize << traced.len()).map(|t| scatter(&traced, t)).collect() };

    let rdim = 1usize << k;
    let mut data = vec![c64(0.0, 0.0); rdim * rdim];
    for (i, &fi) in kept_idx.iter().enumerate() {
        for (j, &fj) in kept_idx.iter().enumerate() {
            data[i * rdim + j] = env_idx.iter().map(|&e| rho.get(fi | e, fj | e)).sum();
        }
    }
    Ok(DensityMatrix::from_raw(k, data))
}
