use num_complex::Complex64;

use super::{qubit_bit, qubit_mask, DensityMatrix, Mat2, PauliString};
use crate::error::{Error, Result};
use crate::tolerances::TOL_NORM;

pub const MAX_QUBITS: usize = 6;

/// Normalized amplitude vector of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
    renormalized: bool,
}

/// Builds a state from raw amplitudes, dividing by the norm.
pub fn pure_state(n: usize, amplitudes: Vec<Complex64>) -> Result<PureState> {
    PureState::new(n, amplitudes)
}

impl PureState {
    pub fn new(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n)?;
        if amps.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "{} amplitudes supplied for {} qubits (expected {})",
                amps.len(),
                n,
                1usize << n
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Numerical("non-finite amplitude".into()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DegenerateInput("zero amplitude vector".into()));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { n, amps, renormalized: (norm - 1.0).abs() > TOL_NORM })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubit_count(n)?;
        if index >= 1 << n {
            return Err(Error::Dimension(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps, renormalized: false })
    }

    /// Wraps amplitudes the caller guarantees are already normalized.
    pub(crate) fn from_normalized(n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps, renormalized: false }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Whether construction had to rescale the input by more than `TOL_NORM`.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `⟨ψ|P|ψ⟩`, evaluated directly on the amplitude vector.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.len() != self.n {
            return Err(Error::Dimension(format!("Pauli string of length {} applied to {} qubits", p.len(), self.n)));
        }
        let action = p.action();
        let value: Complex64 =
            self.amps.iter().enumerate().map(|(k, a)| self.amps[k ^ action.flip].conj() * action.phase(k) * a).sum();
        super::pauli::real_part_checked(value)
    }

    /// Relabels qubits: qubit `q` of the result is qubit `perm[q]` of `self`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        check_labels(self.n, perm)?;
        if perm.len() != self.n {
            return Err(Error::Dimension("permutation must list every qubit".into()));
        }
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (old, a) in self.amps.iter().enumerate() {
            let new = (0..n).fold(0, |acc, q| acc | (qubit_bit(old, n, perm[q]) * qubit_mask(n, q)));
            out[new] = *a;
        }
        Ok(Self::from_normalized(n, out))
    }

    /// Applies the single-qubit unitary `u` to qubit `q`.
    pub fn apply_local(&self, q: usize, u: &Mat2) -> Result<Self> {
        check_labels(self.n, &[q])?;
        let mask = qubit_mask(self.n, q);
        let mut out = self.amps.clone();
        for i0 in (0..self.dim()).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            out[i0] = u[0][0] * a0 + u[0][1] * a1;
            out[i1] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(Self::from_normalized(self.n, out))
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        check_qubit_count(self.n + other.n)?;
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        Ok(Self::from_normalized(self.n + other.n, amps))
    }
}

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension(format!("qubit count {n} outside 1..={MAX_QUBITS}")))
    }
}

/// Rejects out-of-range or repeated qubit labels.
pub(crate) fn check_labels(n: usize, labels: &[usize]) -> Result<()> {
    let mut seen = 0usize;
    for &q in labels {
        if q >= n {
            return Err(Error::Dimension(format!("qubit label {q} out of range for {n} qubits")));
        }
        if seen & (1 << q) != 0 {
            return Err(Error::Dimension(format!("qubit label {q} repeated")));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// `0 -> 'A'`, `1 -> 'B'`, ...
pub fn label_name(q: usize) -> char {
    (b'A' + q as u8) as char
}

/// Parses `A`..`F` (case-insensitive) or a decimal index.
pub fn label_index(s: &str) -> Option<usize> {
    let s = s.trim();
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_alphabetic() => {
            let q = c.to_ascii_uppercase() as usize - 'A' as usize;
            (q < MAX_QUBITS).then_some(q)
        }
        _ => s.parse().ok().filter(|&q| q < MAX_QUBITS),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::c64;

    #[test]
    fn basis_vector_is_unit() {
        let s = pure_state(3, {
            let mut v = vec![c64(0.0, 0.0); 8];
            v[0] = c64(1.0, 0.0);
            v
        })
        .unwrap();
        assert_eq!(s.amplitudes()[0], c64(1.0, 0.0));
        assert!(!s.renormalized());
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalizes_bell_input() {
        let s = pure_state(2, vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[3].re - h).abs() < 1e-15);
        assert!(s.renormalized());
    }

    #[test]
    fn zero_vector_is_degenerate() {
        let err = pure_state(1, vec![c64(0.0, 0.0); 2]).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)));
    }

    #[test]
    fn length_mismatch() {
        let err = pure_state(2, vec![c64(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
        assert!(matches!(pure_state(7, vec![c64(1.0, 0.0); 128]), Err(Error::Dimension(_))));
    }

    #[test]
    fn msb_ordering() {
        // |011⟩: A = 0, B = 1, C = 1
        let s = PureState::basis(3, 0b011).unwrap();
        let z = |q: usize| {
            let mut p = vec![crate::qcore::Pauli::I; 3];
            p[q] = crate::qcore::Pauli::Z;
            s.expectation(&PauliString::new(p)).unwrap()
        };
        assert_eq!((z(0), z(1), z(2)), (1.0, -1.0, -1.0));
    }

    #[test]
    fn permutation_moves_excitation() {
        let s = PureState::basis(3, 0b001).unwrap();
        // new A <- old C
        let p = s.permute_qubits(&[2, 1, 0]).unwrap();
        assert_eq!(p.amplitudes()[0b100], c64(1.0, 0.0));
        assert!(s.permute_qubits(&[0, 0, 1]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(label_name(0), 'A');
        assert_eq!(label_name(3), 'D');
        assert_eq!(label_index("c"), Some(2));
        assert_eq!(label_index("4"), Some(4));
        assert_eq!(label_index("Z"), None);
    }
}
