//! Multi-qubit pure states, density operators, partial traces, Pauli
//! expectations and the two-qubit Bloch decomposition.
//!
//! Basis ordering: qubit 0 (label `A`) is the most significant bit of a
//! basis index, qubit `n - 1` the least significant. For three qubits the
//! index `0b011` is `|0⟩_A |1⟩_B |1⟩_C`.

mod bloch;
mod density;
pub mod io;
pub(crate) mod pauli;
pub mod random;
pub(crate) mod state;

pub use bloch::{bloch_decompose, BlochData, CorrelationMatrix};
pub use density::{partial_trace, DensityMatrix};
pub use pauli::{Pauli, PauliString};
pub use random::{haar_random_state, sample_seed};
pub use state::{label_index, label_name, pure_state, PureState, MAX_QUBITS};

use num_complex::Complex64;

/// 2×2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Bit of qubit `q` inside basis index `index` of an `n`-qubit register.
#[inline]
pub(crate) fn qubit_bit(index: usize, n: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}
