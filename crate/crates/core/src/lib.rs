//! Maximal CHSH violations of the pairwise reduced states of multi-qubit
//! pure states.
//!
//! * [`qcore`]: states, density matrices, partial traces, Bloch data.
//! * [`chsh`]: the eigenvalue formula `2√(τ₁+τ₂)` and an explicit
//!   measurement-settings optimizer that must agree with it.
//! * [`slocc`]: generators and a numerical classifier for the six SLOCC
//!   classes of three-qubit pure states.
//! * [`tradeoff3`]: the pairwise trade-off sum `Σ⟨CHSH⟩²` for three qubits,
//!   closed forms per class and the correlation-trace identity.
//! * [`conjecture4`]: pair correlation tensors of four (or more) qubit
//!   states and a search for states exceeding `Σ tr[T Tᵀ] ≤ 3`.
//! * [`cli`]: sweeps, verification suites and the file formats used by the
//!   command-line tool.

pub mod chsh;
pub mod cli;
pub mod conjecture4;
pub mod error;
pub mod linalg;
pub mod qcore;
pub mod slocc;
pub mod tolerances;
pub mod tradeoff3;

pub use error::{Error, Result};
