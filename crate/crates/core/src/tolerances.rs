//! Every numerical threshold used by the library, in one place.
//!
//! | Constant        | Value  | Used for                                         |
//! |-----------------|--------|--------------------------------------------------|
//! | `TOL_NORM`      | 1e-10  | unit norm of states and trace of density matrices |
//! | `TOL_HERM`      | 1e-12  | elementwise Hermiticity                           |
//! | `TOL_MATCH`     | 1e-8   | closed form vs numeric pipeline                   |
//! | `TOL_RANK`      | 1e-8   | numerical rank of single-qubit reductions         |
//! | `TOL_TANGLE`    | 1e-9   | default 3-tangle threshold (GHZ vs W)             |
//! | `TOL_IMAG`      | 1e-10  | imaginary residue of Pauli expectations           |
//! | `TOL_PSD`       | 1e-10  | most negative admissible eigenvalue               |
//! | `TOL_BOUND`     | 1e-9   | slack on analytic bounds (8, 12, 2√2, 3)          |
//! | `TOL_FILE_NORM` | 1e-6   | largest norm error a state file may carry         |

pub const TOL_NORM: f64 = 1e-10;
pub const TOL_HERM: f64 = 1e-12;
pub const TOL_MATCH: f64 = 1e-8;
pub const TOL_RANK: f64 = 1e-8;
pub const TOL_TANGLE: f64 = 1e-9;
pub const TOL_IMAG: f64 = 1e-10;
pub const TOL_PSD: f64 = 1e-10;
pub const TOL_BOUND: f64 = 1e-9;
pub const TOL_FILE_NORM: f64 = 1e-6;

/// A value within this factor of a classification threshold is reported as ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 10.0;
