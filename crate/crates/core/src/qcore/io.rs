//! JSON state files: `{"n": 3, "amplitudes": [[re, im], ...]}` with `2^n`
//! entries in qubit-A-most-significant order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{c64, PureState, MAX_QUBITS};
use crate::tolerances::TOL_FILE_NORM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("malformed state file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
    #[error("state is not normalized: |norm - 1| = {0:e} exceeds 1e-6")]
    Normalization(f64),
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        Self { n: s.n_qubits(), amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect() }
    }
}

impl StateFile {
    /// Validates the record and renormalizes small deviations.
    pub fn into_state(self) -> Result<PureState, StateFileError> {
        if !(1..=MAX_QUBITS).contains(&self.n) {
            return Err(StateFileError::Field {
                field: "n",
                reason: format!("{} is outside 1..={MAX_QUBITS}", self.n),
            });
        }
        let expected = 1usize << self.n;
        if self.amplitudes.len() != expected {
            return Err(StateFileError::Field {
                field: "amplitudes",
                reason: format!("expected {expected} entries for n={}, found {}", self.n, self.amplitudes.len()),
            });
        }
        if let Some(i) = self.amplitudes.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(StateFileError::Field { field: "amplitudes", reason: format!("entry {i} is not finite") });
        }
        let norm = self.amplitudes.iter().map(|[re, im]| re * re + im * im).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL_FILE_NORM {
            return Err(StateFileError::Normalization((norm - 1.0).abs()));
        }
        let amps = self.amplitudes.iter().map(|&[re, im]| c64(re, im)).collect();
        PureState::new(self.n, amps).map_err(|e| StateFileError::Field { field: "amplitudes", reason: e.to_string() })
    }
}

pub fn state_from_json(text: &str) -> Result<PureState, StateFileError> {
    serde_json::from_str::<StateFile>(text)?.into_state()
}

pub fn state_to_json(state: &PureState) -> String {
    serde_json::to_string(&StateFile::from(state)).expect("state serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_product_state() {
        let s = state_from_json(r#"{"n": 2, "amplitudes": [[1,0],[0,0],[0,0],[0,0]]}"#).unwrap();
        assert_eq!(s.n_qubits(), 2);
        assert_eq!(s.amplitudes()[0], c64(1.0, 0.0));
    }

    #[test]
    fn renormalizes_small_error() {
        let s = state_from_json(r#"{"n": 1, "amplitudes": [[1.0000005,0],[0,0]]}"#).unwrap();
        assert_eq!(s.amplitudes()[0], c64(1.0, 0.0));
    }

    #[test]
    fn rejects_unnormalized() {
        let err = state_from_json(r#"{"n": 1, "amplitudes": [[1.1,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(err, StateFileError::Normalization(_)));
        let err = state_from_json(r#"{"n": 1, "amplitudes": [[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(err, StateFileError::Normalization(_)));
    }

    #[test]
    fn names_offending_field() {
        let err = state_from_json(r#"{"n": 2, "amplitudes": [[1,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("amplitudes"), "{err}");
        let err = state_from_json(r#"{"n": 9, "amplitudes": []}"#).unwrap_err();
        assert!(err.to_string().contains("`n`"), "{err}");
        let err = state_from_json(r#"{"amplitudes": [[1,0],[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("`n`"), "{err}");
        assert!(matches!(state_from_json(r#"{"n": 1, "amplit"#), Err(StateFileError::Syntax(_))));
    }

    #[test]
    fn round_trip() {
        let s = crate::qcore::haar_random_state(3, 4).unwrap();
        let back = state_from_json(&state_to_json(&s)).unwrap();
        for (a, b) in s.amplitudes().iter().zip(back.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }
}
