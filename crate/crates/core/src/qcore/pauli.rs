use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{c64, qubit_mask, Mat2};
use crate::error::{Error, Result};
use crate::tolerances::TOL_IMAG;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// σ₁, σ₂, σ₃ in Bloch-index order.
    pub const XYZ: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Mat2 {
        let (o, l) = (c64(0.0, 0.0), c64(1.0, 0.0));
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, c64(0.0, -1.0)], [c64(0.0, 1.0), o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, one entry per qubit in label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self(ops)
    }

    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// `px` on qubit `x`, `py` on qubit `y`, identity elsewhere.
    pub fn pair(n: usize, x: usize, px: Pauli, y: usize, py: Pauli) -> Self {
        let mut ops = vec![Pauli::I; n];
        ops[x] = px;
        ops[y] = py;
        Self(ops)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    // P|k⟩ = phase(k) |k ^ flip⟩
    pub(crate) fn action(&self) -> PauliAction {
        let n = self.0.len();
        let mut flip = 0;
        let mut sign = 0;
        let mut y_count = 0;
        for (q, p) in self.0.iter().enumerate() {
            let m = qubit_mask(n, q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= m,
                Pauli::Y => {
                    flip |= m;
                    sign |= m;
                    y_count += 1;
                }
                Pauli::Z => sign |= m,
            }
        }
        let global = match y_count % 4 {
            0 => c64(1.0, 0.0),
            1 => c64(0.0, 1.0),
            2 => c64(-1.0, 0.0),
            _ => c64(0.0, -1.0),
        };
        PauliAction { flip, sign, global }
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Dimension(format!("unknown Pauli symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub flip: usize,
    sign: usize,
    global: Complex64,
}

impl PauliAction {
    #[inline]
    pub fn phase(&self, k: usize) -> Complex64 {
        if (k & self.sign).count_ones().is_multiple_of(2) {
            self.global
        } else {
            -self.global
        }
    }
}

pub(crate) fn real_part_checked(value: Complex64) -> Result<f64> {
    if value.im.abs() >= TOL_IMAG {
        return Err(Error::Numerical(format!(
            "Pauli expectation has imaginary residue {:e} (input not Hermitian?)",
            value.im
        )));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron_apply(ops: &[Pauli], k: usize) -> Vec<Complex64> {
        // Column k of the explicit Kronecker product.
        let n = ops.len();
        let mut col = vec![c64(1.0, 0.0)];
        for (q, p) in ops.iter().enumerate() {
            let bit = (k >> (n - 1 - q)) & 1;
            let m = p.matrix();
            col = col.iter().flat_map(|c| [c * m[0][bit], c * m[1][bit]]).collect();
        }
        col
    }

    #[test]
    fn action_matches_kronecker_product() {
        let strings = ["XYZ", "YYI", "IZX", "YXY", "III"];
        for s in strings {
            let p: PauliString = s.parse().unwrap();
            let act = p.action();
            for k in 0..8 {
                let col = kron_apply(p.ops(), k);
                for (j, v) in col.iter().enumerate() {
                    let expected = if j == k ^ act.flip { act.phase(k) } else { c64(0.0, 0.0) };
                    assert!((v - expected).norm() < 1e-15, "{s} column {k} row {j}");
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let p: PauliString = "ixYz".parse().unwrap();
        assert_eq!(p.to_string(), "IXYZ");
        assert!("XQ".parse::<PauliString>().is_err());
    }
}
