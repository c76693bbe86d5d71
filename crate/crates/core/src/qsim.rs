//! Small statevector simulator for one- and two-qubit circuits.
//!
//! The cipher's diffusion stage is a CNOT between a key qubit and a pixel
//! qubit followed by a computational-basis measurement. On basis-state
//! inputs that circuit is exactly classical XOR, which is what [`diffuse`]
//! computes; the simulator is kept so the equivalence can be checked gate by
//! gate.
//!
//! Qubit 0 is the most significant bit of the basis index, so `|10⟩` is
//! index 2 and the CNOT matrix below uses qubit 0 as control.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::chaos::KeyMatrix;
use crate::error::{Error, Result};
use crate::GrayImage;

pub const UNITARY_TOLERANCE: f64 = 1e-12;
pub const BASIS_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let dim = 1 << qubits;
        if index >= dim {
            return Err(Error::InvalidParameter {
                name: "index",
                reason: format!("basis index {index} out of range for {qubits} qubit(s)"),
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubits = match amplitudes.len() {
            2 => 1,
            4 => 2,
            n => {
                return Err(Error::InvalidParameter {
                    name: "amplitudes",
                    reason: format!("length {n} is not 2 or 4"),
                })
            }
        };
        let s = Self { qubits, amplitudes };
        if (s.norm() - 1.0).abs() > UNITARY_TOLERANCE {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: format!("norm {} is not 1", s.norm()),
            });
        }
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "qubits",
            reason: format!("{n} qubits unsupported (1 or 2 only)"),
        })
    }
}

/// A unitary on one or two qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    qubits: usize,
    matrix: Vec<Complex64>,
}

impl Gate {
    pub fn new(qubits: usize, matrix: Vec<Complex64>) -> Result<Self> {
        check_qubits(qubits)?;
        let dim = 1 << qubits;
        if matrix.len() != dim * dim {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("expected {} entries, got {}", dim * dim, matrix.len()),
            });
        }
        let g = Self { qubits, matrix };
        let dev = g.unitarity_error();
        if dev > UNITARY_TOLERANCE {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("not unitary (max |G G^† - I| = {dev:e})"),
            });
        }
        Ok(g)
    }

    fn real(qubits: usize, entries: &[f64]) -> Self {
        let matrix = entries.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::new(qubits, matrix).expect("built-in gates are unitary")
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::real(1, &[h, h, h, -h])
    }

    pub fn pauli_x() -> Self {
        Self::real(1, &[0.0, 1.0, 1.0, 0.0])
    }

    /// Controlled-NOT with the first target as control.
    pub fn cnot() -> Self {
        #[rustfmt::skip]
        let m = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ];
        Self::real(2, &m)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn matmul(&self, other: &Gate) -> Result<Gate> {
        if self.qubits != other.qubits {
            return Err(Error::InvalidParameter {
                name: "gate",
                reason: "cannot multiply gates of different sizes".into(),
            });
        }
        let d = self.dim();
        let mut m = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = (0..d).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
            }
        }
        Ok(Gate {
            qubits: self.qubits,
            matrix: m,
        })
    }

    /// Largest entry-wise deviation of `G G^†` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let v: Complex64 = (0..d)
                    .map(|k| self.entry(i, k) * self.entry(j, k).conj())
                    .sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    /// Largest entry-wise deviation from the identity matrix.
    pub fn identity_error(&self) -> f64 {
        let d = self.dim();
        (0..d * d)
            .map(|idx| {
                let target = if idx / d == idx % d { ONE } else { ZERO };
                (self.matrix[idx] - target).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[inline]
fn qubit_bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// Applies `g` to the qubits listed in `targets` (first target is the gate's
/// most significant qubit).
pub fn apply_gate(state: &StateVector, g: &Gate, targets: &[usize]) -> Result<StateVector> {
    let n = state.qubits;
    if targets.len() != g.qubits {
        return Err(Error::DimensionMismatch {
            expected: (g.qubits, 1),
            actual: (targets.len(), 1),
        });
    }
    if targets.iter().any(|&t| t >= n) || (targets.len() == 2 && targets[0] == targets[1]) {
        return Err(Error::InvalidParameter {
            name: "targets",
            reason: format!("{targets:?} invalid for a {n}-qubit state"),
        });
    }
    let sub = |i: usize| {
        targets
            .iter()
            .fold(0usize, |acc, &t| (acc << 1) | qubit_bit(i, t, n))
    };
    let target_mask: usize = targets.iter().map(|&t| 1 << (n - 1 - t)).sum();

    let dim = 1 << n;
    let mut out = vec![ZERO; dim];
    for (i, slot) in out.iter_mut().enumerate() {
        let row = sub(i);
        *slot = (0..dim)
            .filter(|&j| j & !target_mask == i & !target_mask)
            .map(|j| g.entry(row, sub(j)) * state.amplitudes[j])
            .sum();
    }
    Ok(StateVector {
        qubits: n,
        amplitudes: out,
    })
}

/// Index of the basis state the register is in, if it is in one.
pub fn measure_deterministic(state: &StateVector) -> Result<usize> {
    let (index, max_magnitude) = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.norm()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if max_magnitude >= 1.0 - BASIS_TOLERANCE {
        Ok(index)
    } else {
        Err(Error::NondeterministicState { max_magnitude })
    }
}

/// XOR of two bits computed by the circuit `|k, a⟩ -> CNOT -> measure`.
pub fn quantum_xor_bit(a: u8, k: u8) -> Result<u8> {
    if a > 1 || k > 1 {
        return Err(Error::InvalidParameter {
            name: "bit",
            reason: format!("({a}, {k}) are not both bits"),
        });
    }
    let state = StateVector::basis(2, ((k as usize) << 1) | a as usize)?;
    let state = apply_gate(&state, &Gate::cnot(), &[0, 1])?;
    let idx = measure_deterministic(&state)?;
    Ok((idx & 1) as u8)
}

/// Pixel-wise XOR of an image with a key matrix.
pub fn diffuse(img: &GrayImage, key: &KeyMatrix) -> Result<GrayImage> {
    if img.dimensions() != key.dimensions() {
        return Err(Error::DimensionMismatch {
            expected: img.dimensions(),
            actual: key.dimensions(),
        });
    }
    let pixels = img
        .pixels()
        .iter()
        .zip(key.bytes())
        .map(|(&p, &k)| p ^ k)
        .collect();
    GrayImage::new(img.width(), img.height(), pixels)
}
