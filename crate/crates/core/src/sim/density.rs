//! Dense density matrices and the channels that act on them.
//!
//! The matrix is stored row-major, so entry `(i, j)` lives at `i * dim + j`.
//! Read as a vector over `2n` bits, qubit `q` owns the row bit `q + n` and
//! the column bit `q`; every operation below is a local update over those
//! bit pairs.

use num_complex::Complex64;

use crate::circuit::{Gate, GateMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    n: usize,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl DensityState {
    /// `|0...0><0...0|`.
    pub fn zero_state(n: usize) -> Self {
        let dim = 1usize << n;
        let mut data = vec![ZERO; dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        DensityState { n, data }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityState { n, data }
    }

    /// `|psi><psi|` for a normalised amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::WidthMismatch(format!("state vector length {dim} is not a power of two")));
        }
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = amplitudes[i] * amplitudes[j].conj();
            }
        }
        Ok(DensityState {
            n: dim.trailing_zeros() as usize,
            data,
        })
    }

    /// Builds a state from a row-major matrix without checking positivity.
    pub fn from_matrix(n: usize, data: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << n;
        if data.len() != dim * dim {
            return Err(Error::WidthMismatch(format!(
                "matrix has {} entries, expected {}",
                data.len(),
                dim * dim
            )));
        }
        Ok(DensityState { n, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.data[i * dim + j] - self.data[j * dim + i].conj()).norm());
            }
        }
        worst
    }

    /// Replaces the matrix by `(rho + rho^dagger) / 2`.
    pub fn symmetrize(&mut self) {
        let dim = self.dim();
        for i in 0..dim {
            let d = &mut self.data[i * dim + i];
            *d = Complex64::new(d.re, 0.0);
            for j in i + 1..dim {
                let avg = (self.data[i * dim + j] + self.data[j * dim + i].conj()) * 0.5;
                self.data[i * dim + j] = avg;
                self.data[j * dim + i] = avg.conj();
            }
        }
    }

    /// Real parts of the diagonal: computational-basis probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).collect()
    }

    fn row_bit(&self, q: usize) -> usize {
        1 << (q + self.n)
    }

    fn col_bit(q: usize) -> usize {
        1 << q
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for &q in qubits {
            if q >= self.n {
                return Err(Error::WidthMismatch(format!("qubit {q} out of range for {} qubits", self.n)));
            }
        }
        Ok(())
    }

    /// `rho <- U rho U^dagger` for a one- or two-qubit gate. MEASURE is a no-op.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.check_qubits(&gate.qubits)?;
        let Some(m) = gate.unitary() else {
            return Ok(());
        };
        let (matrix, d): (&[Complex64], usize) = match &m {
            GateMatrix::One(u) => (u, 2),
            GateMatrix::Two(u) => (u, 4),
        };
        let rows: Vec<usize> = gate.qubits.iter().map(|&q| self.row_bit(q)).collect();
        let cols: Vec<usize> = gate.qubits.iter().map(|&q| Self::col_bit(q)).collect();
        let conj: Vec<Complex64> = matrix.iter().map(|c| c.conj()).collect();
        apply_local(&mut self.data, &rows, matrix, d);
        apply_local(&mut self.data, &cols, &conj, d);
        Ok(())
    }

    /// Depolarizing channel on the subsystem `qubits`:
    /// `rho <- (1 - p) rho + p Tr_Q(rho) (x) I / 2^k`.
    pub fn apply_depolarizing(&mut self, p: f64, qubits: &[usize]) -> Result<()> {
        self.check_qubits(qubits)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!("depolarizing probability {p} outside [0, 1]")));
        }
        if p == 0.0 || qubits.is_empty() {
            return Ok(());
        }
        let k = qubits.len();
        let local = 1usize << k;
        let rows: Vec<usize> = qubits.iter().map(|&q| self.row_bit(q)).collect();
        let cols: Vec<usize> = qubits.iter().map(|&q| Self::col_bit(q)).collect();
        let offset = |bits: &[usize], l: usize| -> usize {
            bits.iter()
                .enumerate()
                .filter(|(b, _)| l >> (k - 1 - b) & 1 == 1)
                .map(|(_, m)| *m)
                .sum()
        };
        let row_off: Vec<usize> = (0..local).map(|l| offset(&rows, l)).collect();
        let col_off: Vec<usize> = (0..local).map(|l| offset(&cols, l)).collect();
        let mask: usize = rows.iter().chain(&cols).sum();
        let keep = 1.0 - p;
        let mix = p / local as f64;
        for base in 0..self.data.len() {
            if base & mask != 0 {
                continue;
            }
            let mut tr = ZERO;
            for l in 0..local {
                tr += self.data[base + row_off[l] + col_off[l]];
            }
            for a in 0..local {
                for b in 0..local {
                    let idx = base + row_off[a] + col_off[b];
                    self.data[idx] *= keep;
                    if a == b {
                        self.data[idx] += tr * mix;
                    }
                }
            }
        }
        Ok(())
    }

    /// Amplitude damping with `gamma = 1 - exp(-t / t1)` combined with pure
    /// dephasing so that coherences decay by `exp(-t / t2)`.
    pub fn apply_thermal_relaxation(&mut self, qubit: usize, t1: f64, t2: f64, duration: f64) -> Result<()> {
        self.check_qubits(&[qubit])?;
        if !(t1 > 0.0) || !(t2 > 0.0) || t2 > 2.0 * t1 * (1.0 + 1e-12) {
            return Err(Error::InvalidDevice(format!(
                "thermal relaxation needs t1 > 0 and 0 < t2 <= 2 t1 (t1 = {t1}, t2 = {t2})"
            )));
        }
        if duration < 0.0 {
            return Err(Error::InvalidConfig(format!("negative relaxation duration {duration}")));
        }
        if duration == 0.0 {
            return Ok(());
        }
        let excited = (-duration / t1).exp();
        let gamma = 1.0 - excited;
        let coherence = (-duration / t2).exp();
        let r = self.row_bit(qubit);
        let c = Self::col_bit(qubit);
        for base in 0..self.data.len() {
            if base & (r | c) != 0 {
                continue;
            }
            let p11 = self.data[base + r + c];
            self.data[base] += p11 * gamma;
            self.data[base + r + c] = p11 * excited;
            self.data[base + r] *= coherence;
            self.data[base + c] *= coherence;
        }
        Ok(())
    }
}

/// Applies a `d x d` matrix to the bit positions `bits` of `data` (bit 0 of
/// the list is the most significant bit of the local index).
fn apply_local(data: &mut [Complex64], bits: &[usize], m: &[Complex64], d: usize) {
    let k = bits.len();
    let offsets: Vec<usize> = (0..d)
        .map(|l| {
            bits.iter()
                .enumerate()
                .filter(|(b, _)| l >> (k - 1 - b) & 1 == 1)
                .map(|(_, m)| *m)
                .sum()
        })
        .collect();
    let mask: usize = bits.iter().sum();
    let mut v = [ZERO; 4];
    for base in 0..data.len() {
        if base & mask != 0 {
            continue;
        }
        for l in 0..d {
            v[l] = data[base + offsets[l]];
        }
        for r in 0..d {
            let mut acc = ZERO;
            for l in 0..d {
                acc += m[r * d + l] * v[l];
            }
            data[base + offsets[r]] = acc;
        }
    }
}
