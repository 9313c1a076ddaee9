//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over `width` qubits. Qubit
//! `q` of a basis-state index `i` is bit `q` of `i`. Bitstrings and Pauli
//! labels are written with qubit 0 leftmost.

mod bench;
mod fold;
mod qasm;
mod schedule;

pub use bench::{
    generate_benchmark, Benchmark, BenchmarkFamily, HsAngles, HS_ANGLES, QAOA_ANGLES, VQE_ANGLE_RANGE, VQE_ANGLE_SEED,
};
pub use fold::fold_global;
pub use qasm::{emit_qasm, parse_qasm};
pub use schedule::{compute_latency, Schedule};

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    #[serde(rename = "cx")]
    Cnot,
    Cz,
    Rzz,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Rzz,
        GateKind::Measure,
    ];

    /// Lower-case QASM mnemonic, also used as the calibration key.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cnot => "cx",
            GateKind::Cz => "cz",
            GateKind::Rzz => "rzz",
            GateKind::Measure => "measure",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Rzz => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz)
    }

    pub fn is_unitary(self) -> bool {
        self != GateKind::Measure
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let kind = match s {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "cx" | "cnot" => GateKind::Cnot,
            "cz" => GateKind::Cz,
            "rzz" => GateKind::Rzz,
            "measure" => GateKind::Measure,
            other => return Err(other.to_string()),
        };
        Ok(kind)
    }
}

/// Dense unitary of a one- or two-qubit gate, row-major.
///
/// For two-qubit gates the local index is `2 * bit(qubits[0]) + bit(qubits[1])`,
/// so CNOT has its control on `qubits[0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateMatrix {
    One([Complex64; 4]),
    Two([Complex64; 16]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl Gate {
    /// Builds a gate, checking arity, qubit distinctness and the angle rule.
    pub fn new(kind: GateKind, qubits: Vec<usize>, angle: Option<f64>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{kind} expects {} qubit(s), got {}",
                kind.arity(),
                qubits.len()
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::InvalidGate(format!(
                "{kind} uses qubit {} twice",
                qubits[0]
            )));
        }
        match (kind.is_rotation(), angle) {
            (true, Some(a)) if a.is_finite() => {}
            (true, Some(a)) => {
                return Err(Error::InvalidGate(format!("{kind} angle {a} is not finite")))
            }
            (true, None) => return Err(Error::InvalidGate(format!("{kind} requires an angle"))),
            (false, Some(_)) => {
                return Err(Error::InvalidGate(format!("{kind} takes no angle")))
            }
            (false, None) => {}
        }
        Ok(Gate { kind, qubits, angle })
    }

    pub fn single(kind: GateKind, q: usize) -> Self {
        Gate::new(kind, vec![q], None).expect("fixed single-qubit gate")
    }

    pub fn rotation(kind: GateKind, q: usize, angle: f64) -> Self {
        Gate::new(kind, vec![q], Some(angle)).expect("rotation gate")
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Gate::new(kind, vec![a, b], None).expect("two-qubit gate")
    }

    pub fn rzz(a: usize, b: usize, angle: f64) -> Self {
        Gate::new(GateKind::Rzz, vec![a, b], Some(angle)).expect("rzz gate")
    }

    pub fn measure(q: usize) -> Self {
        Gate::single(GateKind::Measure, q)
    }

    /// Gate-by-gate inverse within the gate set. `None` for MEASURE.
    pub fn inverse(&self) -> Option<Gate> {
        let kind = match self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::Measure => return None,
            k => k,
        };
        Some(Gate {
            kind,
            qubits: self.qubits.clone(),
            angle: self.angle.map(|a| -a),
        })
    }

    /// Unitary of the gate. `None` for MEASURE.
    pub fn unitary(&self) -> Option<GateMatrix> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let theta = self.angle.unwrap_or(0.0);
        let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let m = match self.kind {
            GateKind::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                GateMatrix::One([h, h, h, -h])
            }
            GateKind::X => GateMatrix::One([o, l, l, o]),
            GateKind::Y => GateMatrix::One([o, c(0.0, -1.0), c(0.0, 1.0), o]),
            GateKind::Z => GateMatrix::One([l, o, o, -l]),
            GateKind::S => GateMatrix::One([l, o, o, c(0.0, 1.0)]),
            GateKind::Sdg => GateMatrix::One([l, o, o, c(0.0, -1.0)]),
            GateKind::T => GateMatrix::One([l, o, o, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)]),
            GateKind::Tdg => GateMatrix::One([l, o, o, c(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)]),
            GateKind::Rx => GateMatrix::One([c(ch, 0.0), c(0.0, -sh), c(0.0, -sh), c(ch, 0.0)]),
            GateKind::Ry => GateMatrix::One([c(ch, 0.0), c(-sh, 0.0), c(sh, 0.0), c(ch, 0.0)]),
            GateKind::Rz => GateMatrix::One([c(ch, -sh), o, o, c(ch, sh)]),
            GateKind::Cnot => {
                let mut u = [o; 16];
                u[0] = l;
                u[5] = l;
                u[11] = l;
                u[14] = l;
                GateMatrix::Two(u)
            }
            GateKind::Cz => {
                let mut u = [o; 16];
                u[0] = l;
                u[5] = l;
                u[10] = l;
                u[15] = -l;
                GateMatrix::Two(u)
            }
            GateKind::Rzz => {
                let mut u = [o; 16];
                u[0] = c(ch, -sh);
                u[5] = c(ch, sh);
                u[10] = c(ch, sh);
                u[15] = c(ch, -sh);
                GateMatrix::Two(u)
            }
            GateKind::Measure => return None,
        };
        Some(m)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(a) = self.angle {
            write!(f, "({a})")?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::WidthMismatch("circuit width must be at least 1".into()));
        }
        Ok(Circuit {
            width,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(width)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate, enforcing index bounds and "no unitary after MEASURE".
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        Gate::new(gate.kind, gate.qubits.clone(), gate.angle)?;
        for &q in &gate.qubits {
            if q >= self.width {
                return Err(Error::WidthMismatch(format!(
                    "qubit {q} out of range for width {}",
                    self.width
                )));
            }
            if self.is_measured(q) {
                return Err(Error::InvalidGate(format!(
                    "{} on qubit {q} after its measurement",
                    gate.kind
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_measured(&self, q: usize) -> bool {
        self.gates
            .iter()
            .any(|g| g.kind == GateKind::Measure && g.qubits[0] == q)
    }

    pub fn measured(&self) -> BTreeSet<usize> {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .map(|g| g.qubits[0])
            .collect()
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(|g| g.kind == GateKind::Measure)
    }

    pub fn unitary_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_unitary()).count()
    }

    /// The circuit with every MEASURE removed.
    pub fn unitary_part(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self
                .gates
                .iter()
                .filter(|g| g.kind.is_unitary())
                .cloned()
                .collect(),
        }
    }

    /// Appends a MEASURE for each listed qubit (in the given order).
    pub fn with_measurements(mut self, qubits: impl IntoIterator<Item = usize>) -> Result<Self> {
        for q in qubits {
            self.push(Gate::measure(q))?;
        }
        Ok(self)
    }

    pub fn measure_all(self) -> Result<Self> {
        let n = self.width;
        self.with_measurements(0..n)
    }

    /// Qubits acted on by at least one gate, ascending.
    pub fn touched_qubits(&self) -> BTreeSet<usize> {
        self.gates.iter().flat_map(|g| g.qubits.iter().copied()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Tensor product of single-qubit Paulis; character `i` acts on qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString { ops }
    }

    /// `Z` on every one of `n` qubits.
    pub fn all_z(n: usize) -> Self {
        PauliString { ops: vec![Pauli::Z; n] }
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.ops.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// Bit mask of the qubits carrying `Z`.
    pub fn z_mask(&self) -> usize {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == Pauli::Z)
            .fold(0, |m, (q, _)| m | (1 << q))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidConfig(format!(
                    "invalid Pauli character `{other}` in `{s}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if ops.is_empty() {
            return Err(Error::InvalidConfig("empty Pauli string".into()));
        }
        Ok(PauliString { ops })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            let ch = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}
