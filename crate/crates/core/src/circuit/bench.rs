//! Deterministic benchmark circuit generators (GHZ, Hamiltonian simulation,
//! vanilla QAOA, hardware-efficient VQE). Every generator measures all qubits.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Trotter-step angles for the transverse-field Ising model:
/// `RZ(2 hz dt)`, `RZZ(2 J dt)`, `RX(2 hx dt)` with `dt = 0.2`, `J = hx = 1`,
/// `hz = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsAngles {
    pub rz: f64,
    pub rzz: f64,
    pub rx: f64,
}

pub const HS_ANGLES: HsAngles = HsAngles {
    rz: 0.2,
    rzz: 0.4,
    rx: 0.4,
};

/// Single-layer QAOA parameters `(gamma, beta)`; the cost layer applies
/// `RZZ(2 gamma)` per ring edge and the mixer `RX(2 beta)` per qubit.
pub const QAOA_ANGLES: (f64, f64) = (PI / 8.0, PI / 16.0);

/// Seed for the VQE rotation angles.
pub const VQE_ANGLE_SEED: u64 = 0x5eed_0fae;

/// VQE angles are drawn uniformly from `[-VQE_ANGLE_RANGE, VQE_ANGLE_RANGE]`.
pub const VQE_ANGLE_RANGE: f64 = PI / 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkFamily {
    Ghz,
    Hs,
    Qaoa,
    Vqe,
}

impl fmt::Display for BenchmarkFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BenchmarkFamily::Ghz => "ghz",
            BenchmarkFamily::Hs => "hs",
            BenchmarkFamily::Qaoa => "qaoa",
            BenchmarkFamily::Vqe => "vqe",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for BenchmarkFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(BenchmarkFamily::Ghz),
            "hs" => Ok(BenchmarkFamily::Hs),
            "qaoa" | "qa" => Ok(BenchmarkFamily::Qaoa),
            "vqe" => Ok(BenchmarkFamily::Vqe),
            other => Err(Error::InvalidConfig(format!("unsupported benchmark family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Benchmark {
    pub family: BenchmarkFamily,
    pub qubits: usize,
    /// HS time steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// VQE layers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
}

impl Benchmark {
    pub fn ghz(qubits: usize) -> Self {
        Benchmark { family: BenchmarkFamily::Ghz, qubits, steps: None, layers: None }
    }

    pub fn hs(qubits: usize, steps: usize) -> Self {
        Benchmark { family: BenchmarkFamily::Hs, qubits, steps: Some(steps), layers: None }
    }

    pub fn qaoa(qubits: usize) -> Self {
        Benchmark { family: BenchmarkFamily::Qaoa, qubits, steps: None, layers: None }
    }

    pub fn vqe(qubits: usize, layers: usize) -> Self {
        Benchmark { family: BenchmarkFamily::Vqe, qubits, steps: None, layers: Some(layers) }
    }

    /// Short label used in reports, e.g. `hs-s2` or `vqe-l3`.
    pub fn label(&self) -> String {
        match self.family {
            BenchmarkFamily::Hs => format!("hs-s{}", self.steps.unwrap_or(1)),
            BenchmarkFamily::Vqe => format!("vqe-l{}", self.layers.unwrap_or(1)),
            f => f.to_string(),
        }
    }

    pub fn circuit(&self) -> Result<Circuit> {
        generate_benchmark(self)
    }
}

pub fn generate_benchmark(b: &Benchmark) -> Result<Circuit> {
    let n = b.qubits;
    if n < 2 {
        return Err(Error::InvalidConfig(format!("{} needs at least 2 qubits, got {n}", b.family)));
    }
    let positive = |v: Option<usize>, what: &str| match v {
        Some(0) => Err(Error::InvalidConfig(format!("{} {what} must be positive", b.family))),
        Some(v) => Ok(v),
        None => Ok(1),
    };
    let unexpected = |v: Option<usize>, what: &str| match v {
        Some(_) => Err(Error::InvalidConfig(format!("{} takes no {what} parameter", b.family))),
        None => Ok(()),
    };
    let mut gates = Vec::new();
    match b.family {
        BenchmarkFamily::Ghz => {
            unexpected(b.steps, "steps")?;
            unexpected(b.layers, "layers")?;
            gates.push(Gate::single(GateKind::H, 0));
            for q in 0..n - 1 {
                gates.push(Gate::two(GateKind::Cnot, q, q + 1));
            }
        }
        BenchmarkFamily::Hs => {
            unexpected(b.layers, "layers")?;
            let steps = positive(b.steps, "steps")?;
            for _ in 0..steps {
                for q in 0..n {
                    gates.push(Gate::rotation(GateKind::Rz, q, HS_ANGLES.rz));
                }
                for q in 0..n - 1 {
                    gates.push(Gate::rzz(q, q + 1, HS_ANGLES.rzz));
                }
                for q in 0..n {
                    gates.push(Gate::rotation(GateKind::Rx, q, HS_ANGLES.rx));
                }
            }
        }
        BenchmarkFamily::Qaoa => {
            unexpected(b.steps, "steps")?;
            unexpected(b.layers, "layers")?;
            let (gamma, beta) = QAOA_ANGLES;
            for q in 0..n {
                gates.push(Gate::single(GateKind::H, q));
            }
            for (a, c) in ring_edges(n) {
                gates.push(Gate::rzz(a, c, 2.0 * gamma));
            }
            for q in 0..n {
                gates.push(Gate::rotation(GateKind::Rx, q, 2.0 * beta));
            }
        }
        BenchmarkFamily::Vqe => {
            unexpected(b.steps, "steps")?;
            let layers = positive(b.layers, "layers")?;
            let mut rng = ChaCha8Rng::seed_from_u64(VQE_ANGLE_SEED ^ ((n as u64) << 32));
            for _ in 0..layers {
                for q in 0..n {
                    let theta = rng.random_range(-VQE_ANGLE_RANGE..=VQE_ANGLE_RANGE);
                    gates.push(Gate::rotation(GateKind::Ry, q, theta));
                }
                for q in 0..n - 1 {
                    gates.push(Gate::two(GateKind::Cnot, q, q + 1));
                }
            }
        }
    }
    Circuit::from_gates(n, gates)?.measure_all()
}

/// Ring edges `(i, i+1 mod n)`; a 2-ring has the single edge `(0, 1)`.
fn ring_edges(n: usize) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}
