//! Device calibration: gate and readout error rates, T1/T2 and gate durations.
//!
//! The JSON form uses nanoseconds for every time; in memory all times are
//! seconds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, GateKind};
use crate::error::{Error, Result};

const NS: f64 = 1e-9;

const BUNDLED_DEVICE: &str = include_str!("../data/default_device.json");

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceModel {
    gate_error: BTreeMap<GateKind, f64>,
    gate_error_overrides: BTreeMap<(GateKind, Vec<usize>), f64>,
    readout_error: Vec<f64>,
    t1: Vec<f64>,
    t2: Vec<f64>,
    gate_duration: BTreeMap<GateKind, f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DeviceJson {
    gate_error: BTreeMap<String, f64>,
    /// `{"cx": {"0,1": 0.012}}` style per-qubit overrides.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    gate_error_per_qubit: BTreeMap<String, BTreeMap<String, f64>>,
    readout_error: Vec<f64>,
    t1: Vec<f64>,
    t2: Vec<f64>,
    gate_duration: BTreeMap<String, f64>,
}

fn kind_key(name: &str) -> Result<GateKind> {
    name.parse::<GateKind>()
        .map_err(|n| Error::InvalidDevice(format!("unknown gate kind `{n}`")))
}

impl DeviceModel {
    /// Builds a model from SI-unit (seconds) values, validating every invariant.
    pub fn new(
        gate_error: BTreeMap<GateKind, f64>,
        readout_error: Vec<f64>,
        t1: Vec<f64>,
        t2: Vec<f64>,
        gate_duration: BTreeMap<GateKind, f64>,
    ) -> Result<Self> {
        let model = DeviceModel {
            gate_error,
            gate_error_overrides: BTreeMap::new(),
            readout_error,
            t1,
            t2,
            gate_duration,
        };
        model.validate()?;
        Ok(model)
    }

    /// Uniform model: every qubit and gate kind shares the given values.
    #[allow(clippy::too_many_arguments)]
    pub fn uniform(
        qubits: usize,
        one_qubit_error: f64,
        two_qubit_error: f64,
        readout_error: f64,
        t1: f64,
        t2: f64,
        one_qubit_duration: f64,
        two_qubit_duration: f64,
        measure_duration: f64,
    ) -> Result<Self> {
        let mut errors = BTreeMap::new();
        let mut durations = BTreeMap::new();
        for kind in GateKind::ALL {
            let (e, d) = match (kind.is_unitary(), kind.arity()) {
                (false, _) => (None, measure_duration),
                (true, 1) => (Some(one_qubit_error), one_qubit_duration),
                _ => (Some(two_qubit_error), two_qubit_duration),
            };
            if let Some(e) = e {
                errors.insert(kind, e);
            }
            durations.insert(kind, d);
        }
        DeviceModel::new(
            errors,
            vec![readout_error; qubits],
            vec![t1; qubits],
            vec![t2; qubits],
            durations,
        )
    }

    /// The bundled 16-qubit model (T1 median 91.99 us).
    pub fn bundled() -> Self {
        DeviceModel::from_json(BUNDLED_DEVICE).expect("bundled device model is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DeviceJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidDevice(e.to_string()))?;
        let mut gate_error = BTreeMap::new();
        for (k, v) in raw.gate_error {
            gate_error.insert(kind_key(&k)?, v);
        }
        let mut overrides = BTreeMap::new();
        for (k, per_qubit) in raw.gate_error_per_qubit {
            let kind = kind_key(&k)?;
            for (qs, v) in per_qubit {
                let qubits = qs
                    .split(',')
                    .map(|q| {
                        q.trim().parse::<usize>().map_err(|_| {
                            Error::InvalidDevice(format!("bad qubit list `{qs}` for {kind}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if qubits.len() != kind.arity() {
                    return Err(Error::InvalidDevice(format!(
                        "override `{qs}` for {kind} has wrong arity"
                    )));
                }
                overrides.insert((kind, qubits), v);
            }
        }
        let mut gate_duration = BTreeMap::new();
        for (k, v) in raw.gate_duration {
            gate_duration.insert(kind_key(&k)?, v * NS);
        }
        let model = DeviceModel {
            gate_error,
            gate_error_overrides: overrides,
            readout_error: raw.readout_error,
            t1: raw.t1.into_iter().map(|t| t * NS).collect(),
            t2: raw.t2.into_iter().map(|t| t * NS).collect(),
            gate_duration,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        let mut per_qubit: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
        for ((kind, qs), v) in &self.gate_error_overrides {
            let key = qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
            per_qubit.entry(kind.name().to_string()).or_default().insert(key, *v);
        }
        let raw = DeviceJson {
            gate_error: self
                .gate_error
                .iter()
                .map(|(k, v)| (k.name().to_string(), *v))
                .collect(),
            gate_error_per_qubit: per_qubit,
            readout_error: self.readout_error.clone(),
            t1: self.t1.iter().map(|t| t / NS).collect(),
            t2: self.t2.iter().map(|t| t / NS).collect(),
            gate_duration: self
                .gate_duration
                .iter()
                .map(|(k, v)| (k.name().to_string(), v / NS))
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("device model serializes")
    }

    fn validate(&self) -> Result<()> {
        let prob = |what: String, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidDevice(format!("{what} = {p} outside [0, 1]")))
            }
        };
        for (k, &e) in &self.gate_error {
            if !k.is_unitary() {
                return Err(Error::InvalidDevice("measure carries no gate error; use readout_error".into()));
            }
            prob(format!("gate_error[{k}]"), e)?;
        }
        for ((k, qs), &e) in &self.gate_error_overrides {
            prob(format!("gate_error[{k}]{qs:?}"), e)?;
        }
        for (q, &m) in self.readout_error.iter().enumerate() {
            prob(format!("readout_error[{q}]"), m)?;
        }
        let n = self.readout_error.len();
        if self.t1.len() != n || self.t2.len() != n {
            return Err(Error::InvalidDevice(format!(
                "per-qubit arrays differ in length: readout {n}, t1 {}, t2 {}",
                self.t1.len(),
                self.t2.len()
            )));
        }
        for q in 0..n {
            let (t1, t2) = (self.t1[q], self.t2[q]);
            if !(t1 > 0.0 && t1.is_finite()) {
                return Err(Error::InvalidDevice(format!("t1[{q}] must be positive")));
            }
            if !(t2 > 0.0 && t2 <= 2.0 * t1) {
                return Err(Error::InvalidDevice(format!(
                    "t2[{q}] = {t2} violates 0 < t2 <= 2 t1 (t1 = {t1})"
                )));
            }
        }
        for (k, &d) in &self.gate_duration {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidDevice(format!("gate_duration[{k}] must be positive")));
            }
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.readout_error.len()
    }

    /// Error probability of a unitary gate, honouring per-qubit overrides.
    pub fn gate_error(&self, gate: &Gate) -> Result<f64> {
        if let Some(&e) = self.gate_error_overrides.get(&(gate.kind, gate.qubits.clone())) {
            return Ok(e);
        }
        self.gate_error
            .get(&gate.kind)
            .copied()
            .ok_or_else(|| Error::MissingCalibration(format!("gate_error[{}]", gate.kind)))
    }

    pub fn set_gate_error(&mut self, kind: GateKind, error: f64) -> Result<()> {
        self.gate_error.insert(kind, error);
        self.validate()
    }

    pub fn set_gate_error_override(&mut self, kind: GateKind, qubits: Vec<usize>, error: f64) -> Result<()> {
        self.gate_error_overrides.insert((kind, qubits), error);
        self.validate()
    }

    pub fn duration(&self, kind: GateKind) -> Result<f64> {
        self.gate_duration
            .get(&kind)
            .copied()
            .ok_or_else(|| Error::MissingCalibration(format!("gate_duration[{kind}]")))
    }

    pub fn set_duration(&mut self, kind: GateKind, seconds: f64) -> Result<()> {
        self.gate_duration.insert(kind, seconds);
        self.validate()
    }

    fn per_qubit(&self, values: &[f64], what: &str, q: usize) -> Result<f64> {
        values
            .get(q)
            .copied()
            .ok_or_else(|| Error::MissingCalibration(format!("{what}[{q}]")))
    }

    pub fn readout_error(&self, q: usize) -> Result<f64> {
        self.per_qubit(&self.readout_error, "readout_error", q)
    }

    pub fn t1(&self, q: usize) -> Result<f64> {
        self.per_qubit(&self.t1, "t1", q)
    }

    pub fn t2(&self, q: usize) -> Result<f64> {
        self.per_qubit(&self.t2, "t2", q)
    }

    /// Copy with every gate error (including overrides) multiplied by `scale`
    /// and clamped to [0, 1]. A zero error stays zero for any scale.
    pub fn scale_gate_errors(&self, scale: f64) -> DeviceModel {
        let f = |e: f64| if e == 0.0 { 0.0 } else { (e * scale).clamp(0.0, 1.0) };
        let mut out = self.clone();
        out.gate_error.values_mut().for_each(|e| *e = f(*e));
        out.gate_error_overrides.values_mut().for_each(|e| *e = f(*e));
        out
    }

    /// Copy with all gate errors set to zero.
    pub fn without_gate_errors(&self) -> DeviceModel {
        self.scale_gate_errors(0.0)
    }

    /// Copy with all readout errors set to zero.
    pub fn without_readout_errors(&self) -> DeviceModel {
        let mut out = self.clone();
        out.readout_error.iter_mut().for_each(|m| *m = 0.0);
        out
    }

    /// Calibration for a subset of physical qubits: logical qubit `i` of the
    /// result is physical qubit `physical[i]` of `self`.
    pub fn restrict(&self, physical: &[usize]) -> Result<DeviceModel> {
        let pick = |v: &[f64], what: &str| {
            physical
                .iter()
                .map(|&q| self.per_qubit(v, what, q))
                .collect::<Result<Vec<_>>>()
        };
        let mut overrides = BTreeMap::new();
        for ((kind, qs), &e) in &self.gate_error_overrides {
            let mapped: Option<Vec<usize>> = qs
                .iter()
                .map(|q| physical.iter().position(|p| p == q))
                .collect();
            if let Some(m) = mapped {
                overrides.insert((*kind, m), e);
            }
        }
        Ok(DeviceModel {
            gate_error: self.gate_error.clone(),
            gate_error_overrides: overrides,
            readout_error: pick(&self.readout_error, "readout_error")?,
            t1: pick(&self.t1, "t1")?,
            t2: pick(&self.t2, "t2")?,
            gate_duration: self.gate_duration.clone(),
        })
    }
}

impl Default for DeviceModel {
    fn default() -> Self {
        DeviceModel::bundled()
    }
}
