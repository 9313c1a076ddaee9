//! Circuit reliability as the estimated success probability (ESP): the product
//! of per-gate and per-measured-qubit success probabilities.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::device::DeviceModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reliability {
    pub r: f64,
    /// Noise scale `1 - r` used as the extrapolation abscissa.
    pub mu: f64,
}

impl Reliability {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidConfig(format!("reliability {r} outside [0, 1]")));
        }
        Ok(Reliability { r, mu: 1.0 - r })
    }

    /// Geometric mean of several reliabilities.
    pub fn geometric_mean(values: &[Reliability]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfig("geometric mean of no reliabilities".into()));
        }
        let prod: f64 = values.iter().map(|v| v.r).product();
        Reliability::new(prod.powf(1.0 / values.len() as f64))
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0.0
    }
}

/// ESP split into its gate and measurement factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EspFactors {
    pub gates: f64,
    pub measurements: f64,
}

impl EspFactors {
    pub fn total(&self) -> f64 {
        self.gates * self.measurements
    }
}

pub fn esp_factors(c: &Circuit, d: &DeviceModel) -> Result<EspFactors> {
    let mut gates = 1.0;
    for g in c.gates().iter().filter(|g| g.kind.is_unitary()) {
        gates *= 1.0 - d.gate_error(g)?;
    }
    let mut measurements = 1.0;
    for q in c.measured() {
        measurements *= 1.0 - d.readout_error(q)?;
    }
    Ok(EspFactors { gates, measurements })
}

pub fn compute_esp(c: &Circuit, d: &DeviceModel) -> Result<Reliability> {
    Reliability::new(esp_factors(c, d)?.total())
}
