//! ASAP scheduling by qubit availability.

use crate::circuit::Circuit;
use crate::device::DeviceModel;
use crate::error::Result;

/// Start time of every gate plus the per-qubit finish times, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub starts: Vec<f64>,
    pub durations: Vec<f64>,
    pub qubit_finish: Vec<f64>,
}

impl Schedule {
    /// Each gate starts as soon as all of its qubits are free.
    pub fn asap(c: &Circuit, d: &DeviceModel) -> Result<Self> {
        let mut free = vec![0.0_f64; c.width()];
        let mut starts = Vec::with_capacity(c.len());
        let mut durations = Vec::with_capacity(c.len());
        for g in c.gates() {
            let dur = d.duration(g.kind)?;
            let start = g.qubits.iter().map(|&q| free[q]).fold(0.0, f64::max);
            for &q in &g.qubits {
                free[q] = start + dur;
            }
            starts.push(start);
            durations.push(dur);
        }
        Ok(Schedule {
            starts,
            durations,
            qubit_finish: free,
        })
    }

    pub fn latency(&self) -> f64 {
        self.qubit_finish.iter().copied().fold(0.0, f64::max)
    }
}

/// Critical-path latency in seconds, MEASURE durations included.
pub fn compute_latency(c: &Circuit, d: &DeviceModel) -> Result<f64> {
    Ok(Schedule::asap(c, d)?.latency())
}
