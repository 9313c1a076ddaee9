//! Exact density-matrix simulation under per-gate depolarizing noise, thermal
//! relaxation (including idle time from the ASAP schedule) and symmetric
//! readout bit flips.

mod density;
mod distribution;

pub use density::DensityState;
pub use distribution::{bitstring, expectation, parse_bitstring, sample_counts, top_k_indices, Distribution};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, Schedule};
use crate::device::DeviceModel;
use crate::error::{Error, Result};

/// Default density-matrix width cap (4096 x 4096 complex entries).
pub const DEFAULT_MAX_WIDTH: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub depolarizing_enabled: bool,
    pub thermal_enabled: bool,
    pub readout_enabled: bool,
    /// Multiplier applied to every gate error; scaled values are clamped to [0, 1].
    pub depolarizing_scale: f64,
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        NoiseConfig {
            depolarizing_enabled: false,
            thermal_enabled: false,
            readout_enabled: false,
            depolarizing_scale: 1.0,
        }
    }

    pub fn depolarizing_only() -> Self {
        NoiseConfig {
            depolarizing_enabled: true,
            ..NoiseConfig::noiseless()
        }
    }

    pub fn thermal_only() -> Self {
        NoiseConfig {
            thermal_enabled: true,
            ..NoiseConfig::noiseless()
        }
    }

    /// Depolarizing and thermal relaxation, readout disabled.
    pub fn depolarizing_and_thermal() -> Self {
        NoiseConfig {
            depolarizing_enabled: true,
            thermal_enabled: true,
            ..NoiseConfig::noiseless()
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.depolarizing_scale = scale;
        self
    }

    pub fn with_readout(mut self, enabled: bool) -> Self {
        self.readout_enabled = enabled;
        self
    }

    pub fn is_noiseless(&self) -> bool {
        !(self.depolarizing_enabled || self.thermal_enabled || self.readout_enabled)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depolarizing_scale.is_nan() || self.depolarizing_scale < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "depolarizing_scale {} must be non-negative",
                self.depolarizing_scale
            )));
        }
        Ok(())
    }

    /// The calibration the enabled channels actually realise: gate errors are
    /// scaled (or zeroed when depolarizing is off) and readout errors are
    /// zeroed when readout noise is off. Reliability estimates use this view.
    pub fn effective_device(&self, d: &DeviceModel) -> DeviceModel {
        let scaled = if self.depolarizing_enabled {
            d.scale_gate_errors(self.depolarizing_scale)
        } else {
            d.without_gate_errors()
        };
        if self.readout_enabled {
            scaled
        } else {
            scaled.without_readout_errors()
        }
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig::depolarizing_and_thermal()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simulator {
    pub max_width: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator {
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

impl Simulator {
    /// Evolves `|0...0>` through the circuit and returns the final density
    /// matrix, before readout confusion.
    pub fn run_density(&self, c: &Circuit, d: &DeviceModel, nc: &NoiseConfig) -> Result<DensityState> {
        nc.validate()?;
        let n = c.width();
        if n > self.max_width {
            return Err(Error::WidthExceedsMaximum {
                width: n,
                max: self.max_width,
            });
        }
        let effective = nc.effective_device(d);
        let schedule = if nc.thermal_enabled {
            Some(Schedule::asap(c, d)?)
        } else {
            None
        };
        let (t1, t2) = if nc.thermal_enabled {
            let t1 = (0..n).map(|q| d.t1(q)).collect::<Result<Vec<_>>>()?;
            let t2 = (0..n).map(|q| d.t2(q)).collect::<Result<Vec<_>>>()?;
            (t1, t2)
        } else {
            (Vec::new(), Vec::new())
        };

        let mut state = DensityState::zero_state(n);
        let mut clock = vec![0.0_f64; n];
        for (i, g) in c.gates().iter().enumerate() {
            if let Some(s) = &schedule {
                let start = s.starts[i];
                for &q in &g.qubits {
                    state.apply_thermal_relaxation(q, t1[q], t2[q], start - clock[q])?;
                }
            }
            if g.kind != GateKind::Measure {
                state.apply_gate(g)?;
                if nc.depolarizing_enabled {
                    let p = effective.gate_error(g)?;
                    state.apply_depolarizing(p, &g.qubits)?;
                }
            }
            if let Some(s) = &schedule {
                let dur = s.durations[i];
                for &q in &g.qubits {
                    state.apply_thermal_relaxation(q, t1[q], t2[q], dur)?;
                    clock[q] = s.starts[i] + dur;
                }
            }
            state.symmetrize();
        }
        // Unmeasured qubits keep decaying until the circuit ends.
        if let Some(s) = &schedule {
            let end = s.latency();
            let measured = c.measured();
            for q in (0..n).filter(|q| !measured.contains(q)) {
                state.apply_thermal_relaxation(q, t1[q], t2[q], end - clock[q])?;
            }
            state.symmetrize();
        }
        Ok(state)
    }

    pub fn run(&self, c: &Circuit, d: &DeviceModel, nc: &NoiseConfig) -> Result<Distribution> {
        let state = self.run_density(c, d, nc)?;
        let mut probs = state.diagonal();
        if nc.readout_enabled {
            for q in c.measured() {
                apply_readout_flip(&mut probs, q, d.readout_error(q)?);
            }
        }
        Distribution::from_quasi(c.width(), probs)
    }
}

/// Simulates with the default width cap.
pub fn simulate(c: &Circuit, d: &DeviceModel, nc: &NoiseConfig) -> Result<Distribution> {
    Simulator::default().run(c, d, nc)
}

/// Shot sampling applied to every simulated distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub shots: u64,
    pub seed: u64,
}

/// A device plus noise settings that turns circuits into distributions.
///
/// `stream` separates the sampling seeds of distinct circuits run under one
/// backend; exact execution ignores it.
#[derive(Debug, Clone, Copy)]
pub struct Backend<'a> {
    pub device: &'a DeviceModel,
    pub noise: NoiseConfig,
    pub simulator: Simulator,
    pub sampling: Option<Sampling>,
}

impl<'a> Backend<'a> {
    pub fn exact(device: &'a DeviceModel, noise: NoiseConfig) -> Self {
        Backend {
            device,
            noise,
            simulator: Simulator::default(),
            sampling: None,
        }
    }

    pub fn with_device<'b>(&self, device: &'b DeviceModel) -> Backend<'b> {
        Backend {
            device,
            noise: self.noise,
            simulator: self.simulator,
            sampling: self.sampling,
        }
    }

    pub fn effective_device(&self) -> DeviceModel {
        self.noise.effective_device(self.device)
    }

    pub fn execute(&self, c: &Circuit, stream: u64) -> Result<Distribution> {
        let exact = self.simulator.run(c, self.device, &self.noise)?;
        match self.sampling {
            None => Ok(exact),
            Some(s) => {
                let seed = s.seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
                sample_counts(&exact, s.shots, seed)
            }
        }
    }
}

/// Symmetric bit-flip confusion with probability `m` on qubit `q`.
fn apply_readout_flip(probs: &mut [f64], q: usize, m: f64) {
    let bit = 1 << q;
    for i in 0..probs.len() {
        if i & bit == 0 {
            let (a, b) = (probs[i], probs[i | bit]);
            probs[i] = (1.0 - m) * a + m * b;
            probs[i | bit] = m * a + (1.0 - m) * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_benchmark, Benchmark, Gate};

    #[test]
    fn noiseless_ghz3() {
        let c = generate_benchmark(&Benchmark::ghz(3)).unwrap();
        let p = simulate(&c, &DeviceModel::bundled(), &NoiseConfig::noiseless()).unwrap();
        assert!((p.prob(0) - 0.5).abs() < 1e-12);
        assert!((p.prob(7) - 0.5).abs() < 1e-12);
        assert!(p.probs()[1..7].iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn infinite_depolarizing_scale_is_uniform() {
        let c = generate_benchmark(&Benchmark::hs(3, 1)).unwrap();
        let nc = NoiseConfig::depolarizing_only().with_scale(f64::INFINITY);
        let p = simulate(&c, &DeviceModel::bundled(), &nc).unwrap();
        for &x in p.probs() {
            assert!((x - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_idle_decay_to_half() {
        let t1 = DeviceModel::bundled().t1(0).unwrap();
        let total = t1 * 2.0_f64.ln();
        let mut d = DeviceModel::bundled();
        d.set_duration(GateKind::X, total / 3.0).unwrap();
        // q0 is excited at t = 0 and idles while q1 runs two more X gates.
        let c = Circuit::from_gates(
            2,
            [
                Gate::single(GateKind::X, 0),
                Gate::single(GateKind::X, 1),
                Gate::single(GateKind::X, 1),
                Gate::single(GateKind::X, 1),
            ],
        )
        .unwrap();
        let p = simulate(&c, &d, &NoiseConfig::thermal_only()).unwrap();
        let q0_excited: f64 = (0..4).filter(|i| i & 1 == 1).map(|i| p.prob(i)).sum();
        assert!((q0_excited - 0.5).abs() < 1e-9);
    }

    #[test]
    fn readout_flips_measured_qubits_only() {
        let mut d = DeviceModel::bundled();
        d = d.without_gate_errors();
        let c = Circuit::from_gates(2, [Gate::single(GateKind::X, 0), Gate::measure(0)]).unwrap();
        let nc = NoiseConfig::noiseless().with_readout(true);
        let p = simulate(&c, &d, &nc).unwrap();
        let m = d.readout_error(0).unwrap();
        assert!((p.prob(0b01) - (1.0 - m)).abs() < 1e-15);
        assert!((p.prob(0b00) - m).abs() < 1e-15);
        assert_eq!(p.prob(0b10), 0.0);
    }

    #[test]
    fn sampled_backend_is_deterministic_per_stream() {
        let d = DeviceModel::bundled();
        let c = generate_benchmark(&Benchmark::ghz(3)).unwrap();
        let mut b = Backend::exact(&d, NoiseConfig::default());
        b.sampling = Some(Sampling { shots: 500, seed: 11 });
        assert_eq!(b.execute(&c, 3).unwrap(), b.execute(&c, 3).unwrap());
        assert_ne!(b.execute(&c, 3).unwrap(), b.execute(&c, 4).unwrap());
    }

    #[test]
    fn width_cap() {
        let c = Circuit::new(3).unwrap();
        let sim = Simulator { max_width: 2 };
        assert!(matches!(
            sim.run(&c, &DeviceModel::bundled(), &NoiseConfig::noiseless()),
            Err(Error::WidthExceedsMaximum { width: 3, max: 2 })
        ));
    }

    #[test]
    fn missing_calibration_surfaces() {
        let d = DeviceModel::bundled().restrict(&[0, 1]).unwrap();
        let c = generate_benchmark(&Benchmark::ghz(3)).unwrap();
        assert!(matches!(
            simulate(&c, &d, &NoiseConfig::thermal_only()),
            Err(Error::MissingCalibration(_))
        ));
    }
}
