//! Zero-noise extrapolation without folding: reliability-based linear
//! extrapolation (RZNE), latency-based per-state exponential extrapolation
//! (SLZNE), the serial pipeline that chooses between them and circuit
//! cutting, plus a folding baseline for comparison.

mod dzne;
mod rzne;
mod slzne;

pub use dzne::{dzne_baseline, dzne_with, folds_for_scale, linear_intercept, DzneResult, DEFAULT_SCALE_FACTORS};
pub use rzne::{rzne_fit, rzne_state, RznePoint};
pub use slzne::{slzne, slzne_unnormalized};

use serde::{Deserialize, Serialize};

use crate::circuit::{compute_latency, Circuit};
use crate::cutting::cutqc_mc_with;
use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::reliability::{compute_esp, Reliability};
use crate::sim::{Backend, Distribution, NoiseConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MitigationConfig {
    /// States extrapolated by the Top-K methods and by the pipeline's SLZNE
    /// stage; `None` extrapolates every state.
    pub top_k: Option<usize>,
    /// Circuits with ESP at or below this are routed to cutting.
    pub esp_threshold: f64,
    /// SLZNE runs when latency exceeds this fraction of the smallest T1.
    pub slzne_latency_fraction: f64,
    pub max_cuts: usize,
}

impl Default for MitigationConfig {
    fn default() -> Self {
        MitigationConfig {
            top_k: Some(10),
            esp_threshold: 0.10,
            slzne_latency_fraction: 0.7,
            max_cuts: 2,
        }
    }
}

impl MitigationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.top_k == Some(0) {
            return Err(Error::InvalidConfig("top_k must be positive".into()));
        }
        if !(self.esp_threshold > 0.0 && self.esp_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "esp_threshold {} must lie in (0, 1)",
                self.esp_threshold
            )));
        }
        if !(self.slzne_latency_fraction.is_finite() && self.slzne_latency_fraction > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "slzne_latency_fraction {} must be positive",
                self.slzne_latency_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Rzne,
    SlzneRzne,
    Cut,
}

/// What the pipeline decides for a circuit before running anything.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    /// ESP under the calibration the noise settings realise.
    pub esp: Reliability,
    /// Seconds.
    pub latency: f64,
    /// Smallest T1 over the touched qubits, seconds.
    pub t1_min: Option<f64>,
    /// SLZNE applies to the direct route (thermal noise on and latency long).
    pub slzne: bool,
    pub route: Route,
}

impl RoutePlan {
    fn direct_route(&self) -> Route {
        if self.slzne {
            Route::SlzneRzne
        } else {
            Route::Rzne
        }
    }
}

pub fn plan_route(c: &Circuit, d: &DeviceModel, nc: &NoiseConfig, mc: &MitigationConfig) -> Result<RoutePlan> {
    mc.validate()?;
    let esp = compute_esp(c, &nc.effective_device(d))?;
    let latency = compute_latency(c, d)?;
    let t1_min = c
        .touched_qubits()
        .into_iter()
        .map(|q| d.t1(q))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .reduce(f64::min);
    let slzne = nc.thermal_enabled && t1_min.is_some_and(|t1| latency > mc.slzne_latency_fraction * t1);
    let mut plan = RoutePlan {
        esp,
        latency,
        t1_min,
        slzne,
        route: Route::Rzne,
    };
    plan.route = if esp.r <= mc.esp_threshold {
        Route::Cut
    } else {
        plan.direct_route()
    };
    Ok(plan)
}

/// Applies the direct route of `plan` to an already-measured distribution.
fn apply_direct(noisy: &Distribution, plan: &RoutePlan, mc: &MitigationConfig) -> Result<Distribution> {
    if plan.esp.is_zero() {
        return Err(Error::ZeroReliability);
    }
    let decayed = match (plan.slzne, plan.t1_min) {
        (true, Some(t1)) => slzne(noisy, plan.latency, t1, mc.top_k)?,
        _ => noisy.clone(),
    };
    rzne_state(&decayed, plan.esp, None)
}

/// SLZNE (when latency warrants it) followed by RZNE on a given noisy
/// distribution of `c`; never cuts.
pub fn mitigate_distribution(
    noisy: &Distribution,
    c: &Circuit,
    d: &DeviceModel,
    nc: &NoiseConfig,
    mc: &MitigationConfig,
) -> Result<Distribution> {
    let plan = plan_route(c, d, nc, mc)?;
    apply_direct(noisy, &plan, mc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub distribution: Distribution,
    pub plan: RoutePlan,
    /// The route actually taken; differs from `plan.route` when cutting fails.
    pub route: Route,
    /// Why a planned cut was abandoned.
    pub cut_error: Option<Error>,
}

pub fn mitigate_pipeline(c: &Circuit, d: &DeviceModel, nc: &NoiseConfig, mc: &MitigationConfig) -> Result<Distribution> {
    run_pipeline(&Backend::exact(d, *nc), c, mc).map(|o| o.distribution)
}

/// Low-ESP circuits are cut and mitigated per variant; if no cut fits the
/// budget the direct route is used instead.
pub fn run_pipeline(backend: &Backend<'_>, c: &Circuit, mc: &MitigationConfig) -> Result<PipelineOutcome> {
    let plan = plan_route(c, backend.device, &backend.noise, mc)?;
    let mut cut_error = None;
    if plan.route == Route::Cut {
        match cutqc_mc_with(backend, c, mc) {
            Ok(out) => {
                return Ok(PipelineOutcome {
                    distribution: out.distribution,
                    plan,
                    route: Route::Cut,
                    cut_error: None,
                })
            }
            Err(e) => cut_error = Some(e),
        }
    }
    let noisy = backend.execute(c, 0)?;
    Ok(PipelineOutcome {
        distribution: apply_direct(&noisy, &plan, mc)?,
        plan,
        route: plan.direct_route(),
        cut_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{generate_benchmark, Benchmark, GateKind};

    #[test]
    fn short_qaoa_skips_slzne() {
        let c = generate_benchmark(&Benchmark::qaoa(4)).unwrap();
        let plan = plan_route(&c, &DeviceModel::bundled(), &NoiseConfig::default(), &MitigationConfig::default()).unwrap();
        assert_eq!(plan.route, Route::Rzne);
        assert!(!plan.slzne);
    }

    #[test]
    fn low_esp_routes_to_cutting() {
        let mut d = DeviceModel::bundled();
        // Two CNOTs at 1 - sqrt(0.05) each.
        d.set_gate_error(GateKind::Cnot, 1.0 - 0.05f64.sqrt()).unwrap();
        d.set_gate_error(GateKind::H, 0.0).unwrap();
        let c = generate_benchmark(&Benchmark::ghz(3)).unwrap();
        let plan = plan_route(&c, &d, &NoiseConfig::depolarizing_only(), &MitigationConfig::default()).unwrap();
        assert!((plan.esp.r - 0.05).abs() < 1e-12);
        assert_eq!(plan.route, Route::Cut);
    }

    #[test]
    fn long_latency_with_thermal_noise_enables_slzne() {
        let c = generate_benchmark(&Benchmark::vqe(2, 1)).unwrap();
        let mut d = DeviceModel::bundled();
        d.set_duration(GateKind::Measure, 0.8 * d.t1(0).unwrap()).unwrap();
        let mc = MitigationConfig::default();
        assert!(plan_route(&c, &d, &NoiseConfig::thermal_only(), &mc).unwrap().slzne);
        assert!(!plan_route(&c, &d, &NoiseConfig::depolarizing_only(), &mc).unwrap().slzne);
    }

    #[test]
    fn noiseless_pipeline_is_identity() {
        let c = generate_benchmark(&Benchmark::hs(3, 1)).unwrap();
        let d = DeviceModel::bundled();
        let nc = NoiseConfig::noiseless();
        let noisy = crate::sim::simulate(&c, &d, &nc).unwrap();
        let out = mitigate_pipeline(&c, &d, &nc, &MitigationConfig::default()).unwrap();
        assert!(out.total_variation(&noisy).unwrap() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let mut mc = MitigationConfig::default();
        assert!(mc.validate().is_ok());
        mc.esp_threshold = 1.0;
        assert!(mc.validate().is_err());
        let mc = MitigationConfig {
            top_k: Some(0),
            ..MitigationConfig::default()
        };
        assert!(mc.validate().is_err());
    }
}
