//! Wire cutting into two subcircuits, variant generation, Pauli-basis
//! recombination, and the mitigate-then-combine / combine-then-mitigate
//! orderings.

mod plan;
mod recombine;
mod variants;

pub use plan::{find_cut, CutPlan, WireCut};
pub use recombine::{recombine, recombine_raw};
pub use variants::{build_subcircuits, DownstreamVariant, MeasureBasis, PrepState, Subcircuits, UpstreamVariant};

use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::device::DeviceModel;
use crate::error::Result;
use crate::mitigation::{rzne_state, MitigationConfig};
use crate::reliability::{compute_esp, Reliability};
use crate::sim::{Backend, Distribution, NoiseConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CutOutcome {
    pub plan: CutPlan,
    pub distribution: Distribution,
    /// ESP of the Z-measured upstream and `|0>`-prepared downstream variants.
    pub upstream_esp: Reliability,
    pub downstream_esp: Reliability,
    /// Reliability used to mitigate the recombined result, if any.
    pub combined_reliability: Option<Reliability>,
}

struct Executed {
    plan: CutPlan,
    subs: Subcircuits,
    upstream: Vec<Distribution>,
    downstream: Vec<Distribution>,
    upstream_device: DeviceModel,
    downstream_device: DeviceModel,
}

impl Executed {
    fn base_esps(&self, nc: &NoiseConfig) -> Result<(Reliability, Reliability)> {
        let (up, down) = self.subs.base();
        Ok((
            compute_esp(&up.circuit, &nc.effective_device(&self.upstream_device))?,
            compute_esp(&down.circuit, &nc.effective_device(&self.downstream_device))?,
        ))
    }

    fn outcome(self, nc: &NoiseConfig, distribution: Distribution, combined: Option<Reliability>) -> Result<CutOutcome> {
        let (upstream_esp, downstream_esp) = self.base_esps(nc)?;
        Ok(CutOutcome {
            plan: self.plan,
            distribution,
            upstream_esp,
            downstream_esp,
            combined_reliability: combined,
        })
    }
}

fn execute(backend: &Backend<'_>, c: &Circuit, max_cuts: usize) -> Result<Executed> {
    let plan = find_cut(c, max_cuts)?;
    let subs = build_subcircuits(c, &plan)?;
    let upstream_device = backend.device.restrict(&plan.upstream_qubits)?;
    let downstream_device = backend.device.restrict(&plan.downstream_qubits)?;
    let up_backend = backend.with_device(&upstream_device);
    let down_backend = backend.with_device(&downstream_device);
    let offset = subs.upstream.len() as u64;
    let upstream = subs
        .upstream
        .par_iter()
        .enumerate()
        .map(|(i, v)| up_backend.execute(&v.circuit, i as u64))
        .collect::<Result<Vec<_>>>()?;
    let downstream = subs
        .downstream
        .par_iter()
        .enumerate()
        .map(|(i, v)| down_backend.execute(&v.circuit, offset + i as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(Executed {
        plan,
        subs,
        upstream,
        downstream,
        upstream_device,
        downstream_device,
    })
}

/// Cut, run every variant and recombine without mitigation.
pub fn cutqc_unmitigated_with(backend: &Backend<'_>, c: &Circuit, mc: &MitigationConfig) -> Result<CutOutcome> {
    mc.validate()?;
    let ex = execute(backend, c, mc.max_cuts)?;
    let dist = recombine(&ex.plan, &ex.upstream, &ex.downstream)?;
    ex.outcome(&backend.noise, dist, None)
}

/// Mitigate-then-combine: each variant is extrapolated with its own ESP.
pub fn cutqc_mc_with(backend: &Backend<'_>, c: &Circuit, mc: &MitigationConfig) -> Result<CutOutcome> {
    mc.validate()?;
    let mut ex = execute(backend, c, mc.max_cuts)?;
    let nc = backend.noise;
    let up_dev = nc.effective_device(&ex.upstream_device);
    let down_dev = nc.effective_device(&ex.downstream_device);
    for (v, dist) in ex.subs.upstream.iter().zip(ex.upstream.iter_mut()) {
        *dist = rzne_state(dist, compute_esp(&v.circuit, &up_dev)?, None)?;
    }
    for (v, dist) in ex.subs.downstream.iter().zip(ex.downstream.iter_mut()) {
        *dist = rzne_state(dist, compute_esp(&v.circuit, &down_dev)?, None)?;
    }
    let dist = recombine(&ex.plan, &ex.upstream, &ex.downstream)?;
    ex.outcome(&nc, dist, None)
}

/// Combine-then-mitigate: the recombined result is extrapolated with the
/// geometric mean of the two subcircuit ESPs.
pub fn cutqc_cm_with(backend: &Backend<'_>, c: &Circuit, mc: &MitigationConfig) -> Result<CutOutcome> {
    mc.validate()?;
    let ex = execute(backend, c, mc.max_cuts)?;
    let combined = recombine(&ex.plan, &ex.upstream, &ex.downstream)?;
    let (up, down) = ex.base_esps(&backend.noise)?;
    let r = Reliability::geometric_mean(&[up, down])?;
    let dist = rzne_state(&combined, r, None)?;
    ex.outcome(&backend.noise, dist, Some(r))
}

pub fn cutqc_mc(c: &Circuit, d: &DeviceModel, nc: &NoiseConfig, mc: &MitigationConfig) -> Result<Distribution> {
    cutqc_mc_with(&Backend::exact(d, *nc), c, mc).map(|o| o.distribution)
}

pub fn cutqc_cm(c: &Circuit, d: &DeviceModel, nc: &NoiseConfig, mc: &MitigationConfig) -> Result<Distribution> {
    cutqc_cm_with(&Backend::exact(d, *nc), c, mc).map(|o| o.distribution)
}

pub fn cutqc_unmitigated(c: &Circuit, d: &DeviceModel, nc: &NoiseConfig, mc: &MitigationConfig) -> Result<Distribution> {
    cutqc_unmitigated_with(&Backend::exact(d, *nc), c, mc).map(|o| o.distribution)
}
