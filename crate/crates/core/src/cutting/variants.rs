use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::cutting::plan::CutPlan;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MeasureBasis {
    X,
    Y,
    Z,
}

impl MeasureBasis {
    pub const ALL: [MeasureBasis; 3] = [MeasureBasis::X, MeasureBasis::Y, MeasureBasis::Z];

    /// Rotation taking this basis onto the computational one.
    fn rotation(self, q: usize) -> Vec<Gate> {
        match self {
            MeasureBasis::X => vec![Gate::single(GateKind::H, q)],
            MeasureBasis::Y => vec![Gate::single(GateKind::Sdg, q), Gate::single(GateKind::H, q)],
            MeasureBasis::Z => vec![],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrepState {
    Zero,
    One,
    Plus,
    PlusI,
}

impl PrepState {
    pub const ALL: [PrepState; 4] = [PrepState::Zero, PrepState::One, PrepState::Plus, PrepState::PlusI];

    fn gates(self, q: usize) -> Vec<Gate> {
        match self {
            PrepState::Zero => vec![],
            PrepState::One => vec![Gate::single(GateKind::X, q)],
            PrepState::Plus => vec![Gate::single(GateKind::H, q)],
            PrepState::PlusI => vec![Gate::single(GateKind::H, q), Gate::single(GateKind::S, q)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpstreamVariant {
    /// Measurement basis per cut, in plan order.
    pub bases: Vec<MeasureBasis>,
    pub circuit: Circuit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DownstreamVariant {
    /// Prepared state per cut, in plan order.
    pub preps: Vec<PrepState>,
    pub circuit: Circuit,
}

/// Every executable circuit a plan needs. Upstream variants are ordered with
/// the first cut's basis varying fastest, likewise for downstream preps.
#[derive(Debug, Clone, PartialEq)]
pub struct Subcircuits {
    pub upstream: Vec<UpstreamVariant>,
    pub downstream: Vec<DownstreamVariant>,
}

impl Subcircuits {
    pub fn len(&self) -> usize {
        self.upstream.len() + self.downstream.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All variant circuits, upstream first.
    pub fn circuits(&self) -> Vec<&Circuit> {
        self.upstream
            .iter()
            .map(|v| &v.circuit)
            .chain(self.downstream.iter().map(|v| &v.circuit))
            .collect()
    }

    /// The variants measuring every cut in Z and preparing every cut in `|0>`.
    pub fn base(&self) -> (&UpstreamVariant, &DownstreamVariant) {
        let up = self
            .upstream
            .iter()
            .find(|v| v.bases.iter().all(|&b| b == MeasureBasis::Z))
            .expect("Z-basis variant");
        (up, &self.downstream[0])
    }
}

/// Mixed-radix digits of `index`, least significant first.
pub(crate) fn digits(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = index % radix;
            index /= radix;
            d
        })
        .collect()
}

/// Upstream and downstream bodies in local qubit indices.
fn split_bodies(c: &Circuit, plan: &CutPlan) -> Result<(Vec<Gate>, Vec<Gate>)> {
    plan.check_against(c)?;
    let local = |qs: &[usize], g: &Gate| {
        let mut g = g.clone();
        g.qubits = g
            .qubits
            .iter()
            .map(|q| qs.iter().position(|x| x == q).expect("qubit in part"))
            .collect();
        g
    };
    let mut up = Vec::new();
    let mut down = Vec::new();
    for (g, &part) in c.gates().iter().zip(&plan.subcircuit_assignment) {
        if part == 0 {
            up.push(local(&plan.upstream_qubits, g));
        } else {
            down.push(local(&plan.downstream_qubits, g));
        }
    }
    Ok((up, down))
}

/// Builds `3^K` upstream and `4^K` downstream variant circuits.
pub fn build_subcircuits(c: &Circuit, plan: &CutPlan) -> Result<Subcircuits> {
    let (up_body, down_body) = split_bodies(c, plan)?;
    let k = plan.cuts.len();
    let up_cut: Vec<usize> = plan
        .cuts
        .iter()
        .map(|w| plan.upstream_local(w.qubit).expect("cut qubit upstream"))
        .collect();
    let down_cut: Vec<usize> = plan
        .cuts
        .iter()
        .map(|w| plan.downstream_local(w.qubit).expect("cut qubit downstream"))
        .collect();

    let mut upstream = Vec::new();
    for index in 0..3usize.pow(k as u32) {
        let bases: Vec<MeasureBasis> = digits(index, 3, k).into_iter().map(|d| MeasureBasis::ALL[d]).collect();
        let mut gates = up_body.clone();
        for (&b, &q) in bases.iter().zip(&up_cut) {
            gates.extend(b.rotation(q));
            gates.push(Gate::measure(q));
        }
        upstream.push(UpstreamVariant {
            bases,
            circuit: Circuit::from_gates(plan.upstream_qubits.len(), gates)?,
        });
    }

    let mut downstream = Vec::new();
    for index in 0..4usize.pow(k as u32) {
        let preps: Vec<PrepState> = digits(index, 4, k).into_iter().map(|d| PrepState::ALL[d]).collect();
        let mut gates: Vec<Gate> = preps.iter().zip(&down_cut).flat_map(|(p, &q)| p.gates(q)).collect();
        gates.extend(down_body.iter().cloned());
        downstream.push(DownstreamVariant {
            preps,
            circuit: Circuit::from_gates(plan.downstream_qubits.len(), gates)?,
        });
    }
    Ok(Subcircuits { upstream, downstream })
}
