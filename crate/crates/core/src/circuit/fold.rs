use crate::circuit::Circuit;
use crate::error::{Error, Result};

/// Global folding `U (U^dagger U)^folds` as an explicit gate list.
///
/// `U^dagger` is built gate by gate in reverse order, so the composed unitary
/// equals `U` exactly.
pub fn fold_global(c: &Circuit, folds: usize) -> Result<Circuit> {
    if c.has_measurements() {
        return Err(Error::MeasureInFold);
    }
    let forward = c.gates();
    let backward: Vec<_> = forward
        .iter()
        .rev()
        .map(|g| g.inverse().expect("unitary gate has an inverse"))
        .collect();
    let mut gates = Vec::with_capacity(forward.len() * (2 * folds + 1));
    gates.extend_from_slice(forward);
    for _ in 0..folds {
        gates.extend(backward.iter().cloned());
        gates.extend_from_slice(forward);
    }
    Circuit::from_gates(c.width(), gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};

    #[test]
    fn zero_folds_is_identity() {
        let c = Circuit::from_gates(2, [Gate::single(GateKind::H, 0), Gate::two(GateKind::Cnot, 0, 1)]).unwrap();
        assert_eq!(fold_global(&c, 0).unwrap(), c);
    }

    #[test]
    fn hadamard_folds_to_three() {
        let c = Circuit::from_gates(1, [Gate::single(GateKind::H, 0)]).unwrap();
        let f = fold_global(&c, 1).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.gates().iter().all(|g| g.kind == GateKind::H));
    }

    #[test]
    fn gate_count_scales_and_inverse_is_reversed() {
        let c = Circuit::from_gates(
            2,
            [
                Gate::single(GateKind::T, 0),
                Gate::rotation(GateKind::Rx, 1, 0.3),
                Gate::two(GateKind::Cnot, 0, 1),
            ],
        )
        .unwrap();
        let f = fold_global(&c, 2).unwrap();
        assert_eq!(f.len(), 5 * c.len());
        assert_eq!(f.gates()[3], Gate::two(GateKind::Cnot, 0, 1));
        assert_eq!(f.gates()[4], Gate::rotation(GateKind::Rx, 1, -0.3));
        assert_eq!(f.gates()[5], Gate::single(GateKind::Tdg, 0));
    }

    #[test]
    fn rejects_measurements() {
        let c = Circuit::from_gates(1, [Gate::single(GateKind::X, 0), Gate::measure(0)]).unwrap();
        assert_eq!(fold_global(&c, 1), Err(Error::MeasureInFold));
    }
}
