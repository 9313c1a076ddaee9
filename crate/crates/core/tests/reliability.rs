use ffzne::circuit::{fold_global, generate_benchmark};
use ffzne::reliability::esp_factors;
use ffzne::*;
use proptest::prelude::*;

fn device(one: f64, two: f64, readout: f64) -> DeviceModel {
    DeviceModel::uniform(12, one, two, readout, 90e-6, 80e-6, 35e-9, 400e-9, 4e-6).unwrap()
}

fn benchmarks() -> Vec<Benchmark> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.extend([Benchmark::ghz(n), Benchmark::hs(n, 2), Benchmark::qaoa(n), Benchmark::vqe(n, 2)]);
    }
    out
}

#[test]
fn ghz4_hand_product() {
    // H, three CNOTs and four measurements.
    let d = device(0.001, 0.02, 0.03);
    let c = generate_benchmark(&Benchmark::ghz(4)).unwrap();
    let want = 0.999 * 0.98f64.powi(3) * 0.97f64.powi(4);
    assert!((compute_esp(&c, &d).unwrap().r - want).abs() < 1e-15);
}

#[test]
fn unmeasured_qubits_do_not_count() {
    let d = device(0.0, 0.0, 0.1);
    let c = Circuit::from_gates(3, [Gate::two(GateKind::Cnot, 0, 1), Gate::measure(1)]).unwrap();
    assert!((compute_esp(&c, &d).unwrap().r - 0.9).abs() < 1e-15);
}

proptest! {
    #[test]
    fn esp_is_multiplicative(
        a in 0usize..28, b in 0usize..28,
        one in 0.0f64..0.05, two in 0.0f64..0.2, ro in 0.0f64..0.1,
    ) {
        let d = device(one, two, ro);
        let (ba, bb) = (benchmarks()[a], benchmarks()[b]);
        let (ca, cb) = (generate_benchmark(&ba).unwrap(), generate_benchmark(&bb).unwrap());
        let width = ca.width().max(cb.width());
        let gates = ca.unitary_part().gates().iter().chain(cb.gates()).cloned().collect::<Vec<_>>();
        let joined = Circuit::from_gates(width, gates).unwrap();
        let lhs = compute_esp(&joined, &d).unwrap().r;
        let rhs = compute_esp(&ca.unitary_part(), &d).unwrap().r * compute_esp(&cb, &d).unwrap().r;
        prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300));
    }

    #[test]
    fn a_noisy_gate_strictly_lowers_esp(
        b in 0usize..28,
        one in 0.0f64..0.05, two in 1e-6f64..0.2,
        q in 0usize..8,
    ) {
        let d = device(one, two, 0.02);
        let c = generate_benchmark(&benchmarks()[b]).unwrap().unitary_part();
        let n = c.width();
        let mut longer = c.clone();
        longer.push(Gate::two(GateKind::Cnot, q % n, (q + 1) % n)).unwrap();
        prop_assert!(compute_esp(&longer, &d).unwrap().r < compute_esp(&c, &d).unwrap().r);
    }

    #[test]
    fn folding_raises_the_gate_factor_to_an_odd_power(
        b in 0usize..28, f in 0usize..=2,
        one in 0.0f64..0.05, two in 0.0f64..0.2, ro in 0.0f64..0.1,
    ) {
        let d = device(one, two, ro);
        let c = generate_benchmark(&benchmarks()[b]).unwrap();
        let unitary: f64 = c.gates().iter().filter(|g| g.kind != GateKind::Measure)
            .map(|g| 1.0 - d.gate_error(g).unwrap())
            .product();
        let meas = (1.0 - ro).powi(c.width() as i32);
        let folded = fold_global(&c.unitary_part(), f).unwrap().measure_all().unwrap();
        let got = compute_esp(&folded, &d).unwrap().r;
        let want = unitary.powi(2 * f as i32 + 1) * meas;
        prop_assert!((got - want).abs() <= 1e-13 * want.max(1e-300));
        let split = esp_factors(&folded, &d).unwrap();
        prop_assert!((split.measurements - meas).abs() < 1e-15);
    }
}
