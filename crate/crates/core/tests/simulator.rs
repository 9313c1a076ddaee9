use std::f64::consts::FRAC_1_SQRT_2;

use ffzne::circuit::{compute_latency, emit_qasm, fold_global, generate_benchmark, parse_qasm};
use ffzne::sim::{expectation, sample_counts, DensityState};
use ffzne::*;
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

fn small_benchmarks() -> Vec<Benchmark> {
    let mut out = Vec::new();
    for n in 2..=6 {
        out.push(Benchmark::ghz(n));
        out.push(Benchmark::hs(n, 1));
        out.push(Benchmark::hs(n, 2));
        out.push(Benchmark::qaoa(n));
        out.push(Benchmark::vqe(n, 1));
        out.push(Benchmark::vqe(n, 3));
    }
    out
}

/// Dense matrix of a gate on the full register, written out from the
/// textbook definitions. Bit `q` of a basis index is qubit `q`.
fn dense(g: &Gate, n: usize) -> Vec<Vec<C>> {
    let c = |re: f64, im: f64| C::new(re, im);
    let t = g.angle.unwrap_or(0.0) / 2.0;
    let one: [[C; 2]; 2] = match g.kind {
        GateKind::H => [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]],
        GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        GateKind::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        GateKind::S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        GateKind::Sdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
        GateKind::T => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), C::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        GateKind::Tdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), C::from_polar(1.0, -std::f64::consts::FRAC_PI_4)]],
        GateKind::Rx => [[c(t.cos(), 0.0), c(0.0, -t.sin())], [c(0.0, -t.sin()), c(t.cos(), 0.0)]],
        GateKind::Ry => [[c(t.cos(), 0.0), c(-t.sin(), 0.0)], [c(t.sin(), 0.0), c(t.cos(), 0.0)]],
        GateKind::Rz => [[C::from_polar(1.0, -t), c(0.0, 0.0)], [c(0.0, 0.0), C::from_polar(1.0, t)]],
        _ => [[c(0.0, 0.0); 2]; 2],
    };
    let dim = 1 << n;
    let mut m = vec![vec![c(0.0, 0.0); dim]; dim];
    for j in 0..dim {
        match g.kind {
            GateKind::Cnot => {
                let (ctl, tgt) = (g.qubits[0], g.qubits[1]);
                let i = if j >> ctl & 1 == 1 { j ^ (1 << tgt) } else { j };
                m[i][j] = c(1.0, 0.0);
            }
            GateKind::Cz => {
                let both = j >> g.qubits[0] & 1 == 1 && j >> g.qubits[1] & 1 == 1;
                m[j][j] = c(if both { -1.0 } else { 1.0 }, 0.0);
            }
            GateKind::Rzz => {
                let odd = (j >> g.qubits[0] ^ j >> g.qubits[1]) & 1 == 1;
                m[j][j] = C::from_polar(1.0, if odd { t } else { -t });
            }
            _ => {
                let q = g.qubits[0];
                let b = j >> q & 1;
                for a in 0..2 {
                    let i = (j & !(1 << q)) | (a << q);
                    m[i][j] = one[a][b];
                }
            }
        }
    }
    m
}

fn brute_force(c: &Circuit) -> Vec<f64> {
    let n = c.width();
    let mut psi = vec![C::new(0.0, 0.0); 1 << n];
    psi[0] = C::new(1.0, 0.0);
    for g in c.gates().iter().filter(|g| g.kind != GateKind::Measure) {
        let u = dense(g, n);
        psi = u.iter().map(|row| row.iter().zip(&psi).map(|(a, b)| a * b).sum()).collect();
    }
    psi.iter().map(|a| a.norm_sqr()).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn noiseless_simulation_matches_unitary_product() {
    let d = DeviceModel::bundled();
    for b in small_benchmarks() {
        let c = generate_benchmark(&b).unwrap();
        let got = simulate(&c, &d, &NoiseConfig::noiseless()).unwrap();
        assert!(max_diff(got.probs(), &brute_force(&c)) < 1e-10, "{}", b.label());
    }
}

#[test]
fn every_gate_kind_matches_the_dense_oracle() {
    let d = DeviceModel::bundled();
    let mut gates = vec![Gate::single(GateKind::H, 0), Gate::single(GateKind::H, 1), Gate::rotation(GateKind::Ry, 2, 0.7)];
    for k in [GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::Sdg, GateKind::T, GateKind::Tdg, GateKind::H] {
        gates.push(Gate::single(k, 1));
        gates.push(Gate::rotation(GateKind::Rx, 1, 0.3));
    }
    gates.push(Gate::rotation(GateKind::Rz, 0, 1.1));
    gates.push(Gate::two(GateKind::Cz, 0, 2));
    gates.push(Gate::rzz(1, 2, 0.9));
    gates.push(Gate::two(GateKind::Cnot, 2, 0));
    gates.push(Gate::rotation(GateKind::Rx, 0, -0.4));
    let c = Circuit::from_gates(3, gates).unwrap().measure_all().unwrap();
    let got = simulate(&c, &d, &NoiseConfig::noiseless()).unwrap();
    assert!(max_diff(got.probs(), &brute_force(&c)) < 1e-12);
}

#[test]
fn ghz_is_half_and_half() {
    let d = DeviceModel::bundled();
    for n in 2..=8 {
        let c = generate_benchmark(&Benchmark::ghz(n)).unwrap();
        let p = simulate(&c, &d, &NoiseConfig::noiseless()).unwrap();
        let ones = (1 << n) - 1;
        for (i, &x) in p.probs().iter().enumerate() {
            let want = if i == 0 || i == ones { 0.5 } else { 0.0 };
            assert!((x - want).abs() < 1e-12);
        }
    }
}

#[test]
fn qasm_round_trip_is_structural_identity() {
    for b in small_benchmarks() {
        let c = generate_benchmark(&b).unwrap();
        assert_eq!(parse_qasm(&emit_qasm(&c)).unwrap(), c, "{}", b.label());
    }
}

#[test]
fn folding_preserves_noiseless_output() {
    let d = DeviceModel::bundled();
    for b in small_benchmarks() {
        let c = generate_benchmark(&b).unwrap();
        let base = simulate(&c, &d, &NoiseConfig::noiseless()).unwrap();
        for f in 0..=2 {
            let folded = fold_global(&c.unitary_part(), f).unwrap().measure_all().unwrap();
            let folded = simulate(&folded, &d, &NoiseConfig::noiseless()).unwrap();
            assert!(max_diff(folded.probs(), base.probs()) < 1e-12);
        }
    }
}

#[test]
fn depolarizing_distance_grows_with_scale() {
    let d = DeviceModel::bundled();
    for b in small_benchmarks() {
        let c = generate_benchmark(&b).unwrap();
        let ideal = simulate(&c, &d, &NoiseConfig::noiseless()).unwrap();
        let mut last = 0.0;
        for s in [0.0, 0.5, 1.0, 2.0] {
            let noisy = simulate(&c, &d, &NoiseConfig::depolarizing_only().with_scale(s)).unwrap();
            let tv = noisy.total_variation(&ideal).unwrap();
            assert!(tv >= last - 1e-12, "{} scale {s}", b.label());
            last = tv;
        }
    }
}

#[test]
fn saturated_depolarizing_gives_uniform() {
    let d = DeviceModel::bundled();
    for b in small_benchmarks() {
        let c = generate_benchmark(&b).unwrap();
        let p = simulate(&c, &d, &NoiseConfig::depolarizing_only().with_scale(1e12)).unwrap();
        let u = 1.0 / (1 << c.width()) as f64;
        assert!(p.probs().iter().all(|x| (x - u).abs() < 1e-12));
        assert!(expectation(&p, &PauliString::all_z(c.width())).unwrap().abs() < 1e-12);
    }
}

#[test]
fn depolarizing_examples() {
    let mut s = DensityState::zero_state(1);
    s.apply_depolarizing(0.2, &[0]).unwrap();
    assert!((s.diagonal()[0] - 0.9).abs() < 1e-15);
    assert!((s.diagonal()[1] - 0.1).abs() < 1e-15);

    let h = FRAC_1_SQRT_2;
    let mut s = DensityState::from_pure(&[C::new(h, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, h)]).unwrap();
    s.apply_depolarizing(1.0, &[0, 1]).unwrap();
    let mixed = DensityState::maximally_mixed(2);
    for (a, b) in s.matrix().iter().zip(mixed.matrix()) {
        assert!((a - b).norm() < 1e-15);
    }
}

#[test]
fn thermal_examples() {
    let (t1, t2) = (50e-6, 70e-6);
    let mut s = DensityState::zero_state(1);
    s.apply_gate(&Gate::single(GateKind::X, 0)).unwrap();
    s.apply_thermal_relaxation(0, t1, t2, t1).unwrap();
    assert!((s.diagonal()[1] - (-1.0f64).exp()).abs() < 1e-12);

    let t = -t1 * 0.9f64.ln();
    let mut s = DensityState::zero_state(2);
    s.apply_gate(&Gate::single(GateKind::X, 0)).unwrap();
    s.apply_gate(&Gate::single(GateKind::X, 1)).unwrap();
    for q in 0..2 {
        s.apply_thermal_relaxation(q, t1, t2, t).unwrap();
    }
    assert!((s.diagonal()[3] - 0.81).abs() < 1e-12);

    let mut s = DensityState::zero_state(1);
    s.apply_gate(&Gate::single(GateKind::H, 0)).unwrap();
    s.apply_thermal_relaxation(0, t1, t2, 30e-6).unwrap();
    assert!((s.entry(0, 1).norm() - 0.5 * (-30e-6 / t2).exp()).abs() < 1e-12);

    assert!(s.apply_thermal_relaxation(0, t1, 2.5 * t1, 1e-6).is_err());
}

#[test]
fn sampling_examples() {
    let half = Distribution::uniform(1);
    let s = sample_counts(&half, 1_000_000, 7).unwrap();
    assert!((s.prob(0) - 0.5).abs() < 0.01);
    assert_eq!(s, sample_counts(&half, 1_000_000, 7).unwrap());
    let point = Distribution::point(3, 5);
    assert_eq!(sample_counts(&point, 13, 99).unwrap(), point);
}

#[test]
fn expectation_examples() {
    let zz: PauliString = "ZZ".parse().unwrap();
    assert!(expectation(&Distribution::uniform(2), &zz).unwrap().abs() < 1e-15);
    assert_eq!(expectation(&Distribution::point(2, 0), &zz).unwrap(), 1.0);
    let ghz = Distribution::from_bitstrings(3, &[("000", 0.5), ("111", 0.5)]).unwrap();
    assert_eq!(expectation(&ghz, &"ZII".parse().unwrap()).unwrap(), 0.0);
    assert!(expectation(&ghz, &"XII".parse().unwrap()).is_err());
}

fn random_state(n: usize, seed: &[f64]) -> DensityState {
    // Mixture of two pure states built from the seed values.
    let dim = 1 << n;
    let amp = |k: usize| -> Vec<C> {
        let v: Vec<C> = (0..dim).map(|i| C::new(seed[(2 * i + k) % seed.len()], seed[(2 * i + k + 1) % seed.len()] - 0.5)).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|a| a / norm).collect()
    };
    let (a, b) = (amp(0), amp(3));
    let w = seed[0].clamp(0.05, 0.95);
    let data = (0..dim * dim)
        .map(|ij| {
            let (i, j) = (ij / dim, ij % dim);
            a[i] * a[j].conj() * w + b[i] * b[j].conj() * (1.0 - w)
        })
        .collect();
    DensityState::from_matrix(n, data).unwrap()
}

fn psd_spot_check(s: &DensityState, probe: &[f64]) -> f64 {
    let dim = s.dim();
    let v: Vec<C> = (0..dim).map(|i| C::new(probe[i % probe.len()] - 0.5, probe[(i * 7 + 1) % probe.len()] - 0.5)).collect();
    let mut acc = C::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            acc += v[i].conj() * s.entry(i, j) * v[j];
        }
    }
    acc.re
}

proptest! {
    #[test]
    fn channels_preserve_trace_and_hermiticity(
        seed in prop::collection::vec(0.05f64..1.0, 8..16),
        p in 0.0f64..=1.0,
        dur in 0.0f64..200e-6,
        ratio in 0.1f64..2.0,
    ) {
        let n = 3;
        let mut s = random_state(n, &seed);
        s.apply_depolarizing(p, &[0, 2]).unwrap();
        s.apply_thermal_relaxation(1, 80e-6, 80e-6 * ratio, dur).unwrap();
        s.apply_gate(&Gate::two(GateKind::Cnot, 1, 2)).unwrap();
        prop_assert!((s.trace() - C::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(s.hermiticity_error() == 0.0);
        prop_assert!(psd_spot_check(&s, &seed) >= -1e-8);
    }

    #[test]
    fn maximally_mixed_is_a_depolarizing_fixed_point(p in 0.0f64..=1.0, q in 0usize..3) {
        let mut s = DensityState::maximally_mixed(3);
        s.apply_depolarizing(p, &[q]).unwrap();
        s.apply_depolarizing(p, &[q, (q + 1) % 3]).unwrap();
        let m = DensityState::maximally_mixed(3);
        for (a, b) in s.matrix().iter().zip(m.matrix()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn thermal_relaxation_composes(
        seed in prop::collection::vec(0.05f64..1.0, 8..16),
        a in 0.0f64..100e-6,
        b in 0.0f64..100e-6,
    ) {
        let (t1, t2) = (90e-6, 60e-6);
        let mut split = random_state(2, &seed);
        let mut whole = split.clone();
        split.apply_thermal_relaxation(0, t1, t2, a).unwrap();
        split.apply_thermal_relaxation(0, t1, t2, b).unwrap();
        whole.apply_thermal_relaxation(0, t1, t2, a + b).unwrap();
        for (x, y) in split.matrix().iter().zip(whole.matrix()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn appending_a_gate_never_shortens_latency(
        b in 0usize..small_len(),
        kind in prop::sample::select(vec![GateKind::H, GateKind::X, GateKind::Rz, GateKind::Cnot, GateKind::Rzz]),
        q in 0usize..6,
    ) {
        let bench = small_benchmarks()[b];
        let c = generate_benchmark(&bench).unwrap().unitary_part();
        let n = c.width();
        let g = match kind.arity() {
            1 => Gate::new(kind, vec![q % n], kind.is_rotation().then_some(0.3)).unwrap(),
            _ => Gate::new(kind, vec![q % n, (q + 1) % n], kind.is_rotation().then_some(0.3)).unwrap(),
        };
        let d = DeviceModel::bundled();
        let before = compute_latency(&c, &d).unwrap();
        let mut longer = c.clone();
        longer.push(g).unwrap();
        prop_assert!(compute_latency(&longer, &d).unwrap() >= before);
    }
}

fn small_len() -> usize {
    small_benchmarks().len()
}
