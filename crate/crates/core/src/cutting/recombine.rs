use crate::cutting::plan::CutPlan;
use crate::cutting::variants::digits;
use crate::error::{Error, Result};
use crate::sim::Distribution;

/// Downstream coefficients of `P in {I, X, Y, Z}` over the preparations
/// `|0>, |1>, |+>, |+i>`.
const PREP_COEFFS: [[f64; 4]; 4] = [
    [1.0, 1.0, 0.0, 0.0],
    [-1.0, -1.0, 2.0, 0.0],
    [-1.0, -1.0, 0.0, 2.0],
    [1.0, -1.0, 0.0, 0.0],
];

/// Upstream basis index (X, Y, Z) used to estimate each Pauli; `I` reuses Z.
const PAULI_BASIS: [usize; 4] = [2, 0, 1, 2];

/// Full-circuit distribution from variant results in [`build_subcircuits`]
/// order, clamped and renormalised.
///
/// [`build_subcircuits`]: crate::cutting::build_subcircuits
pub fn recombine(plan: &CutPlan, upstream: &[Distribution], downstream: &[Distribution]) -> Result<Distribution> {
    Distribution::from_quasi(plan.width, recombine_raw(plan, upstream, downstream)?)
}

/// Reconstructed quasi-probabilities before clamping.
pub fn recombine_raw(plan: &CutPlan, upstream: &[Distribution], downstream: &[Distribution]) -> Result<Vec<f64>> {
    let k = plan.cuts.len();
    let (wu, wd) = (plan.upstream_qubits.len(), plan.downstream_qubits.len());
    check(upstream, 3usize.pow(k as u32), wu, "upstream")?;
    check(downstream, 4usize.pow(k as u32), wd, "downstream")?;

    let up_cut: Vec<usize> = plan
        .cuts
        .iter()
        .map(|w| plan.upstream_local(w.qubit).ok_or_else(|| Error::InvalidCutPlan(format!("cut qubit {} not upstream", w.qubit))))
        .collect::<Result<_>>()?;
    let cut_mask: usize = up_cut.iter().map(|&l| 1 << l).sum();
    let up_full: Vec<usize> = (0..1usize << wu)
        .map(|i| scatter(i & !cut_mask, &plan.upstream_qubits))
        .collect();
    let down_full: Vec<usize> = (0..1usize << wd).map(|j| scatter(j, &plan.downstream_qubits)).collect();

    let scale = 0.5f64.powi(k as i32);
    let mut out = vec![0.0; 1 << plan.width];
    for pauli_index in 0..4usize.pow(k as u32) {
        let paulis = digits(pauli_index, 4, k);

        let basis_index: usize = paulis
            .iter()
            .rev()
            .fold(0, |acc, &p| acc * 3 + PAULI_BASIS[p]);
        let sign_mask: usize = paulis
            .iter()
            .zip(&up_cut)
            .filter(|(&p, _)| p != 0)
            .map(|(_, &l)| 1 << l)
            .sum();
        let mut a = vec![0.0; 1 << wu];
        for (i, &p) in upstream[basis_index].probs().iter().enumerate() {
            let sign = if (i & sign_mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            a[i & !cut_mask] += sign * p;
        }

        let mut d = vec![0.0; 1 << wd];
        for (s, dist) in downstream.iter().enumerate() {
            let coeff: f64 = digits(s, 4, k)
                .iter()
                .zip(&paulis)
                .map(|(&prep, &p)| PREP_COEFFS[p][prep])
                .product();
            if coeff != 0.0 {
                d.iter_mut().zip(dist.probs()).for_each(|(x, y)| *x += coeff * y);
            }
        }

        for (i, &ai) in a.iter().enumerate() {
            if ai == 0.0 || i & cut_mask != 0 {
                continue;
            }
            for (j, &dj) in d.iter().enumerate() {
                out[up_full[i] | down_full[j]] += scale * ai * dj;
            }
        }
    }
    Ok(out)
}

/// Moves bit `l` of a local index to bit `qubits[l]`.
fn scatter(local: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .filter(|(l, _)| local >> l & 1 == 1)
        .map(|(_, &q)| 1 << q)
        .sum()
}

fn check(results: &[Distribution], expected: usize, width: usize, side: &str) -> Result<()> {
    if results.len() != expected {
        return Err(Error::MissingVariant(format!(
            "{} {side} results for {expected} variants",
            results.len()
        )));
    }
    if let Some(d) = results.iter().find(|d| d.num_qubits() != width) {
        return Err(Error::WidthMismatch(format!(
            "{side} result over {} qubits, subcircuit has {width}",
            d.num_qubits()
        )));
    }
    Ok(())
}
