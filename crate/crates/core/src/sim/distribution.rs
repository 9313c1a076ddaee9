use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::PauliString;
use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;
const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// Probability vector over the `2^n` computational basis states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    n: usize,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates length, sign and normalisation. Round-off negatives down to
    /// `-1e-12` are clamped to zero.
    pub fn new(n: usize, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1 << n {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for {n} qubits",
                probs.len()
            )));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NEGATIVE_TOLERANCE {
                return Err(Error::InvalidDistribution(format!("entry {i} = {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Distribution { n, probs })
    }

    /// Clamps negatives to zero and renormalises to unit sum.
    pub fn from_quasi(n: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for {n} qubits",
                values.len()
            )));
        }
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidDistribution("non-finite entry".into()));
            }
            *v = v.max(0.0);
        }
        let sum: f64 = values.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("no positive mass left after clamping".into()));
        }
        values.iter_mut().for_each(|v| *v /= sum);
        Ok(Distribution { n, probs: values })
    }

    pub fn uniform(n: usize) -> Self {
        let dim = 1usize << n;
        Distribution {
            n,
            probs: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn point(n: usize, index: usize) -> Self {
        let mut probs = vec![0.0; 1 << n];
        probs[index] = 1.0;
        Distribution { n, probs }
    }

    /// Builds from `(bitstring, probability)` pairs; unspecified states get 0.
    pub fn from_bitstrings(n: usize, entries: &[(&str, f64)]) -> Result<Self> {
        let mut probs = vec![0.0; 1 << n];
        for (bits, p) in entries {
            probs[parse_bitstring(n, bits)?] += p;
        }
        Distribution::new(n, probs)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// `(index, probability)` of the `k` most likely states; ties go to the
    /// lower index.
    pub fn top_states(&self, k: usize) -> Vec<(usize, f64)> {
        top_k_indices(&self.probs, k)
            .into_iter()
            .map(|i| (i, self.probs[i]))
            .collect()
    }

    pub fn bitstring(&self, index: usize) -> String {
        bitstring(self.n, index)
    }

    pub fn total_variation(&self, other: &Distribution) -> Result<f64> {
        self.same_width(other)?;
        Ok(0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    pub(crate) fn same_width(&self, other: &Distribution) -> Result<()> {
        if self.n != other.n {
            return Err(Error::WidthMismatch(format!(
                "distributions over {} and {} qubits",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

/// Indices of the `k` largest entries, ordered by descending value with ties
/// broken by ascending index.
pub fn top_k_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Bitstring with qubit 0 leftmost.
pub fn bitstring(n: usize, index: usize) -> String {
    (0..n).map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(n: usize, bits: &str) -> Result<usize> {
    if bits.len() != n {
        return Err(Error::WidthMismatch(format!("bitstring `{bits}` for {n} qubits")));
    }
    bits.chars().enumerate().try_fold(0usize, |acc, (q, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << q),
        _ => Err(Error::InvalidDistribution(format!("bad bitstring `{bits}`"))),
    })
}

/// Multinomial sampling of `shots` outcomes; returns empirical frequencies.
pub fn sample_counts(dist: &Distribution, shots: u64, seed: u64) -> Result<Distribution> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shots must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0;
    for &p in &dist.probs {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let last_nonzero = dist.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; dist.probs.len()];
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let i = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
        counts[i] += 1;
    }
    let probs = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    Ok(Distribution { n: dist.n, probs })
}

/// `sum_s p(s) (-1)^{popcount(s & z_mask)}` for an I/Z Pauli string.
pub fn expectation(dist: &Distribution, obs: &PauliString) -> Result<f64> {
    if !obs.is_diagonal() {
        return Err(Error::NonDiagonalObservable(obs.to_string()));
    }
    if obs.len() != dist.n {
        return Err(Error::WidthMismatch(format!(
            "observable `{obs}` on {} qubits",
            dist.n
        )));
    }
    let mask = obs.z_mask();
    Ok(dist
        .probs
        .iter()
        .enumerate()
        .map(|(s, p)| if (s & mask).count_ones().is_multiple_of(2) { *p } else { -*p })
        .sum())
}
