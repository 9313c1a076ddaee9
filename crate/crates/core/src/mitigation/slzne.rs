use crate::error::{Error, Result};
use crate::mitigation::rzne::selection;
use crate::sim::Distribution;

/// Per-state exponential extrapolation of amplitude damping.
///
/// A state with `c > 0` excited qubits is scaled by `e^{c t / t1}`. The
/// all-zero state takes `(1 - p) e^{t / t1}`, clamped to [0, 1]. Negative
/// entries are clamped and the vector renormalised.
pub fn slzne(noisy: &Distribution, t: f64, t1: f64, top_k: Option<usize>) -> Result<Distribution> {
    Distribution::from_quasi(noisy.num_qubits(), slzne_unnormalized(noisy, t, t1, top_k)?)
}

/// The extrapolated vector before clamping and renormalisation.
pub fn slzne_unnormalized(noisy: &Distribution, t: f64, t1: f64, top_k: Option<usize>) -> Result<Vec<f64>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidConfig(format!("latency {t} must be finite and non-negative")));
    }
    if !(t1.is_finite() && t1 > 0.0) {
        return Err(Error::InvalidConfig(format!("t1 {t1} must be finite and positive")));
    }
    let mut probs = noisy.probs().to_vec();
    let rate = t / t1;
    for i in selection(noisy.probs(), top_k)? {
        let c = i.count_ones();
        probs[i] = if c == 0 {
            ((1.0 - probs[i]) * rate.exp()).clamp(0.0, 1.0)
        } else {
            probs[i] * (c as f64 * rate).exp()
        };
    }
    Ok(probs)
}
