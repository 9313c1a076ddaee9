//! Evaluation metrics for mitigated results.

use crate::error::{Error, Result};
use crate::sim::Distribution;

/// Absolute observable error.
pub fn abe(ideal: f64, observed: f64) -> f64 {
    (ideal - observed).abs()
}

/// Mitigated error relative to the unmitigated error; below 1 means the
/// mitigation helped.
pub fn abr(ideal: f64, mitigated: f64, noisy: f64) -> Result<f64> {
    let denom = abe(ideal, noisy);
    if denom == 0.0 {
        return Err(Error::ZeroNoisyError);
    }
    Ok(abe(ideal, mitigated) / denom)
}

/// `(sum_s sqrt(p(s) q(s)))^2`.
pub fn hellinger_fidelity(p: &Distribution, q: &Distribution) -> Result<f64> {
    p.same_width(q)?;
    let bc: f64 = p.probs().iter().zip(q.probs()).map(|(a, b)| (a * b).sqrt()).sum();
    Ok((bc * bc).min(1.0))
}
