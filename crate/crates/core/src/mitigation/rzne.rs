use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reliability::Reliability;
use crate::sim::{top_k_indices, Distribution};

/// One observation for expectation-level extrapolation: a noise scale
/// `mu = 1 - r` and the value measured at it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RznePoint {
    pub mu: f64,
    pub value: f64,
}

impl RznePoint {
    pub fn new(mu: f64, value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) || !value.is_finite() {
            return Err(Error::InvalidConfig(format!("bad extrapolation point ({mu}, {value})")));
        }
        Ok(RznePoint { mu, value })
    }

    pub fn from_reliability(r: Reliability, value: f64) -> Result<Self> {
        RznePoint::new(r.mu, value)
    }
}

/// Selected indices for a Top-K pass; `None` selects every state.
pub(crate) fn selection(probs: &[f64], top_k: Option<usize>) -> Result<Vec<usize>> {
    match top_k {
        Some(0) => Err(Error::InvalidConfig("top_k must be positive".into())),
        Some(k) => Ok(top_k_indices(probs, k.min(probs.len()))),
        None => Ok((0..probs.len()).collect()),
    }
}

/// State-level linear extrapolation to zero noise.
///
/// Inverts `p = r q + (1 - r) / 2^n` on the selected states, clamps negatives
/// and renormalises.
pub fn rzne_state(noisy: &Distribution, r: Reliability, top_k: Option<usize>) -> Result<Distribution> {
    if r.is_zero() {
        return Err(Error::ZeroReliability);
    }
    let n = noisy.num_qubits();
    let mut probs = noisy.probs().to_vec();
    let floor = (1.0 - r.r) / r.r / probs.len() as f64;
    for i in selection(noisy.probs(), top_k)? {
        probs[i] = probs[i] / r.r - floor;
    }
    Distribution::from_quasi(n, probs)
}

/// Value at `mu = 0` of the least-squares line pinned to `infinite`.
pub fn rzne_fit(points: &[RznePoint], infinite: RznePoint) -> Result<f64> {
    if infinite.mu != 1.0 {
        return Err(Error::InvalidConfig(format!(
            "infinite-noise point must sit at mu = 1, got {}",
            infinite.mu
        )));
    }
    if points.is_empty() {
        return Err(Error::DegenerateFit("no points to fit".into()));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for p in points {
        let dx = p.mu - 1.0;
        num += dx * (p.value - infinite.value);
        den += dx * dx;
    }
    if den == 0.0 {
        return Err(Error::DegenerateFit("every point lies at mu = 1".into()));
    }
    Ok(infinite.value - num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(r: f64) -> Reliability {
        Reliability::new(r).unwrap()
    }

    #[test]
    fn single_qubit_inversion() {
        let noisy = Distribution::new(1, vec![0.7, 0.3]).unwrap();
        let out = rzne_state(&noisy, rel(0.8), None).unwrap();
        assert!((out.prob(0) - 0.75).abs() < 1e-12);
        assert!((out.prob(1) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn unit_reliability_is_identity() {
        let noisy = Distribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        for k in [None, Some(2)] {
            let out = rzne_state(&noisy, rel(1.0), k).unwrap();
            assert!(out.total_variation(&noisy).unwrap() < 1e-15);
        }
    }

    #[test]
    fn zero_reliability_errors() {
        let noisy = Distribution::uniform(2);
        assert_eq!(rzne_state(&noisy, rel(0.0), None), Err(Error::ZeroReliability));
    }

    #[test]
    fn top_k_leaves_the_tail_alone_before_normalising() {
        let noisy = Distribution::new(2, vec![0.55, 0.25, 0.15, 0.05]).unwrap();
        let r = rel(0.5);
        let out = rzne_state(&noisy, r, Some(1)).unwrap();
        let head = 0.55 / 0.5 - 0.5 / 0.5 / 4.0;
        let total = head + 0.45;
        assert!((out.prob(0) - head / total).abs() < 1e-12);
        assert!((out.prob(3) - 0.05 / total).abs() < 1e-12);
        assert!(rzne_state(&noisy, r, Some(0)).is_err());
        assert_eq!(rzne_state(&noisy, r, Some(99)).unwrap(), rzne_state(&noisy, r, None).unwrap());
    }

    #[test]
    fn fit_examples() {
        let inf = RznePoint::new(1.0, 0.0).unwrap();
        let o = RznePoint::new(0.2815863814, 0.6975).unwrap();
        assert!((rzne_fit(&[o], inf).unwrap() - 0.9708).abs() < 5e-4);

        let flat = RznePoint::new(1.0, 0.3).unwrap();
        let pts = [RznePoint::new(0.2, 0.3).unwrap(), RznePoint::new(0.6, 0.3).unwrap()];
        assert!((rzne_fit(&pts, flat).unwrap() - 0.3).abs() < 1e-15);

        let line: Vec<_> = [0.1, 0.35, 0.7]
            .iter()
            .map(|&mu| RznePoint::new(mu, 0.9 - 0.9 * mu).unwrap())
            .collect();
        assert!((rzne_fit(&line, inf).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        let inf = RznePoint::new(1.0, 0.0).unwrap();
        assert!(matches!(rzne_fit(&[], inf), Err(Error::DegenerateFit(_))));
        assert!(matches!(rzne_fit(&[inf], inf), Err(Error::DegenerateFit(_))));
        let not_inf = RznePoint::new(0.9, 0.0).unwrap();
        assert!(rzne_fit(&[inf], not_inf).is_err());
    }
}
