use serde::{Deserialize, Serialize};

use crate::circuit::{fold_global, Circuit, PauliString};
use crate::device::DeviceModel;
use crate::error::{Error, Result};
use crate::sim::{expectation, Backend, NoiseConfig};

/// Noise scale factors used by the folding baseline.
pub const DEFAULT_SCALE_FACTORS: [usize; 3] = [1, 3, 5];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DzneResult {
    pub intercept: f64,
    /// `(scale factor, expectation)` per folded circuit.
    pub points: Vec<(f64, f64)>,
}

/// Intercept at `x = 0` of the ordinary least-squares line.
pub fn linear_intercept(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} x values for {} y values", xs.len(), ys.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all scale factors coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(my - sxy / sxx * mx)
}

/// Number of global folds realising scale factor `lambda = 2 f + 1`.
pub fn folds_for_scale(lambda: usize) -> Result<usize> {
    if lambda.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!(
            "scale factor {lambda} is not odd; global folding only realises 1, 3, 5, ..."
        )));
    }
    Ok((lambda - 1) / 2)
}

/// Digital ZNE baseline: fold the unitary body, measure the observable at
/// each scale and extrapolate linearly to zero.
pub fn dzne_baseline(
    c: &Circuit,
    d: &DeviceModel,
    nc: &NoiseConfig,
    scale_factors: &[usize],
    obs: &PauliString,
) -> Result<DzneResult> {
    dzne_with(&Backend::exact(d, *nc), c, scale_factors, obs)
}

pub fn dzne_with(backend: &Backend<'_>, c: &Circuit, scale_factors: &[usize], obs: &PauliString) -> Result<DzneResult> {
    if scale_factors.len() < 2 {
        return Err(Error::InvalidConfig("DZNE needs at least two scale factors".into()));
    }
    let measured = c.measured();
    let body = c.unitary_part();
    let mut points = Vec::with_capacity(scale_factors.len());
    for (i, &lambda) in scale_factors.iter().enumerate() {
        let folded = fold_global(&body, folds_for_scale(lambda)?)?.with_measurements(measured.iter().copied())?;
        let dist = backend.execute(&folded, i as u64)?;
        points.push((lambda as f64, expectation(&dist, obs)?));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    Ok(DzneResult {
        intercept: linear_intercept(&xs, &ys)?,
        points,
    })
}
