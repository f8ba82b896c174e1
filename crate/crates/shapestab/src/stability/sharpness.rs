use crate::energy::g_beta_radial;
use crate::error::{domain, precondition, Error, Result};
use crate::geometry::annulus_family;
use crate::par::map_slice;
use log::warn;
use serde::{Deserialize, Serialize};

/// Accepted range of the fitted exponent.
pub const SLOPE_RANGE: (f64, f64) = (1.95, 2.05);
/// Minimum number of points kept in the fit.
pub const MIN_FIT_POINTS: usize = 6;
/// Minimum span of the kept asymmetries, in decades.
pub const MIN_DECADES: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopePoint {
    pub h: f64,
    pub delta: f64,
    pub deficit: f64,
    pub used: bool,
}

/// Least-squares fit of `log D_β` against `log δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub n: usize,
    pub beta: f64,
    pub points: Vec<SlopePoint>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    pub decades: f64,
    pub pass: bool,
}

/// `12` logarithmically spaced values from `1.5e-4` to `1e-1`.
pub fn default_h_grid() -> Vec<f64> {
    let (a, b) = (1.5e-4f64.ln(), 1e-1f64.ln());
    let mut h: Vec<f64> = (0..12)
        .map(|i| (a + (b - a) * i as f64 / 11.0).exp())
        .collect();
    h[0] = 1.5e-4;
    h[11] = 1e-1;
    h
}

/// `(slope, intercept, rms residual)` of `y ≈ slope x + intercept`.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Deficit against asymmetry on the annulus-swap family. The extreme values
/// of `h` are excluded from the fit.
pub fn sharpness_fit(n: usize, beta: f64, h_grid: &[f64]) -> Result<SlopeFit> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    if h_grid.len() < MIN_FIT_POINTS + 2 {
        return Err(precondition(format!(
            "need at least {} values of h, got {}",
            MIN_FIT_POINTS + 2,
            h_grid.len()
        )));
    }
    if let Some(h) = h_grid.iter().find(|h| !(**h > 1e-4 && **h <= 1e-1)) {
        return Err(precondition(format!("h = {h} outside (1e-4, 1e-1]")));
    }
    let mut hs = h_grid.to_vec();
    hs.sort_by(f64::total_cmp);
    let evals: Vec<Result<(f64, f64)>> = map_slice(&hs, |&h| {
        let p = annulus_family(h, n)?;
        let delta = p.fraenkel_asymmetry().value;
        let d = g_beta_radial(&p, beta)?.deficit;
        Ok((delta, d))
    });
    let last = hs.len() - 1;
    let mut points = Vec::with_capacity(hs.len());
    for (i, (h, r)) in hs.iter().zip(evals).enumerate() {
        let (delta, deficit) = r?;
        let interior = i != 0 && i != last;
        let positive = deficit > 0.0 && delta > 0.0;
        if interior && !positive {
            warn!("dropping h = {h:e}: deficit {deficit:e}, asymmetry {delta:e}");
        }
        points.push(SlopePoint {
            h: *h,
            delta,
            deficit,
            used: interior && positive,
        });
    }
    let used: Vec<&SlopePoint> = points.iter().filter(|p| p.used).collect();
    if used.len() < MIN_FIT_POINTS {
        return Err(Error::NonConvergence {
            what: "sharpness fit (too few positive deficits)".into(),
            estimate: used.len() as f64,
            tolerance: MIN_FIT_POINTS as f64,
        });
    }
    let x: Vec<f64> = used.iter().map(|p| p.delta.ln()).collect();
    let y: Vec<f64> = used.iter().map(|p| p.deficit.ln()).collect();
    let (slope, intercept, residual) = least_squares(&x, &y);
    let xmin = x.iter().copied().fold(f64::INFINITY, f64::min);
    let xmax = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let decades = (xmax - xmin) / std::f64::consts::LN_10;
    let pass = decades >= MIN_DECADES && slope >= SLOPE_RANGE.0 && slope <= SLOPE_RANGE.1;
    Ok(SlopeFit {
        n,
        beta,
        points,
        slope,
        intercept,
        residual,
        decades,
        pass,
    })
}
