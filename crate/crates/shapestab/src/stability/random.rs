use crate::energy::{max_degree, synthesize};
use crate::error::{precondition, Result};
use crate::geometry::SphereGrid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest degree used for random test functions.
pub const RANDOM_DEGREE: usize = 12;

/// Random band-limited samples with degrees `2..=k_max` and coefficients
/// uniform in `[-1, 1]`, damped by `1/k`.
pub fn random_band_limited(grid: &SphereGrid, k_max: usize, seed: u64) -> Result<Vec<f64>> {
    let lim = max_degree(grid);
    if k_max < 2 || k_max > lim {
        return Err(precondition(format!(
            "degree {k_max} outside [2, {lim}] for this grid"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| {
            let len = if grid.n == 2 {
                if k == 0 {
                    1
                } else {
                    2
                }
            } else {
                2 * k + 1
            };
            (0..len)
                .map(|_| {
                    if k < 2 {
                        0.0
                    } else {
                        rng.random_range(-1.0..1.0) / k as f64
                    }
                })
                .collect()
        })
        .collect();
    Ok(synthesize(grid, &coeffs))
}

/// `u / ‖u‖_∞ · sup`.
pub fn normalize_sup(u: &[f64], sup: f64) -> Vec<f64> {
    let m = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 {
        return u.to_vec();
    }
    u.iter().map(|v| v * sup / m).collect()
}
