//! Radially symmetric decreasing rearrangement by layer cake over the
//! discrete level sets.

use super::density::Density2D;
use crate::error::{domain, Result};
use crate::geometry::RadialStep;
use crate::special_fn::ball_volume;

/// Builds the decreasing step function from `(value, measure)` pieces.
fn from_pieces(n: usize, mut pieces: Vec<(f64, f64)>) -> Result<RadialStep> {
    pieces.retain(|&(v, m)| v > 0.0 && m > 0.0);
    if pieces.is_empty() {
        return Err(domain("rearrangement of a zero function"));
    }
    pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
    let w = ball_volume(n);
    let mut radii = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut vol = 0.0;
    for (v, m) in pieces {
        vol += m;
        let r = (vol / w).powf(1.0 / n as f64);
        if values.last() == Some(&v) {
            *radii.last_mut().unwrap() = r;
        } else {
            radii.push(r);
            values.push(v);
        }
    }
    RadialStep::new(n, radii, values)
}

/// `f*` for a radial step function with non-negative values.
pub fn decreasing_rearrangement(f: &RadialStep) -> Result<RadialStep> {
    if f.values.iter().any(|v| *v < 0.0) {
        return Err(domain("rearrangement needs a non-negative function"));
    }
    let w = ball_volume(f.n);
    let mut prev = 0.0f64;
    let pieces = f
        .breakpoints
        .iter()
        .zip(&f.values)
        .map(|(r, &v)| {
            let rn = r.powi(f.n as i32);
            let m = w * (rn - prev);
            prev = rn;
            (v, m)
        })
        .collect();
    from_pieces(f.n, pieces)
}

/// `f*` in the plane for a gridded density.
pub fn decreasing_rearrangement_2d(d: &Density2D) -> Result<RadialStep> {
    let mut pieces = Vec::with_capacity(d.values.len());
    for i in 0..d.nx() {
        for j in 0..d.ny() {
            pieces.push((d.value(i, j), d.cell_area(i, j)));
        }
    }
    from_pieces(2, pieces)
}

/// `|{f > τ}|` for a radial step function.
pub fn distribution(f: &RadialStep, tau: f64) -> f64 {
    let w = ball_volume(f.n);
    let mut prev = 0.0f64;
    let mut s = 0.0;
    for (r, &v) in f.breakpoints.iter().zip(&f.values) {
        let rn = r.powi(f.n as i32);
        if v > tau {
            s += w * (rn - prev);
        }
        prev = rn;
    }
    s
}

/// Whether the step function is non-increasing in the radius.
pub fn is_radially_decreasing(f: &RadialStep) -> bool {
    f.values.windows(2).all(|w| w[1] <= w[0]) && f.values.iter().all(|v| *v >= 0.0)
}
