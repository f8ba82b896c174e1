//! Perimeters of planar nearly-spherical sets.
//!
//! For `s ∈ (0,1)` the volume integral over `E × E^c` is traded for a double
//! boundary integral,
//! `∫_E∫_{E^c} |x-y|^{-N-s} = 1/(s(N+s-2)) ∫_{∂E}∫_{∂E} ν_x·ν_y |x-y|^{2-N-s}`,
//! which in the plane reads `s^{-2} ∫∫ x'(φ)·x'(φ̃) |x(φ)-x(φ̃)|^{-s} dφ dφ̃`.
//! The weakly singular factor is integrated exactly against trigonometric
//! interpolants (periodic product quadrature).

use super::shape::Estimate;
use crate::error::{precondition, Result};
use crate::geometry::{GridLayout, NearlySphericalShape};
use crate::par::sum_rows;
use crate::special_fn::{ball_volume, ln_gamma_signed};
use std::f64::consts::PI;

/// Largest accepted discrete slope of the boundary radius.
pub const MAX_SLOPE: f64 = 1e6;

fn circle_len(shape: &NearlySphericalShape) -> Result<usize> {
    match shape.grid.layout {
        GridLayout::Circle { m } => Ok(m),
        _ => Err(precondition(
            "perimeters of nearly-spherical sets are implemented for N = 2 only",
        )),
    }
}

fn check_lipschitz(r: &[f64]) -> Result<()> {
    let m = r.len();
    let h = 2.0 * PI / m as f64;
    for i in 0..m {
        let slope = (r[(i + 1) % m] - r[i]).abs() / h;
        if !slope.is_finite() || slope > MAX_SLOPE {
            return Err(precondition(format!(
                "boundary samples are not Lipschitz at node {i}: slope {slope:e}"
            )));
        }
    }
    Ok(())
}

/// Derivative of the trigonometric interpolant of equispaced samples.
pub fn spectral_derivative(f: &[f64]) -> Vec<f64> {
    let m = f.len();
    let kmax = (m - 1) / 2;
    let tw = |j: usize| 2.0 * PI * (j % m) as f64 / m as f64;
    let mut a = vec![0.0; kmax + 1];
    let mut b = vec![0.0; kmax + 1];
    for k in 1..=kmax {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (j, &v) in f.iter().enumerate() {
            let (s, c) = tw(j * k).sin_cos();
            sa += v * c;
            sb += v * s;
        }
        a[k] = 2.0 * sa / m as f64;
        b[k] = 2.0 * sb / m as f64;
    }
    (0..m)
        .map(|j| {
            let mut d = 0.0;
            for k in 1..=kmax {
                let (s, c) = tw(j * k).sin_cos();
                d += k as f64 * (b[k] * c - a[k] * s);
            }
            d
        })
        .collect()
}

/// Product weights `W_j` with `Σ_j W_{(i-j) mod m} f_j ≈ ∫ (2|sin((φ_i-φ)/2)|)^{-s} f(φ) dφ`.
pub fn log_sine_weights(m: usize, s: f64) -> Vec<f64> {
    let half = m / 2;
    let mut c = vec![0.0; half + 1];
    // Fourier coefficients of (2|sin(x/2)|)^{-s}
    c[0] = (ln_gamma_signed(1.0 - s).unwrap().0 - 2.0 * ln_gamma_signed(1.0 - s / 2.0).unwrap().0)
        .exp();
    for k in 0..half {
        let kf = k as f64;
        c[k + 1] = c[k] * (kf + s / 2.0) / (kf + 1.0 - s / 2.0);
    }
    (0..m)
        .map(|j| {
            let x = 2.0 * PI * j as f64 / m as f64;
            let mut w = c[0];
            let top = if m.is_multiple_of(2) { half - 1 } else { half };
            for (k, ck) in c.iter().enumerate().take(top + 1).skip(1) {
                w += 2.0 * ck * (k as f64 * x).cos();
            }
            if m.is_multiple_of(2) {
                w += c[half] * (PI * j as f64).cos();
            }
            2.0 * PI / m as f64 * w
        })
        .collect()
}

fn boundary_integral(center: [f64; 2], r: &[f64], s: f64) -> f64 {
    let m = r.len();
    let dr = spectral_derivative(r);
    let h = 2.0 * PI / m as f64;
    let mut x = Vec::with_capacity(m);
    let mut xp = Vec::with_capacity(m);
    for i in 0..m {
        let (sn, cs) = (h * i as f64).sin_cos();
        x.push([center[0] + r[i] * cs, center[1] + r[i] * sn]);
        xp.push([dr[i] * cs - r[i] * sn, dr[i] * sn + r[i] * cs]);
    }
    let w = log_sine_weights(m, s);
    let total = sum_rows(m, |i| {
        let mut acc = 0.0;
        for j in 0..m {
            let dot = xp[i][0] * xp[j][0] + xp[i][1] * xp[j][1];
            let g = if i == j {
                dot.sqrt().powf(-s)
            } else {
                let dx = x[i][0] - x[j][0];
                let dy = x[i][1] - x[j][1];
                let chord = 2.0 * (0.5 * h * (i as f64 - j as f64)).sin().abs();
                ((dx * dx + dy * dy).sqrt() / chord).powf(-s)
            };
            let k = (i + m - j) % m;
            acc += w[k] * dot * g;
        }
        acc
    });
    h * total / (s * s)
}

/// `P_s(E)` for a planar nearly-spherical set, `s ∈ (0,1]`, normalized by
/// `(1-s)/ω_{N-1}`. The error estimate compares against the grid with every
/// other node.
pub fn p_s_shape(shape: &NearlySphericalShape, s: f64) -> Result<Estimate> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(crate::error::domain(format!(
            "s must lie in (0, 1], got {s}"
        )));
    }
    shape.validate()?;
    let m = circle_len(shape)?;
    let r = shape.radii();
    check_lipschitz(&r)?;
    let eval = |r: &[f64]| -> f64 {
        if s == 1.0 {
            let dr = spectral_derivative(r);
            let h = 2.0 * PI / r.len() as f64;
            r.iter()
                .zip(&dr)
                .map(|(a, b)| h * (a * a + b * b).sqrt())
                .sum()
        } else {
            (1.0 - s) / ball_volume(1) * boundary_integral([shape.center[0], shape.center[1]], r, s)
        }
    };
    let value = eval(&r);
    let error = if m % 2 == 0 && m >= 16 {
        let coarse: Vec<f64> = r.iter().step_by(2).copied().collect();
        (value - eval(&coarse)).abs()
    } else {
        f64::NAN
    };
    Ok(Estimate { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphereGrid;

    #[test]
    fn derivative_of_trig_samples() {
        let m = 32;
        let f: Vec<f64> = (0..m)
            .map(|i| (3.0 * 2.0 * PI * i as f64 / m as f64).sin())
            .collect();
        let d = spectral_derivative(&f);
        for (i, v) in d.iter().enumerate() {
            let e = 3.0 * (3.0 * 2.0 * PI * i as f64 / m as f64).cos();
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_perimeter() {
        let b = NearlySphericalShape::ball(SphereGrid::circle(64).unwrap());
        assert!((p_s_shape(&b, 1.0).unwrap().value - 2.0 * PI).abs() < 1e-12);
    }
}
