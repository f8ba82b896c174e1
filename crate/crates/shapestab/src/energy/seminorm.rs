//! Harmonic projections on sphere grids and the seminorms `[u]_β`, `[[u]]_s`.

use super::perimeter::spectral_derivative;
use crate::error::{domain, precondition, Result};
use crate::geometry::{GridLayout, SphereGrid};
use crate::par::sum_rows;
use crate::special_fn::{ball_volume, legendre_normalized};
use crate::spectral::{marchaud_eigenvalue, SpectralParams, SpectralTable};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Real orthonormal harmonic coefficients, grouped by degree. On `S¹` degree
/// `k ≥ 1` holds `[cos, sin]`; on `S²` degree `l` holds `2l+1` entries ordered
/// `m = 0, (cos 1, sin 1), …, (cos l, sin l)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZonalCoefficients {
    pub n: usize,
    pub k_max: usize,
    pub coeffs: Vec<Vec<f64>>,
    /// Largest nodal deviation of the truncated expansion from the samples.
    pub reconstruction_error: f64,
}

impl ZonalCoefficients {
    /// `Σ_j a_{k,j}²` for each degree.
    pub fn degree_energy(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.iter().map(|a| a * a).sum())
            .collect()
    }

    /// `Σ a²`.
    pub fn l2_squared(&self) -> f64 {
        self.degree_energy().iter().sum()
    }

    /// `Σ_k w_k Σ_j a_{k,j}²`.
    pub fn weighted(&self, mut w: impl FnMut(usize) -> f64) -> f64 {
        self.degree_energy()
            .iter()
            .enumerate()
            .map(|(k, e)| w(k) * e)
            .sum()
    }
}

/// Largest degree the grid resolves exactly in products of two harmonics.
pub fn max_degree(grid: &SphereGrid) -> usize {
    match grid.layout {
        GridLayout::Circle { m } => (m - 1) / 2,
        GridLayout::GaussAzimuth { n_theta, n_phi } => (n_theta - 1).min((n_phi - 1) / 2),
    }
}

/// Values of the real orthonormal basis at node `i`, grouped like
/// [`ZonalCoefficients::coeffs`].
fn basis_at(grid: &SphereGrid, i: usize, k_max: usize) -> Vec<Vec<f64>> {
    let z = &grid.nodes[i];
    match grid.n {
        2 => {
            let phi = z[1].atan2(z[0]);
            let mut out = vec![vec![1.0 / (2.0 * PI).sqrt()]];
            let c = 1.0 / PI.sqrt();
            for k in 1..=k_max {
                let (s, co) = (k as f64 * phi).sin_cos();
                out.push(vec![c * co, c * s]);
            }
            out
        }
        _ => {
            let phi = z[1].atan2(z[0]);
            let p = legendre_normalized(k_max, z[2]);
            (0..=k_max)
                .map(|l| {
                    let mut v = Vec::with_capacity(2 * l + 1);
                    v.push(p[l][0]);
                    for (m, &plm) in p[l].iter().enumerate().take(l + 1).skip(1) {
                        let (s, c) = (m as f64 * phi).sin_cos();
                        let a = std::f64::consts::SQRT_2 * plm;
                        v.push(a * c);
                        v.push(a * s);
                    }
                    v
                })
                .collect()
        }
    }
}

/// Projects grid samples onto harmonics of degree `≤ k_max`.
pub fn zonal_coefficients(grid: &SphereGrid, u: &[f64], k_max: usize) -> Result<ZonalCoefficients> {
    if u.len() != grid.len() {
        return Err(domain(format!(
            "{} samples for a grid of {} nodes",
            u.len(),
            grid.len()
        )));
    }
    let kmax_grid = max_degree(grid);
    if k_max > kmax_grid {
        return Err(precondition(format!(
            "degree {k_max} exceeds the grid limit {kmax_grid}"
        )));
    }
    let basis: Vec<Vec<Vec<f64>>> = (0..grid.len()).map(|i| basis_at(grid, i, k_max)).collect();
    let mut coeffs: Vec<Vec<f64>> = basis[0].iter().map(|v| vec![0.0; v.len()]).collect();
    for (i, b) in basis.iter().enumerate() {
        let wu = grid.weights[i] * u[i];
        for (ck, bk) in coeffs.iter_mut().zip(b) {
            for (c, y) in ck.iter_mut().zip(bk) {
                *c += wu * y;
            }
        }
    }
    let mut rec = 0.0f64;
    for (i, b) in basis.iter().enumerate() {
        let v: f64 = coeffs
            .iter()
            .zip(b)
            .map(|(ck, bk)| ck.iter().zip(bk).map(|(a, y)| a * y).sum::<f64>())
            .sum();
        rec = rec.max((v - u[i]).abs());
    }
    Ok(ZonalCoefficients {
        n: grid.n,
        k_max,
        coeffs,
        reconstruction_error: rec,
    })
}

/// Grid samples of `Σ_k Σ_j a_{k,j} Y_{k,j}` with coefficients grouped as in
/// [`ZonalCoefficients::coeffs`].
pub fn synthesize(grid: &SphereGrid, coeffs: &[Vec<f64>]) -> Vec<f64> {
    let k_max = coeffs.len().saturating_sub(1);
    (0..grid.len())
        .map(|i| {
            basis_at(grid, i, k_max)
                .iter()
                .zip(coeffs)
                .map(|(b, c)| b.iter().zip(c).map(|(y, a)| y * a).sum::<f64>())
                .sum()
        })
        .collect()
}

/// `[u]_β²` evaluated two ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormPair {
    /// `∫∫ |ω-ξ|^β |u(ω)-u(ξ)|²` by the product grid rule.
    pub direct: f64,
    /// `Σ_k λ_k Σ_j a_{k,j}²` at the largest degree the grid resolves.
    pub spectral: f64,
    /// Nodal residual of the harmonic expansion used by `spectral`.
    pub reconstruction_error: f64,
}

/// Double grid sum `Σ_i Σ_j w_i w_j |z_i - z_j|^β (u_i - u_j)²`.
pub fn seminorm_beta_direct(grid: &SphereGrid, u: &[f64], beta: f64) -> f64 {
    let m = grid.len();
    sum_rows(m, |i| {
        let mut s = 0.0;
        for j in 0..m {
            if j != i {
                let d = u[i] - u[j];
                s += grid.weights[j] * grid.chord(i, j).powf(beta) * d * d;
            }
        }
        grid.weights[i] * s
    })
}

pub fn seminorm_beta(grid: &SphereGrid, u: &[f64], beta: f64) -> Result<SeminormPair> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    let k_max = max_degree(grid);
    let z = zonal_coefficients(grid, u, k_max)?;
    let table = SpectralTable::new(SpectralParams::new(grid.n, beta, k_max.max(2))?);
    let spectral = z.weighted(|k| table.lambda[k]);
    Ok(SeminormPair {
        direct: seminorm_beta_direct(grid, u, beta),
        spectral,
        reconstruction_error: z.reconstruction_error,
    })
}

/// `[[u]]_s²`. For `s < 1` the spectral form with the hypersingular
/// multipliers `(1-s)/ω_{N-1} λ_k(1-N-2s)`; for `s = 1` the squared tangential
/// gradient of the trigonometric (or harmonic) interpolant.
pub fn seminorm_s(grid: &SphereGrid, u: &[f64], s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(domain(format!("s must lie in (0, 1], got {s}")));
    }
    let n = grid.n;
    if s == 1.0 && n == 2 {
        if u.len() != grid.len() {
            return Err(domain("sample count does not match the grid"));
        }
        let du = spectral_derivative(u);
        return Ok(grid.integrate(|i, _| du[i] * du[i]));
    }
    let z = zonal_coefficients(grid, u, max_degree(grid))?;
    if s == 1.0 {
        return Ok(z.weighted(|k| (k * (k + n - 2)) as f64));
    }
    let b = 1.0 - n as f64 - 2.0 * s;
    let pref = (1.0 - s) / ball_volume(n - 1);
    Ok(z.weighted(|k| pref * marchaud_eigenvalue(n, b, k)))
}
