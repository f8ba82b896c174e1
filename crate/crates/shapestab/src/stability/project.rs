use crate::error::{domain, Error, Result};
use crate::geometry::{SphereGrid, SUP_NORM_SLACK};
use crate::special_fn::ball_volume;
use log::{debug, warn};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Samples with the low-degree content removed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projected {
    pub u: Vec<f64>,
    /// Factor applied to bring `‖u‖_∞` back to `1/2` (1 when untouched).
    pub rescale: f64,
}

/// Samples fitted to an exact volume and barycenter at a given amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constrained {
    pub u: Vec<f64>,
    pub t: f64,
    /// Added constant.
    pub shift: f64,
    /// Added multiple of each coordinate function.
    pub tilt: Vec<f64>,
    pub iterations: usize,
    pub volume_error: f64,
    pub barycenter_error: f64,
    pub rescale: f64,
}

pub const VOLUME_TOL: f64 = 1e-8;
pub const BARYCENTER_TOL: f64 = 1e-6;
const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX: usize = 50;
const RESCALE_ROUNDS: usize = 8;

fn sup(u: &[f64]) -> f64 {
    u.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn coordinate(z: &[f64; 3], j: usize) -> f64 {
    z[j]
}

/// Removes the degree-0 and degree-1 harmonic components of `u`. The grid
/// integrates products of two such harmonics exactly, so the projection is
/// exact on the nodes.
fn drop_low_degrees(grid: &SphereGrid, u: &[f64]) -> Vec<f64> {
    let area = grid.area();
    let mean = grid.integrate(|i, _| u[i]) / area;
    let mut v: Vec<f64> = u.iter().map(|x| x - mean).collect();
    for j in 0..grid.n {
        let num = grid.integrate(|i, z| v[i] * coordinate(z, j));
        let den = grid.integrate(|_, z| coordinate(z, j).powi(2));
        let a = num / den;
        for (vi, z) in v.iter_mut().zip(&grid.nodes) {
            *vi -= a * coordinate(z, j);
        }
    }
    v
}

/// Mean-zero, first-moment-free projection of `u`, rescaled to `‖u‖_∞ ≤ 1/2`
/// with a warning if needed.
pub fn constraint_project(grid: &SphereGrid, u: &[f64]) -> Result<Projected> {
    if u.len() != grid.len() {
        return Err(domain(format!(
            "{} samples for a grid of {} nodes",
            u.len(),
            grid.len()
        )));
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(domain("samples must be finite"));
    }
    let mut v = drop_low_degrees(grid, u);
    let s = sup(&v);
    let mut rescale = 1.0;
    if s > 0.5 {
        rescale = 0.5 / s;
        if rescale < 1.0 - 1e-9 {
            warn!("projection raised the sup norm to {s:.6}; rescaling by {rescale:.6}");
        }
        v.iter_mut().for_each(|x| *x *= rescale);
    }
    Ok(Projected { u: v, rescale })
}

/// Residuals `(|E| - ω_N, ∫ z_j R^{N+1}/(N+1))` and their Jacobian in
/// `(shift, tilt)` for `R = 1 + t v`.
fn residual(grid: &SphereGrid, v: &[f64], t: f64) -> (DVector<f64>, DMatrix<f64>) {
    let n = grid.n;
    let ni = n as i32;
    let dim = n + 1;
    let mut f = DVector::zeros(dim);
    let mut jac = DMatrix::zeros(dim, dim);
    let basis = |z: &[f64; 3], a: usize| if a == 0 { 1.0 } else { z[a - 1] };
    for (i, z) in grid.nodes.iter().enumerate() {
        let w = grid.weights[i];
        let r = 1.0 + t * v[i];
        let rn1 = r.powi(ni - 1);
        let rn = rn1 * r;
        f[0] += w * rn / n as f64;
        for a in 0..dim {
            jac[(0, a)] += w * rn1 * t * basis(z, a);
        }
        for j in 0..n {
            f[j + 1] += w * z[j] * rn * r / (n + 1) as f64;
            for a in 0..dim {
                jac[(j + 1, a)] += w * z[j] * rn * t * basis(z, a);
            }
        }
    }
    f[0] -= ball_volume(n);
    (f, jac)
}

fn newton(grid: &SphereGrid, u: &[f64], t: f64) -> Result<(Vec<f64>, f64, Vec<f64>, usize)> {
    let n = grid.n;
    let mut v = u.to_vec();
    let mut coef = DVector::<f64>::zeros(n + 1);
    for it in 0..NEWTON_MAX {
        let (f, jac) = residual(grid, &v, t);
        if f.amax() <= NEWTON_TOL {
            return Ok((v, coef[0], coef.rows(1, n).iter().copied().collect(), it));
        }
        let step = jac.lu().solve(&(-f.clone())).ok_or_else(|| {
            domain("constraint Jacobian is singular (t = 0 with a nonzero residual?)")
        })?;
        coef += &step;
        for (i, z) in grid.nodes.iter().enumerate() {
            let mut d = step[0];
            for j in 0..n {
                d += step[j + 1] * z[j];
            }
            v[i] += d;
        }
    }
    let (f, _) = residual(grid, &v, t);
    Err(Error::NonConvergence {
        what: "volume and barycenter constraints".into(),
        estimate: f.amax(),
        tolerance: NEWTON_TOL,
    })
}

/// Finds `v = u + c + b·z` with `|E_{t,v}| = ω_N` and barycenter at the
/// origin. If `‖v‖_∞` exceeds `1/2`, `u` is shrunk and the fit repeated.
pub fn enforce_constraints(grid: &SphereGrid, u: &[f64], t: f64) -> Result<Constrained> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("amplitude must be positive, got {t}")));
    }
    let base = constraint_project(grid, u)?;
    let mut scale = base.rescale;
    let mut w = base.u.clone();
    for _ in 0..RESCALE_ROUNDS {
        let (v, shift, tilt, iterations) = newton(grid, &w, t)?;
        let s = sup(&v);
        if s <= 0.5 + SUP_NORM_SLACK {
            let (f, _) = residual(grid, &v, t);
            let vol = f[0].abs();
            let total = ball_volume(grid.n) + f[0];
            let bary = (1..=grid.n).map(|j| f[j] * f[j]).sum::<f64>().sqrt() / total;
            return Ok(Constrained {
                u: v,
                t,
                shift,
                tilt,
                iterations,
                volume_error: vol,
                barycenter_error: bary,
                rescale: scale,
            });
        }
        let k = 0.5 / s * (1.0 - 1e-9);
        debug!("constraint fit has sup norm {s:.6}; shrinking the perturbation by {k:.6}");
        w.iter_mut().for_each(|x| *x *= k);
        scale *= k;
    }
    Err(Error::NonConvergence {
        what: "sup-norm rescaling of the constrained perturbation".into(),
        estimate: sup(&w),
        tolerance: 0.5,
    })
}
