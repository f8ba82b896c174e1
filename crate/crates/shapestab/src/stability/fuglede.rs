use super::project::{constraint_project, enforce_constraints, BARYCENTER_TOL, VOLUME_TOL};
use crate::energy::{g_beta, max_degree, zonal_coefficients, ZonalCoefficients};
use crate::error::{domain, precondition, Error, Result};
use crate::geometry::{NearlySphericalShape, SphereGrid};
use crate::spectral::{SpectralParams, SpectralTable};
use serde::{Deserialize, Serialize};

/// Largest amplitude accepted by [`fuglede_check`].
pub const T_MAX: f64 = 0.05;
/// Relative size of degree-0/1 content accepted as "projected".
const LOW_DEGREE_TOL: f64 = 1e-8;

/// `λ₁Σa² - Σλ_k a²` against the spectral-gap bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapForm {
    pub gap: f64,
    pub l2_squared: f64,
    /// `Σ_{k≤1} a²`.
    pub low_degree: f64,
    pub d_beta: f64,
    /// `D_β Σ_{k≥2} a²`.
    pub exact_bound: f64,
    /// `D_β/2 Σ a²`.
    pub half_bound: f64,
    pub slack: f64,
    pub half_slack: f64,
    pub pass: bool,
}

/// Spectral-gap quadratic form of a coefficient set. Degrees `k ≥ 2` each
/// contribute at least `D_β a²`, degree 1 contributes nothing.
pub fn spectral_gap_form(coeffs: &ZonalCoefficients, beta: f64) -> Result<GapForm> {
    let table = SpectralTable::new(SpectralParams::new(coeffs.n, beta, coeffs.k_max.max(2))?);
    let lam = &table.lambda;
    let e = coeffs.degree_energy();
    let l2: f64 = e.iter().sum();
    let gap: f64 = e
        .iter()
        .enumerate()
        .map(|(k, a)| (lam[1] - lam[k]) * a)
        .sum();
    let low = e.iter().take(2).sum::<f64>();
    let high = l2 - low;
    let exact_bound = table.d_beta * high;
    let half_bound = 0.5 * table.d_beta * l2;
    let slack = gap - exact_bound;
    Ok(GapForm {
        gap,
        l2_squared: l2,
        low_degree: low,
        d_beta: table.d_beta,
        exact_bound,
        half_bound,
        slack,
        half_slack: gap - half_bound,
        pass: slack >= -1e-9 * (lam[1] * l2).max(1.0),
    })
}

/// One amplitude of the Fuglede sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FugledeCase {
    pub n: usize,
    pub beta: f64,
    pub t: f64,
    pub u: Vec<f64>,
    pub u_l2_squared: f64,
    pub volume_error: f64,
    pub barycenter_error: f64,
    pub deficit: f64,
    pub deficit_error: f64,
    /// `D_β / 8`.
    pub constant: f64,
    pub bound: f64,
    pub slack: f64,
    /// `D_β(E_t) / (t² ‖u‖²)`.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FugledeReport {
    pub n: usize,
    pub beta: f64,
    pub cases: Vec<FugledeCase>,
    /// Polynomial extrapolation of the ratio to `t = 0` over the three
    /// smallest amplitudes.
    pub extrapolated_ratio: Option<f64>,
    /// `½(λ₁‖u‖² - [u]_β²)/‖u‖²`.
    pub predicted_ratio: f64,
    pub gap_form: GapForm,
    pub pass: bool,
}

/// Value at `x = 0` of the interpolating polynomial through `(x_i, y_i)`.
pub fn neville_at_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
        }
    }
    p[0]
}

/// Deficit of `E_{t,u}` against `(D_β/8) t² ‖u‖²` over an amplitude grid.
pub fn fuglede_check(
    grid: &SphereGrid,
    beta: f64,
    u: &[f64],
    t_grid: &[f64],
) -> Result<FugledeReport> {
    if t_grid.is_empty() {
        return Err(domain("empty amplitude grid"));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && **t <= T_MAX)) {
        return Err(precondition(format!("amplitude {t} outside (0, {T_MAX}]")));
    }
    let n = grid.n;
    let coeffs = zonal_coefficients(grid, u, max_degree(grid))?;
    let l2 = coeffs.l2_squared();
    let e = coeffs.degree_energy();
    if e[0] + e.get(1).copied().unwrap_or(0.0) > LOW_DEGREE_TOL * LOW_DEGREE_TOL * l2.max(1e-300) {
        return Err(precondition(
            "u carries degree-0 or degree-1 content; apply constraint_project first",
        ));
    }
    let gap_form = spectral_gap_form(&coeffs, beta)?;
    let constant = gap_form.d_beta / 8.0;
    let predicted_ratio = if l2 > 0.0 {
        0.5 * gap_form.gap / l2
    } else {
        0.0
    };
    let mut cases = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let fit = enforce_constraints(grid, u, t)?;
        let shape = NearlySphericalShape::new(grid.clone(), t, fit.u.clone())?;
        let g = g_beta(&shape, beta)?;
        let ul2 = grid.integrate(|i, _| fit.u[i] * fit.u[i]);
        let bound = constant * t * t * ul2;
        let slack = g.deficit - bound;
        let ok_constraints =
            fit.volume_error <= VOLUME_TOL && fit.barycenter_error <= BARYCENTER_TOL;
        cases.push(FugledeCase {
            n,
            beta,
            t,
            u: fit.u,
            u_l2_squared: ul2,
            volume_error: fit.volume_error,
            barycenter_error: fit.barycenter_error,
            deficit: g.deficit,
            deficit_error: g.error,
            constant,
            bound,
            slack,
            ratio: if ul2 > 0.0 {
                g.deficit / (t * t * ul2)
            } else {
                0.0
            },
            pass: ok_constraints && slack >= -g.error,
        });
    }
    let mut by_t: Vec<&FugledeCase> = cases.iter().collect();
    by_t.sort_by(|a, b| a.t.total_cmp(&b.t));
    let extrapolated_ratio = if l2 > 0.0 && by_t.len() >= 2 {
        let tail: Vec<&&FugledeCase> = by_t.iter().take(3).collect();
        let x: Vec<f64> = tail.iter().map(|c| c.t).collect();
        let y: Vec<f64> = tail.iter().map(|c| c.ratio).collect();
        Some(neville_at_zero(&x, &y))
    } else {
        None
    };
    let pass = gap_form.pass && cases.iter().all(|c| c.pass);
    Ok(FugledeReport {
        n,
        beta,
        cases,
        extrapolated_ratio,
        predicted_ratio,
        gap_form,
        pass,
    })
}

impl FugledeReport {
    /// Turns a failed report into a [`Error::Violation`] naming the worst case.
    pub fn into_result(self) -> Result<Self> {
        if self.pass {
            return Ok(self);
        }
        let worst = self
            .cases
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .map(|c| (format!("N={} beta={} t={}", c.n, c.beta, c.t), c.slack))
            .unwrap_or_else(|| ("spectral gap form".into(), self.gap_form.slack));
        Err(Error::Violation {
            check: "Fuglede bound".into(),
            case: worst.0,
            slack: worst.1,
        })
    }
}

/// Projects `u` and runs [`fuglede_check`].
pub fn fuglede_projected(
    grid: &SphereGrid,
    beta: f64,
    u: &[f64],
    t_grid: &[f64],
) -> Result<FugledeReport> {
    let p = constraint_project(grid, u)?;
    fuglede_check(grid, beta, &p.u, t_grid)
}
