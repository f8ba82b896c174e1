//! Energies of arbitrary supported shapes, the mixed functional and the
//! reproducibility fingerprint of an evaluation.

use super::kernel::Radial;
use super::perimeter::p_s_shape;
use super::radial::{
    configuration_energy, configuration_p_s, energy_difference, g_ball, p_s_radial, self_energy,
    v_ball,
};
use super::shape::{g_beta_truncated, g_beta_with_order, v_alpha, ShapeEnergy};
use crate::error::{domain, Result};
use crate::geometry::{GridLayout, RadialProfile, RadialStep, Shape};
use crate::special_fn::ball_volume;
use fnv::FnvHasher;
use serde::{Deserialize, Serialize};
use std::hash::Hasher;

/// Relative accuracy requested from the one-dimensional radial quadratures.
pub const RADIAL_REL_TOL: f64 = 1e-12;

fn radial_energy(profile: &RadialProfile, h: Radial) -> Result<ShapeEnergy> {
    let f = profile.to_step();
    let rho = profile.equal_volume_radius();
    let b = RadialStep::ball(profile.n, rho)?;
    let value = self_energy(h, &f);
    let deficit = energy_difference(h, &f, &b)?;
    Ok(ShapeEnergy {
        value,
        deficit,
        error: RADIAL_REL_TOL * value.abs(),
    })
}

/// `G_β` of a radial set, with its deficit against the centred ball of equal volume.
pub fn g_beta_radial(profile: &RadialProfile, beta: f64) -> Result<ShapeEnergy> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    radial_energy(profile, Radial::attractive(beta))
}

/// `V_α` of a radial set; the deficit `V_α(E) - V_α(B)` is non-positive.
pub fn v_alpha_radial(profile: &RadialProfile, alpha: f64) -> Result<ShapeEnergy> {
    let n = profile.n;
    if !(alpha > 0.0 && alpha < n as f64) {
        return Err(domain(format!("alpha must lie in (0, {n}), got {alpha}")));
    }
    radial_energy(profile, Radial::riesz(alpha, n))
}

/// `G_β^M` of a radial set.
pub fn g_truncated_radial(profile: &RadialProfile, beta: f64, m: f64) -> Result<ShapeEnergy> {
    if !(beta > 0.0 && m > 0.0) {
        return Err(domain(format!(
            "truncated energy needs beta > 0 and M > 0, got ({beta}, {m})"
        )));
    }
    let h = Radial::Capped {
        beta,
        cutoff: m.powf(1.0 / beta),
    };
    radial_energy(profile, h)
}

/// `G_β(E)` for any supported shape.
pub fn shape_g_beta(shape: &Shape, beta: f64) -> Result<ShapeEnergy> {
    match shape {
        Shape::NearlySpherical(s) => g_beta_with_order(s, beta, super::DEFAULT_BOX_ORDER),
        Shape::Radial(p) => g_beta_radial(p, beta),
        Shape::Balls(c) => {
            if !(beta > 0.0) {
                return Err(domain(format!("beta must be positive, got {beta}")));
            }
            let value = configuration_energy(Radial::attractive(beta), c);
            let rho = (c.volume() / ball_volume(c.n)).powf(1.0 / c.n as f64);
            let ball = rho.powf(2.0 * c.n as f64 + beta) * g_ball(c.n, beta);
            Ok(ShapeEnergy {
                value,
                deficit: value - ball,
                error: RADIAL_REL_TOL * value.abs(),
            })
        }
    }
}

/// `G_β^M(E)` for any supported shape.
pub fn shape_g_truncated(shape: &Shape, beta: f64, m: f64) -> Result<ShapeEnergy> {
    match shape {
        Shape::NearlySpherical(s) => g_beta_truncated(s, beta, m),
        Shape::Radial(p) => g_truncated_radial(p, beta, m),
        Shape::Balls(c) => {
            let h = Radial::Capped {
                beta,
                cutoff: m.powf(1.0 / beta),
            };
            let value = configuration_energy(h, c);
            let rho = (c.volume() / ball_volume(c.n)).powf(1.0 / c.n as f64);
            let ball = self_energy(h, &RadialStep::ball(c.n, rho)?);
            Ok(ShapeEnergy {
                value,
                deficit: value - ball,
                error: RADIAL_REL_TOL * value.abs(),
            })
        }
    }
}

/// `V_α(E)` for any supported shape.
pub fn shape_v_alpha(shape: &Shape, alpha: f64) -> Result<ShapeEnergy> {
    match shape {
        Shape::NearlySpherical(s) => v_alpha(s, alpha),
        Shape::Radial(p) => v_alpha_radial(p, alpha),
        Shape::Balls(c) => {
            if !(alpha > 0.0 && alpha < c.n as f64) {
                return Err(domain(format!(
                    "alpha must lie in (0, {}), got {alpha}",
                    c.n
                )));
            }
            let value = configuration_energy(Radial::riesz(alpha, c.n), c);
            let rho = (c.volume() / ball_volume(c.n)).powf(1.0 / c.n as f64);
            let ball = rho.powf(c.n as f64 + alpha) * v_ball(c.n, alpha);
            Ok(ShapeEnergy {
                value,
                deficit: value - ball,
                error: RADIAL_REL_TOL * value.abs(),
            })
        }
    }
}

/// `P_s(E)` for any supported shape, `s ∈ (0, 1]`.
pub fn shape_p_s(shape: &Shape, s: f64) -> Result<(f64, f64)> {
    match shape {
        Shape::NearlySpherical(e) => {
            let v = p_s_shape(e, s)?;
            Ok((v.value, v.error))
        }
        Shape::Radial(p) => {
            let v = p_s_radial(p, s)?;
            Ok((v, RADIAL_REL_TOL * v.abs()))
        }
        Shape::Balls(c) => {
            let v = configuration_p_s(c, s)?;
            Ok((v, RADIAL_REL_TOL * v.abs()))
        }
    }
}

/// Penalization weight `ε(m) = (m/ω_N)^{1+(β+s)/N}`.
pub fn epsilon_of_m(m: f64, n: usize, beta: f64, s: f64) -> Result<f64> {
    if !(m > 0.0) || n < 2 {
        return Err(domain(format!("need m > 0 and N >= 2, got ({m}, {n})")));
    }
    Ok((m / ball_volume(n)).powf(1.0 + (beta + s) / n as f64))
}

/// `G_β(E) + V_α(E) + ε P_s(E)`.
pub fn mixed_energy(shape: &Shape, beta: f64, alpha: f64, s: f64, eps: f64) -> Result<f64> {
    let g = shape_g_beta(shape, beta)?.value;
    let v = shape_v_alpha(shape, alpha)?.value;
    if eps == 0.0 {
        return Ok(g + v);
    }
    let (p, _) = shape_p_s(shape, s)?;
    Ok(g + v + eps * p)
}

/// Parameters of one energy evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyConfig {
    pub beta: f64,
    pub alpha: Option<f64>,
    pub s: Option<f64>,
    pub truncation: Option<f64>,
}

/// All energies of one shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub kind: String,
    pub n: usize,
    pub volume: f64,
    pub beta: f64,
    pub g_beta: f64,
    pub g_beta_ball: f64,
    pub deficit_beta: f64,
    pub g_beta_truncated: Option<f64>,
    pub alpha: Option<f64>,
    pub v_alpha: Option<f64>,
    pub v_alpha_deficit: Option<f64>,
    pub s: Option<f64>,
    pub p_s: Option<f64>,
    pub quadrature_error_estimate: f64,
    pub fingerprint: String,
}

fn shape_kind(shape: &Shape) -> &'static str {
    match shape {
        Shape::NearlySpherical(_) => "nearly_spherical",
        Shape::Radial(_) => "radial",
        Shape::Balls(_) => "balls",
    }
}

/// FNV-1a digest of the shape data and the parameters, as 16 hex digits.
pub fn fingerprint(shape: &Shape, cfg: &EnergyConfig) -> String {
    let mut h = FnvHasher::default();
    let mut f = |x: f64| h.write_u64(x.to_bits());
    match shape {
        Shape::NearlySpherical(s) => {
            match s.grid.layout {
                GridLayout::Circle { m } => f(m as f64),
                GridLayout::GaussAzimuth { n_theta, n_phi } => {
                    f(n_theta as f64);
                    f(n_phi as f64);
                }
            }
            f(s.t);
            f(s.scale);
            s.center.iter().for_each(|&c| f(c));
            s.u.iter().for_each(|&v| f(v));
        }
        Shape::Radial(p) => {
            f(p.n as f64);
            p.breakpoints.iter().for_each(|&r| f(r));
            p.inside.iter().for_each(|&b| f(b as u8 as f64));
        }
        Shape::Balls(c) => {
            f(c.n as f64);
            for b in &c.balls {
                b.center.iter().for_each(|&x| f(x));
                f(b.radius);
            }
        }
    }
    f(cfg.beta);
    for o in [cfg.alpha, cfg.s, cfg.truncation] {
        f(o.unwrap_or(f64::NAN));
    }
    h.write(shape_kind(shape).as_bytes());
    format!("{:016x}", h.finish())
}

/// Evaluates every requested functional on `shape`.
pub fn energy_report(shape: &Shape, cfg: &EnergyConfig) -> Result<EnergyReport> {
    let n = shape.n();
    let g = shape_g_beta(shape, cfg.beta)?;
    let mut err = g.error;
    let g_trunc = match cfg.truncation {
        Some(m) => {
            let t = shape_g_truncated(shape, cfg.beta, m)?;
            err += t.error;
            Some(t.value)
        }
        None => None,
    };
    let (v, vd) = match cfg.alpha {
        Some(a) => {
            let v = shape_v_alpha(shape, a)?;
            err += v.error;
            (Some(v.value), Some(v.deficit))
        }
        None => (None, None),
    };
    let p = match cfg.s {
        Some(s) => {
            let (p, e) = shape_p_s(shape, s)?;
            if e.is_finite() {
                err += e;
            }
            Some(p)
        }
        None => None,
    };
    Ok(EnergyReport {
        kind: shape_kind(shape).to_string(),
        n,
        volume: shape.volume(),
        beta: cfg.beta,
        g_beta: g.value,
        g_beta_ball: g.value - g.deficit,
        deficit_beta: g.deficit,
        g_beta_truncated: g_trunc,
        alpha: cfg.alpha,
        v_alpha: v,
        v_alpha_deficit: vd,
        s: cfg.s,
        p_s: p,
        quadrature_error_estimate: err,
        fingerprint: fingerprint(shape, cfg),
    })
}
