//! Rearrangement inequalities for increasing kernels and the elementary
//! lower bounds on `G_β`.

use super::decreasing::{decreasing_rearrangement, is_radially_decreasing};
use crate::energy::radial::{configuration_energy, self_energy, zeta};
use crate::energy::Radial;
use crate::error::{domain, Error, Result};
use crate::geometry::{BallConfiguration, RadialProfile, RadialStep};
use crate::special_fn::ball_volume;
use serde::{Deserialize, Serialize};

/// Relative tolerance for calling two energies equal.
pub const EQUALITY_TOL: f64 = 1e-10;

/// A function whose rearrangement is known in closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum RieszInput {
    /// Radial step function with values in `[0, 1]`.
    Radial(RadialStep),
    /// Indicator of a union of disjoint balls.
    Balls(BallConfiguration),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszReport {
    pub beta: f64,
    pub g_f: f64,
    pub g_star: f64,
    pub gap: f64,
    /// `gap ≤ EQUALITY_TOL · G(f*)`.
    pub equality: bool,
    /// `f` coincides with `f*` (up to translation).
    pub rearranged: bool,
    /// `f` is the indicator of a centred ball.
    pub ball_indicator: bool,
}

fn is_ball_step(f: &RadialStep) -> bool {
    let nz: Vec<f64> = f.values.iter().copied().filter(|v| *v != 0.0).collect();
    f.values.first().is_some_and(|v| *v == 1.0)
        && nz.iter().all(|v| *v == 1.0)
        && f.values.windows(2).all(|w| w[1] <= w[0])
}

/// Checks `G_β(f) ≥ G_β(f*)` with the equality case restricted to `f = f*`.
pub fn riesz_increasing_check(f: &RieszInput, beta: f64) -> Result<RieszReport> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    let h = Radial::attractive(beta);
    let (g_f, g_star, rearranged, ball) = match f {
        RieszInput::Radial(step) => {
            if step.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(domain("values must lie in [0, 1]"));
            }
            let star = decreasing_rearrangement(step)?;
            let dec = is_radially_decreasing(step);
            (
                self_energy(h, step),
                self_energy(h, &star),
                dec,
                is_ball_step(step),
            )
        }
        RieszInput::Balls(cfg) => {
            let r = (cfg.volume() / ball_volume(cfg.n)).powf(1.0 / cfg.n as f64);
            let star = RadialStep::ball(cfg.n, r)?;
            let single = cfg.balls.len() == 1;
            (
                configuration_energy(h, cfg),
                self_energy(h, &star),
                single,
                single,
            )
        }
    };
    let gap = g_f - g_star;
    let tol = EQUALITY_TOL * g_star.abs();
    let equality = gap.abs() <= tol;
    let report = RieszReport {
        beta,
        g_f,
        g_star,
        gap,
        equality,
        rearranged,
        ball_indicator: ball,
    };
    if gap < -tol {
        return Err(Error::Violation {
            check: "G(f) >= G(f*)".into(),
            case: format!("beta = {beta}"),
            slack: gap,
        });
    }
    if equality && !rearranged {
        return Err(Error::Violation {
            check: "equality only when f = f*".into(),
            case: format!("beta = {beta}"),
            slack: gap,
        });
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
}

/// `G_β(g) ≥ G_β(B_r)` with `|B_r| = ‖g‖_{L¹}` for radial `g` valued in `[0, 1]`.
pub fn function_minimum_check(g: &RadialStep, beta: f64) -> Result<LowerBoundReport> {
    if g.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(domain("values must lie in [0, 1]"));
    }
    let h = Radial::attractive(beta);
    let r = (g.mass() / ball_volume(g.n)).powf(1.0 / g.n as f64);
    let value = self_energy(h, g);
    let bound = self_energy(h, &RadialStep::ball(g.n, r)?);
    Ok(LowerBoundReport {
        value,
        bound,
        slack: value - bound,
    })
}

/// `τ(m) = Nω_N^{1-(β+N)/N}/(β+N) · m^{(β+N)/N}`.
pub fn tau_bound(m: f64, n: usize, beta: f64) -> f64 {
    let nf = n as f64;
    let e = (beta + nf) / nf;
    nf * ball_volume(n).powf(1.0 - e) / (beta + nf) * m.powf(e)
}

/// `G_β(G, H) ≥ |G| τ(|H|)` for radial sets.
pub fn pair_lower_bound_check(
    g: &RadialProfile,
    h: &RadialProfile,
    beta: f64,
) -> Result<LowerBoundReport> {
    let value =
        crate::energy::radial::pair_energy(Radial::attractive(beta), &g.to_step(), &h.to_step())?;
    let bound = g.volume() * tau_bound(h.volume(), h.n, beta);
    Ok(LowerBoundReport {
        value,
        bound,
        slack: value - bound,
    })
}

/// Smallest increment of `ρ ↦ ζ_f(ρ)` over a sorted grid.
pub fn zeta_min_increment(f: &RadialStep, beta: f64, rho: &[f64]) -> Result<f64> {
    let z: Vec<f64> = rho
        .iter()
        .map(|&r| zeta(f, beta, r))
        .collect::<Result<_>>()?;
    Ok(z.windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min))
}
