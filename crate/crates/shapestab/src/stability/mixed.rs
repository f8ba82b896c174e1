use super::project::enforce_constraints;
use crate::energy::radial::{g_ball, p_s_ball, v_ball};
use crate::energy::{epsilon_of_m, mixed_energy, shape_g_beta, shape_p_s, shape_v_alpha};
use crate::error::{domain, Result};
use crate::geometry::{
    annulus_family, Ball, BallConfiguration, NearlySphericalShape, RadialProfile, Shape, SphereGrid,
};
use crate::par::map_slice;
use crate::special_fn::ball_volume;
use serde::{Deserialize, Serialize};

/// Exponents of the mixed functional `G_β + V_α + ε P_s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedParams {
    pub n: usize,
    pub beta: f64,
    pub alpha: f64,
    pub s: f64,
}

impl MixedParams {
    pub fn new(n: usize, beta: f64, alpha: f64, s: f64) -> Result<Self> {
        if !(n == 2 || n == 3) {
            return Err(domain(format!("N must be 2 or 3, got {n}")));
        }
        if !(beta > 0.0) || !(alpha > 0.0 && alpha < n as f64) || !(s > 0.0 && s <= 1.0) {
            return Err(domain(format!(
                "need beta > 0, alpha in (0, N), s in (0, 1]; got ({beta}, {alpha}, {s})"
            )));
        }
        Ok(Self { n, beta, alpha, s })
    }
}

/// A competitor of volume `ω_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Competitor {
    pub label: String,
    pub shape: Shape,
}

/// Deficits of one competitor against the unit ball, component by component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompetitorDeficits {
    pub label: String,
    pub volume: f64,
    pub g: f64,
    /// Non-positive.
    pub v: f64,
    pub p: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedRow {
    pub m: f64,
    pub lambda: f64,
    pub epsilon: f64,
    /// Three-term scaling display built from unit-ball energies.
    pub ball_energy: f64,
    /// `E_m` evaluated on the ball of volume `m` directly.
    pub ball_energy_direct: f64,
    pub scaling_error: f64,
    /// `min_F E_m(F) - E_m(B[m])`.
    pub min_margin: f64,
    pub argmin: String,
    pub ball_wins: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanViolation {
    pub m: f64,
    pub competitor: usize,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedScanReport {
    pub params: MixedParams,
    pub ball_g: f64,
    pub ball_v: f64,
    pub ball_p: f64,
    pub competitors: Vec<CompetitorDeficits>,
    pub rows: Vec<MixedRow>,
    /// Smallest grid value beyond which the ball beats every competitor.
    pub threshold: Option<f64>,
    /// Competitors beating the ball below the threshold.
    pub violations: Vec<ScanViolation>,
    pub max_scaling_error: f64,
    /// The ball wins on every grid value within a factor 10 of the largest.
    pub largest_decade_dominated: bool,
}

/// Relative tolerance for the scaling identity of `E_m(B[m])`.
pub const SCALING_TOL: f64 = 1e-8;

/// `25` values `ω_N · 10^{-3..3}`.
pub fn default_m_grid(n: usize) -> Vec<f64> {
    let w = ball_volume(n);
    (0..25)
        .map(|i| w * 10f64.powf(-3.0 + 6.0 * i as f64 / 24.0))
        .collect()
}

/// Annulus swaps, pure-mode nearly-spherical sets (planar only) and two-ball
/// splits, all of volume `ω_N`.
pub fn default_battery(n: usize) -> Result<Vec<Competitor>> {
    let mut out = Vec::new();
    for h in [0.05, 0.1, 0.2, 0.4] {
        out.push(Competitor {
            label: format!("annulus h={h}"),
            shape: Shape::Radial(annulus_family(h, n)?),
        });
    }
    if n == 2 {
        let grid = SphereGrid::circle(256)?;
        for k in 2..=5 {
            let u = grid.sample(|z| 0.5 * (k as f64 * z[1].atan2(z[0])).cos());
            for t in [0.05, 0.2, 0.4] {
                let fit = enforce_constraints(&grid, &u, t)?;
                out.push(Competitor {
                    label: format!("mode k={k} t={t}"),
                    shape: Shape::NearlySpherical(NearlySphericalShape::new(
                        grid.clone(),
                        t,
                        fit.u,
                    )?),
                });
            }
        }
    }
    let e = 1.0 / n as f64;
    for f in [0.5f64, 0.3, 0.1] {
        let (a, b) = ((1.0 - f).powf(e), f.powf(e));
        for gap in [0.25, 1.0, 4.0] {
            out.push(Competitor {
                label: format!("two balls f={f} gap={gap}"),
                shape: Shape::Balls(BallConfiguration::new(
                    n,
                    vec![
                        Ball {
                            center: [0.0; 3],
                            radius: a,
                        },
                        Ball {
                            center: [a + b + gap, 0.0, 0.0],
                            radius: b,
                        },
                    ],
                )?),
            });
        }
    }
    Ok(out)
}

fn deficits(c: &Competitor, p: MixedParams, ball_p: f64) -> Result<CompetitorDeficits> {
    let g = shape_g_beta(&c.shape, p.beta)?;
    let v = shape_v_alpha(&c.shape, p.alpha)?;
    let (ps, pe) = shape_p_s(&c.shape, p.s)?;
    let pe = if pe.is_finite() { pe } else { 0.0 };
    Ok(CompetitorDeficits {
        label: c.label.clone(),
        volume: c.shape.volume(),
        g: g.deficit,
        v: v.deficit,
        p: ps - ball_p,
        error: g.error + v.error + pe,
    })
}

/// Scans the mass `m`: each competitor is dilated to volume `m` and compared
/// with `B[m]` under `E_m = G_β + V_α + ε(m) P_s`.
pub fn ball_minimality_scan(
    params: MixedParams,
    m_grid: &[f64],
    battery: &[Competitor],
) -> Result<MixedScanReport> {
    let MixedParams { n, beta, alpha, s } = params;
    if m_grid.is_empty() || m_grid.iter().any(|m| !(*m > 0.0)) {
        return Err(domain("mass grid must be non-empty and positive"));
    }
    let w = ball_volume(n);
    for c in battery {
        if c.shape.n() != n || (c.shape.volume() - w).abs() > 1e-8 * w {
            return Err(domain(format!(
                "competitor '{}' must have dimension {n} and volume ω_N",
                c.label
            )));
        }
    }
    let nf = n as f64;
    let ball_g = g_ball(n, beta);
    let ball_v = v_ball(n, alpha);
    let ball_p = p_s_ball(n, s)?;
    let competitors: Vec<CompetitorDeficits> = map_slice(battery, |c| deficits(c, params, ball_p))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut ms = m_grid.to_vec();
    ms.sort_by(f64::total_cmp);
    let rows: Vec<Result<(MixedRow, Vec<f64>)>> = map_slice(&ms, |&m| {
        let q = m / w;
        let lambda = q.powf(1.0 / nf);
        let eps = epsilon_of_m(m, n, beta, s)?;
        let ball_energy = q.powf(2.0 + beta / nf) * ball_g
            + q.powf(1.0 + alpha / nf) * ball_v
            + eps * q.powf(1.0 - s / nf) * ball_p;
        let direct = mixed_energy(
            &Shape::Radial(RadialProfile::ball(n, lambda)?),
            beta,
            alpha,
            s,
            eps,
        )?;
        let lg = lambda.powf(2.0 * nf + beta);
        let lv = lambda.powf(nf + alpha);
        let lp = eps * lambda.powf(nf - s);
        let margins: Vec<f64> = competitors
            .iter()
            .map(|d| lg * d.g + lv * d.v + lp * d.p)
            .collect();
        let (arg, min) =
            margins
                .iter()
                .enumerate()
                .fold((usize::MAX, f64::INFINITY), |acc, (i, &v)| {
                    if v < acc.1 {
                        (i, v)
                    } else {
                        acc
                    }
                });
        Ok((
            MixedRow {
                m,
                lambda,
                epsilon: eps,
                ball_energy,
                ball_energy_direct: direct,
                scaling_error: (direct - ball_energy).abs() / ball_energy.abs(),
                min_margin: min,
                argmin: competitors
                    .get(arg)
                    .map(|c| c.label.clone())
                    .unwrap_or_default(),
                ball_wins: min > 0.0,
            },
            margins,
        ))
    });
    let rows: Vec<(MixedRow, Vec<f64>)> = rows.into_iter().collect::<Result<_>>()?;
    let mut first_tail = rows.len();
    while first_tail > 0 && rows[first_tail - 1].0.ball_wins {
        first_tail -= 1;
    }
    let threshold = rows.get(first_tail).map(|r| r.0.m);
    let mut violations = Vec::new();
    for (row, margins) in &rows[..first_tail] {
        for (i, &mg) in margins.iter().enumerate() {
            if mg <= 0.0 {
                violations.push(ScanViolation {
                    m: row.m,
                    competitor: i,
                    margin: mg,
                });
            }
        }
    }
    let m_max = ms[ms.len() - 1];
    let largest_decade_dominated = rows
        .iter()
        .filter(|r| r.0.m >= m_max / 10.0 * (1.0 - 1e-12))
        .all(|r| r.0.ball_wins);
    let max_scaling_error = rows.iter().map(|r| r.0.scaling_error).fold(0.0, f64::max);
    Ok(MixedScanReport {
        params,
        ball_g,
        ball_v,
        ball_p,
        competitors,
        rows: rows.into_iter().map(|r| r.0).collect(),
        threshold,
        violations,
        max_scaling_error,
        largest_decade_dominated,
    })
}
