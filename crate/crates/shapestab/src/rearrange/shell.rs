//! Radial shell transport in the plane: on each angular sector, a monotone
//! radial map pushes the source shells onto the target shells with the
//! measure `r dr dφ` preserved.

use crate::error::{domain, precondition, Error, Result};
use crate::special_fn::{ball_volume, GaussLegendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Per-sector source and target radial intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorShells {
    pub a0: f64,
    pub a1: f64,
    pub source: Vec<(f64, f64)>,
    pub target: Vec<(f64, f64)>,
}

/// `{(r cos φ, r sin φ) : r ∈ [r0, r1), φ ∈ [a0, a1)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarCell {
    pub r0: f64,
    pub r1: f64,
    pub a0: f64,
    pub a1: f64,
}

impl PolarCell {
    pub fn area(&self) -> f64 {
        0.5 * (self.a1 - self.a0) * (self.r1 * self.r1 - self.r0 * self.r0)
    }
}

fn radial_measure(iv: &[(f64, f64)]) -> f64 {
    iv.iter().map(|&(a, b)| 0.5 * (b * b - a * a)).sum()
}

fn check_intervals(iv: &[(f64, f64)]) -> Result<()> {
    let mut prev = 0.0;
    for &(a, b) in iv {
        if !(a >= prev && b > a && b.is_finite()) {
            return Err(domain(
                "shell intervals must be sorted, disjoint and non-empty",
            ));
        }
        prev = b;
    }
    Ok(())
}

/// Monotone radial map of one sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorMap {
    pub a0: f64,
    pub a1: f64,
    pub source: Vec<(f64, f64)>,
    pub target: Vec<(f64, f64)>,
    /// Breakpoint table `(source radius, target radius)`.
    pub table: Vec<(f64, f64)>,
}

impl SectorMap {
    fn cumulative(iv: &[(f64, f64)], r: f64) -> f64 {
        iv.iter()
            .map(|&(a, b)| {
                let c = r.clamp(a, b);
                0.5 * (c * c - a * a)
            })
            .sum()
    }

    fn inverse(iv: &[(f64, f64)], mut c: f64) -> f64 {
        for &(a, b) in iv {
            let m = 0.5 * (b * b - a * a);
            if c <= m {
                return (a * a + 2.0 * c).sqrt().min(b);
            }
            c -= m;
        }
        iv.last().map_or(0.0, |x| x.1)
    }

    /// `φ(r)` for `r` in the source shells; the identity elsewhere.
    pub fn radius_map(&self, r: f64) -> f64 {
        if self.source.is_empty() || !self.source.iter().any(|&(a, b)| r >= a && r <= b) {
            return r;
        }
        Self::inverse(&self.target, Self::cumulative(&self.source, r))
    }

    pub fn contains_angle(&self, a: f64) -> bool {
        a >= self.a0 && a < self.a1
    }

    pub fn source_measure(&self) -> f64 {
        (self.a1 - self.a0) * radial_measure(&self.source)
    }

    pub fn target_measure(&self) -> f64 {
        (self.a1 - self.a0) * radial_measure(&self.target)
    }

    /// Largest `|F_src(r) - F_tgt(φ(r))|` over the table and the source endpoints.
    pub fn cdf_residual(&self) -> f64 {
        let mut w = 0.0f64;
        for &(a, b) in &self.source {
            for r in [a, 0.5 * (a + b), b] {
                let d = Self::cumulative(&self.source, r)
                    - Self::cumulative(&self.target, self.radius_map(r));
                w = w.max(d.abs());
            }
        }
        (self.a1 - self.a0) * w
    }
}

/// Sector-wise shell transport.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellMap {
    pub sectors: Vec<SectorMap>,
}

/// Angle in `[0, 2π)`.
fn angle_of(y: [f64; 2]) -> f64 {
    let a = y[1].atan2(y[0]);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

impl ShellMap {
    pub fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        let r = y[0].hypot(y[1]);
        if r == 0.0 {
            return y;
        }
        let a = angle_of(y);
        match self.sectors.iter().find(|s| s.contains_angle(a)) {
            Some(s) => {
                let k = s.radius_map(r) / r;
                [k * y[0], k * y[1]]
            }
            None => y,
        }
    }

    /// `|y - Φ(y)|`.
    pub fn displacement(&self, y: [f64; 2]) -> f64 {
        let z = self.eval(y);
        (y[0] - z[0]).hypot(y[1] - z[1])
    }

    pub fn cdf_residual(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| s.cdf_residual())
            .fold(0.0, f64::max)
    }

    /// Source set `E₁` as polar cells.
    pub fn source_cells(&self) -> Vec<PolarCell> {
        self.cells(|s| &s.source)
    }

    /// Target set `E₂` as polar cells.
    pub fn target_cells(&self) -> Vec<PolarCell> {
        self.cells(|s| &s.target)
    }

    fn cells(&self, pick: impl Fn(&SectorMap) -> &Vec<(f64, f64)>) -> Vec<PolarCell> {
        self.sectors
            .iter()
            .flat_map(|s| {
                pick(s).iter().map(move |&(r0, r1)| PolarCell {
                    r0,
                    r1,
                    a0: s.a0,
                    a1: s.a1,
                })
            })
            .collect()
    }

    /// `∫_{E₁} |y - Φ(y)| dy`.
    pub fn transport_cost(&self) -> f64 {
        let gl = GaussLegendre::new(16);
        self.sectors
            .iter()
            .map(|s| {
                let width = s.a1 - s.a0;
                s.source
                    .iter()
                    .map(|&(a, b)| {
                        let mut cuts = vec![a, b];
                        cuts.extend(s.table.iter().map(|t| t.0).filter(|&x| x > a && x < b));
                        cuts.sort_by(f64::total_cmp);
                        cuts.windows(2)
                            .map(|w| gl.integrate(w[0], w[1], |r| (r - s.radius_map(r)).abs() * r))
                            .sum::<f64>()
                    })
                    .sum::<f64>()
                    * width
            })
            .sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.sectors
            .iter()
            .flat_map(|s| s.source.iter().chain(&s.target).map(|x| x.1))
            .fold(0.0, f64::max)
    }
}

/// Builds the sector maps. Sectors must be disjoint sub-intervals of
/// `[0, 2π)`, all shells must lie in `B_{1+ε} \ B_{1-ε}`, and source and
/// target measures must agree per sector.
pub fn shell_transport(sectors: &[SectorShells], eps: f64) -> Result<ShellMap> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!(
            "annulus half-width must lie in (0, 1), got {eps}"
        )));
    }
    let mut sorted: Vec<&SectorShells> = sectors.iter().collect();
    sorted.sort_by(|a, b| a.a0.total_cmp(&b.a0));
    let mut prev = 0.0;
    for s in &sorted {
        if !(s.a0 >= prev && s.a1 > s.a0 && s.a1 <= 2.0 * PI + 1e-15) {
            return Err(domain("sectors must be disjoint sub-intervals of [0, 2π)"));
        }
        prev = s.a1;
    }
    let mut out = Vec::with_capacity(sectors.len());
    for s in sectors {
        check_intervals(&s.source)?;
        check_intervals(&s.target)?;
        for &(a, b) in s.source.iter().chain(&s.target) {
            if a < 1.0 - eps - 1e-15 || b > 1.0 + eps + 1e-15 {
                return Err(precondition(format!(
                    "shell ({a}, {b}) leaves the annulus of half-width {eps}"
                )));
            }
        }
        let (ms, mt) = (radial_measure(&s.source), radial_measure(&s.target));
        if ms == 0.0 && mt == 0.0 {
            out.push(SectorMap {
                a0: s.a0,
                a1: s.a1,
                source: vec![],
                target: vec![],
                table: vec![],
            });
            continue;
        }
        if (ms - mt).abs() > 1e-12 * ms.max(mt) {
            return Err(Error::MassMismatch {
                source_mass: ms * (s.a1 - s.a0),
                target_mass: mt * (s.a1 - s.a0),
            });
        }
        let mut map = SectorMap {
            a0: s.a0,
            a1: s.a1,
            source: s.source.clone(),
            target: s.target.clone(),
            table: vec![],
        };
        let mut levels = vec![0.0];
        for iv in [&s.source, &s.target] {
            let mut acc = 0.0;
            for &(a, b) in iv.iter() {
                acc += 0.5 * (b * b - a * a);
                levels.push(acc);
            }
        }
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        map.table = levels
            .iter()
            .map(|&c| {
                (
                    SectorMap::inverse(&s.source, c),
                    SectorMap::inverse(&s.target, c),
                )
            })
            .collect();
        out.push(map);
    }
    Ok(ShellMap { sectors: out })
}

/// Both sides of the transport-cost energy bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportBoundReport {
    pub beta: f64,
    pub radius: f64,
    pub alpha: f64,
    pub constant: f64,
    pub e3_measure: f64,
    pub cost: f64,
    /// `|∫_{E₁}∫_{E₃} |y-z|^β - |Φ(y)-z|^β|`.
    pub lhs: f64,
    /// `|G_β(E₁,E₃) - G_β(E₂,E₃)|` with both terms computed separately.
    pub lhs_direct: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// `α = min{1, 1 + (β-1)/N}`.
pub fn transport_alpha(beta: f64, n: usize) -> f64 {
    (1.0 + (beta - 1.0) / n as f64).min(1.0)
}

/// `C(R, β, N)`: `β(2R)^{β-1}` for `β ≥ 1`, else `βNω_N^{(1-β)/N}/(N+β-1)`.
pub fn transport_constant(radius: f64, beta: f64, n: usize) -> f64 {
    let nf = n as f64;
    if beta >= 1.0 {
        beta * (2.0 * radius).powf(beta - 1.0)
    } else {
        beta * nf * ball_volume(n).powf((1.0 - beta) / nf) / (nf + beta - 1.0)
    }
}

fn panels(c: &PolarCell, h: f64) -> Vec<PolarCell> {
    let nr = ((c.r1 - c.r0) / h).ceil().max(1.0) as usize;
    let arc = (c.a1 - c.a0) * c.r1;
    let na = (arc / h).ceil().max(1.0) as usize;
    let mut out = Vec::with_capacity(nr * na);
    for i in 0..nr {
        for j in 0..na {
            out.push(PolarCell {
                r0: c.r0 + (c.r1 - c.r0) * i as f64 / nr as f64,
                r1: c.r0 + (c.r1 - c.r0) * (i + 1) as f64 / nr as f64,
                a0: c.a0 + (c.a1 - c.a0) * j as f64 / na as f64,
                a1: c.a0 + (c.a1 - c.a0) * (j + 1) as f64 / na as f64,
            });
        }
    }
    out
}

/// Tensor nodes `(point, weight)` of a polar cell.
fn cell_nodes(c: &PolarCell, gl: &GaussLegendre, h: f64) -> Vec<([f64; 2], f64)> {
    let mut out = Vec::new();
    for p in panels(c, h) {
        let (hr, cr) = (0.5 * (p.r1 - p.r0), 0.5 * (p.r1 + p.r0));
        let (ha, ca) = (0.5 * (p.a1 - p.a0), 0.5 * (p.a1 + p.a0));
        for (xr, wr) in gl.nodes.iter().zip(&gl.weights) {
            let r = cr + hr * xr;
            for (xa, wa) in gl.nodes.iter().zip(&gl.weights) {
                let a = ca + ha * xa;
                out.push(([r * a.cos(), r * a.sin()], wr * wa * hr * ha * r));
            }
        }
    }
    out
}

/// Checks `|G_β(E₁,E₃) - G_β(E₂,E₃)| ≤ C |E₃|^α ∫_{E₁}|y-Φ(y)|dy` in the plane.
pub fn transport_energy_bound_check(
    map: &ShellMap,
    e3: &[PolarCell],
    beta: f64,
) -> Result<TransportBoundReport> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    let e3_r = e3.iter().map(|c| c.r1).fold(0.0, f64::max);
    let radius = map.max_radius().max(e3_r);
    let n = 2;
    let gl = GaussLegendre::new(8);
    let h = 0.2;
    let src: Vec<([f64; 2], f64)> = map
        .source_cells()
        .iter()
        .flat_map(|c| cell_nodes(c, &gl, h))
        .collect();
    let tgt: Vec<([f64; 2], f64)> = map
        .target_cells()
        .iter()
        .flat_map(|c| cell_nodes(c, &gl, h))
        .collect();
    let third: Vec<([f64; 2], f64)> = e3.iter().flat_map(|c| cell_nodes(c, &gl, h)).collect();
    let pow =
        |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).powf(0.5 * beta);
    let lhs = crate::par::sum_rows(src.len(), |i| {
        let (y, wy) = src[i];
        let py = map.eval(y);
        wy * third
            .iter()
            .map(|&(z, wz)| wz * (pow(y, z) - pow(py, z)))
            .sum::<f64>()
    })
    .abs();
    let g = |set: &[([f64; 2], f64)]| {
        crate::par::sum_rows(set.len(), |i| {
            let (y, wy) = set[i];
            wy * third.iter().map(|&(z, wz)| wz * pow(y, z)).sum::<f64>()
        })
    };
    let lhs_direct = (g(&src) - g(&tgt)).abs();
    let e3_measure: f64 = e3.iter().map(|c| c.area()).sum();
    let alpha = transport_alpha(beta, n);
    let constant = transport_constant(radius, beta, n);
    let cost = map.transport_cost();
    let rhs = constant * e3_measure.powf(alpha) * cost;
    Ok(TransportBoundReport {
        beta,
        radius,
        alpha,
        constant,
        e3_measure,
        cost,
        lhs,
        lhs_direct,
        rhs,
        slack: rhs - lhs,
        pass: lhs <= rhs,
    })
}
