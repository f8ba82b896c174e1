use super::grid::SphereGrid;
use super::optimize::nelder_mead;
use crate::error::{domain, precondition, Result};
use crate::special_fn::ball_volume;
use serde::{Deserialize, Serialize};

/// Star-shaped set `{c + ρ z : 0 ≤ ρ ≤ scale·(1 + t u(z))}` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct NearlySphericalShape {
    pub grid: SphereGrid,
    pub t: f64,
    pub u: Vec<f64>,
    pub center: [f64; 3],
    /// Overall dilation; `1` for the sets `E_{t,u}` themselves.
    pub scale: f64,
}

/// Slack allowed on `‖u‖_∞ ≤ 1/2` for rounding in projected samples.
pub const SUP_NORM_SLACK: f64 = 1e-12;

impl NearlySphericalShape {
    pub fn new(grid: SphereGrid, t: f64, u: Vec<f64>) -> Result<Self> {
        let s = Self {
            grid,
            t,
            u,
            center: [0.0; 3],
            scale: 1.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// The unit ball on `grid`.
    pub fn ball(grid: SphereGrid) -> Self {
        let m = grid.len();
        Self {
            grid,
            t: 0.0,
            u: vec![0.0; m],
            center: [0.0; 3],
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.u.len() != self.grid.len() {
            return Err(domain(format!(
                "{} samples for a grid of {} nodes",
                self.u.len(),
                self.grid.len()
            )));
        }
        if !(0.0..1.0).contains(&self.t) {
            return Err(domain(format!(
                "amplitude t must lie in [0, 1), got {}",
                self.t
            )));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(domain(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if self.u.iter().any(|v| !v.is_finite()) {
            return Err(domain("perturbation samples must be finite"));
        }
        let sup = self.sup_norm();
        if sup > 0.5 + SUP_NORM_SLACK {
            return Err(domain(format!("sup norm of u is {sup}, above 1/2")));
        }
        if self.u.iter().any(|&v| 1.0 + self.t * v <= 0.0) {
            return Err(domain("radius 1 + t u must stay positive"));
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(domain("center must be finite"));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn sup_norm(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Boundary radius at node `i`.
    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        self.scale * (1.0 + self.t * self.u[i])
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.u.len()).map(|i| self.radius(i)).collect()
    }

    pub fn max_radius(&self) -> f64 {
        (0..self.u.len())
            .map(|i| self.radius(i))
            .fold(0.0, f64::max)
    }

    /// `(1/N) ∫ R^N dH`.
    pub fn volume(&self) -> f64 {
        let n = self.n() as i32;
        self.grid.integrate(|i, _| self.radius(i).powi(n)) / n as f64
    }

    /// Radius of the ball with the same volume.
    pub fn equal_volume_radius(&self) -> f64 {
        (self.volume() / ball_volume(self.n())).powf(1.0 / self.n() as f64)
    }

    /// `c + (1/|E|)(1/(N+1)) ∫ z R^{N+1} dH`.
    pub fn barycenter(&self) -> [f64; 3] {
        let n = self.n() as i32;
        let vol = self.volume();
        let mut m = [0.0; 3];
        for (i, (z, w)) in self.grid.nodes.iter().zip(&self.grid.weights).enumerate() {
            let r = self.radius(i).powi(n + 1);
            for k in 0..3 {
                m[k] += w * z[k] * r;
            }
        }
        let f = 1.0 / ((n + 1) as f64 * vol);
        [
            self.center[0] + f * m[0],
            self.center[1] + f * m[1],
            self.center[2] + f * m[2],
        ]
    }

    pub fn translate(&self, v: &[f64]) -> Self {
        let mut s = self.clone();
        for (c, d) in s.center.iter_mut().zip(v) {
            *c += d;
        }
        s
    }

    /// Dilation about the origin by `lambda`.
    pub fn rescale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        let mut s = self.clone();
        s.scale *= lambda;
        for c in s.center.iter_mut() {
            *c *= lambda;
        }
        Ok(s)
    }

    /// `|E Δ B_ρ(x)|` by radial integration along each grid ray.
    pub fn symmetric_difference(&self, x: &[f64], rho: f64) -> f64 {
        let n = self.n() as i32;
        let nf = n as f64;
        let d: Vec<f64> = (0..3)
            .map(|k| self.center[k] - x.get(k).copied().unwrap_or(0.0))
            .collect();
        let dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        self.grid.integrate(|i, z| {
            let r = self.radius(i);
            let dz = d[0] * z[0] + d[1] * z[1] + d[2] * z[2];
            let disc = dz * dz - dd + rho * rho;
            let own = r.powi(n) / nf;
            if disc <= 0.0 {
                return own;
            }
            let sq = disc.sqrt();
            let hi = -dz + sq;
            if hi <= 0.0 {
                return own;
            }
            let lo = (-dz - sq).max(0.0);
            let ball = (hi.powi(n) - lo.powi(n)) / nf;
            let a = lo.min(r);
            let b = hi.min(r);
            let inter = if b > a {
                (b.powi(n) - a.powi(n)) / nf
            } else {
                0.0
            };
            own + ball - 2.0 * inter
        })
    }

    /// Fraenkel asymmetry: minimum of `|E Δ B(x)|` over unit balls.
    pub fn fraenkel_asymmetry(&self) -> Result<Asymmetry> {
        let n = self.n();
        let vol = self.volume();
        let w = ball_volume(n);
        if (vol - w).abs() > 1e-8 {
            return Err(precondition(format!(
                "asymmetry needs volume {w} within 1e-8, got {vol}"
            )));
        }
        let f = |x: &[f64]| self.symmetric_difference(x, 1.0);
        let bary = self.barycenter();
        let mut best: Option<Asymmetry> = None;
        for seed in [&bary[..n], &self.center[..n]] {
            let m = nelder_mead(f, seed, 0.05, 1e-13, 4000);
            let cand = Asymmetry {
                value: m.value,
                center: {
                    let mut c = [0.0; 3];
                    c[..n].copy_from_slice(&m.x);
                    c
                },
                converged: m.converged,
                evaluations: m.evaluations,
            };
            best = match best {
                Some(b) if b.value <= cand.value => Some(Asymmetry {
                    evaluations: b.evaluations + cand.evaluations,
                    ..b
                }),
                Some(b) => Some(Asymmetry {
                    evaluations: b.evaluations + cand.evaluations,
                    converged: cand.converged,
                    ..cand
                }),
                None => Some(cand),
            };
        }
        let best = best.unwrap();
        if !best.converged {
            log::warn!(
                "asymmetry search did not converge; best value {}",
                best.value
            );
        }
        Ok(best)
    }
}

/// Result of a Fraenkel asymmetry search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub value: f64,
    pub center: [f64; 3],
    pub converged: bool,
    pub evaluations: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_quantities() {
        let g = SphereGrid::circle(64).unwrap();
        let b = NearlySphericalShape::ball(g);
        assert!((b.volume() - PI).abs() < 1e-13);
        assert!(b.barycenter().iter().all(|c| c.abs() < 1e-15));
        let a = b.fraenkel_asymmetry().unwrap();
        assert!(a.value < 1e-8, "{a:?}");
    }

    #[test]
    fn rejects_large_perturbation() {
        let g = SphereGrid::circle(8).unwrap();
        assert!(NearlySphericalShape::new(g.clone(), 0.1, vec![0.6; 8]).is_err());
        assert!(NearlySphericalShape::new(g.clone(), 1.0, vec![0.0; 8]).is_err());
        assert!(NearlySphericalShape::new(g, 0.1, vec![0.5; 8]).is_ok());
    }
}
