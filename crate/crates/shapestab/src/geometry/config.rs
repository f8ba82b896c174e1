use crate::error::{domain, Result};
use crate::special_fn::ball_volume;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: [f64; 3],
    pub radius: f64,
}

/// Finite union of pairwise disjoint balls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallConfiguration {
    pub n: usize,
    pub balls: Vec<Ball>,
}

impl BallConfiguration {
    pub fn new(n: usize, balls: Vec<Ball>) -> Result<Self> {
        if !(n == 2 || n == 3) || balls.is_empty() {
            return Err(domain(
                "configuration needs N in {2, 3} and at least one ball",
            ));
        }
        let c = Self { n, balls };
        for (i, a) in c.balls.iter().enumerate() {
            if !(a.radius > 0.0) {
                return Err(domain("ball radii must be positive"));
            }
            for b in &c.balls[i + 1..] {
                if c.distance(a, b) < a.radius + b.radius {
                    return Err(domain("balls must be pairwise disjoint"));
                }
            }
        }
        Ok(c)
    }

    pub fn distance(&self, a: &Ball, b: &Ball) -> f64 {
        (0..3)
            .map(|k| (a.center[k] - b.center[k]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn volume(&self) -> f64 {
        let w = ball_volume(self.n);
        self.balls
            .iter()
            .map(|b| w * b.radius.powi(self.n as i32))
            .sum()
    }

    /// Smallest gap `|c_i - c_j| - r_i - r_j` between distinct balls, or
    /// `None` for a single ball.
    pub fn min_separation(&self) -> Option<f64> {
        let mut m: Option<f64> = None;
        for (i, a) in self.balls.iter().enumerate() {
            for b in &self.balls[i + 1..] {
                let g = self.distance(a, b) - a.radius - b.radius;
                m = Some(m.map_or(g, |v: f64| v.min(g)));
            }
        }
        m
    }

    pub fn rescale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            n: self.n,
            balls: self
                .balls
                .iter()
                .map(|b| Ball {
                    center: b.center.map(|c| c * lambda),
                    radius: b.radius * lambda,
                })
                .collect(),
        })
    }

    /// Fraenkel asymmetry of a volume-`ω_N` union of balls whose gaps exceed
    /// the unit diameter: the best unit ball sits on the largest component,
    /// giving `2ω_N(1 - r_max^N)`.
    pub fn far_field_asymmetry(&self) -> f64 {
        let rmax = self.balls.iter().map(|b| b.radius).fold(0.0, f64::max);
        2.0 * ball_volume(self.n) * (1.0 - rmax.powi(self.n as i32))
    }
}
