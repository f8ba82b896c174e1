use crate::error::{domain, Result};
use crate::special_fn::{sphere_area, GaussLegendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How the nodes of a [`SphereGrid`] were laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "snake_case")]
pub enum GridLayout {
    /// `m` equispaced angles on `S¹`.
    Circle { m: usize },
    /// Gauss–Legendre in `cos θ` times `n_phi` equispaced azimuths on `S²`.
    GaussAzimuth { n_theta: usize, n_phi: usize },
}

/// Quadrature grid on `S^{N-1}`, `N ∈ {2, 3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub n: usize,
    pub layout: GridLayout,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereGrid {
    /// Trapezoid grid on the circle.
    pub fn circle(m: usize) -> Result<Self> {
        if m < 4 {
            return Err(domain(format!(
                "circle grid needs at least 4 nodes, got {m}"
            )));
        }
        let h = 2.0 * PI / m as f64;
        let nodes = (0..m)
            .map(|i| {
                let a = h * i as f64;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        Ok(Self {
            n: 2,
            layout: GridLayout::Circle { m },
            nodes,
            weights: vec![h; m],
        })
    }

    /// Product grid on `S²`.
    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 4 {
            return Err(domain(format!(
                "sphere grid too coarse: n_theta = {n_theta}, n_phi = {n_phi}"
            )));
        }
        let gl = GaussLegendre::new(n_theta);
        let hp = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            let s = (1.0 - x * x).sqrt();
            for j in 0..n_phi {
                let p = hp * j as f64;
                nodes.push([s * p.cos(), s * p.sin(), x]);
                weights.push(w * hp);
            }
        }
        Ok(Self {
            n: 3,
            layout: GridLayout::GaussAzimuth { n_theta, n_phi },
            nodes,
            weights,
        })
    }

    /// Default layout for dimension `n` at resolution `res`: `res` angles on
    /// the circle, or `res × 2res` nodes on the sphere.
    pub fn new(n: usize, res: usize) -> Result<Self> {
        match n {
            2 => Self::circle(res),
            3 => Self::sphere(res, 2 * res),
            _ => Err(domain(format!(
                "sphere grids exist for N in {{2, 3}}, got {n}"
            ))),
        }
    }

    pub fn from_layout(layout: GridLayout) -> Result<Self> {
        match layout {
            GridLayout::Circle { m } => Self::circle(m),
            GridLayout::GaussAzimuth { n_theta, n_phi } => Self::sphere(n_theta, n_phi),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Surface measure of `S^{N-1}`.
    pub fn area(&self) -> f64 {
        sphere_area(self.n)
    }

    /// Chordal distance `|z_i - z_j|`.
    #[inline]
    pub fn chord(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.nodes[i], &self.nodes[j]);
        let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    /// `Σ w_i f(z_i)`.
    pub fn integrate(&self, mut f: impl FnMut(usize, &[f64; 3]) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .enumerate()
            .map(|(i, (z, w))| w * f(i, z))
            .sum()
    }

    /// Samples of `f` at the nodes.
    pub fn sample(&self, f: impl FnMut(&[f64; 3]) -> f64) -> Vec<f64> {
        self.nodes.iter().map(f).collect()
    }

    /// Angle of node `i` on the circle grid.
    pub fn circle_angle(&self, i: usize) -> f64 {
        match self.layout {
            GridLayout::Circle { m } => 2.0 * PI * i as f64 / m as f64,
            _ => self.nodes[i][1].atan2(self.nodes[i][0]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_area() {
        let c = SphereGrid::circle(64).unwrap();
        assert!((c.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        let s = SphereGrid::sphere(12, 24).unwrap();
        assert!((s.weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        for z in &s.nodes {
            let r = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
            assert!((r - 1.0).abs() < 1e-14);
        }
    }
}
