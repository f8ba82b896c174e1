use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

fn check_edges(edges: &[f64], what: &str) -> Result<()> {
    if edges.len() < 2
        || edges.windows(2).any(|w| !(w[1] > w[0]))
        || edges.iter().any(|e| !e.is_finite())
    {
        return Err(domain(format!(
            "{what} edges must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// Piecewise-constant density on `[x_0, x_n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Density1D {
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
    /// `F(x_j)`, cumulative mass at each edge.
    #[serde(skip)]
    cdf: Vec<f64>,
}

impl Density1D {
    pub fn new(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_edges(&edges, "density")?;
        if values.len() + 1 != edges.len() {
            return Err(domain("density needs one value per cell"));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(domain("density values must be finite and non-negative"));
        }
        let mut cdf = Vec::with_capacity(edges.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for (w, v) in edges.windows(2).zip(&values) {
            acc += v * (w[1] - w[0]);
            cdf.push(acc);
        }
        Ok(Self { edges, values, cdf })
    }

    /// Constant density carrying mass `mass` on `[a, b]`.
    pub fn uniform(a: f64, b: f64, mass: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![mass / (b - a)])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self) -> f64 {
        *self.cdf.last().unwrap()
    }

    /// Cumulative masses at the edges.
    pub fn cdf_table(&self) -> &[f64] {
        &self.cdf
    }

    pub fn cell_mass(&self, j: usize) -> f64 {
        self.cdf[j + 1] - self.cdf[j]
    }

    /// Index of the cell containing `x`, clamped to the support.
    pub fn cell_of(&self, x: f64) -> usize {
        let k = self.edges.partition_point(|&e| e <= x);
        k.clamp(1, self.len()) - 1
    }

    /// `F(x) = ∫_{x_0}^x f`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.edges[0] {
            return 0.0;
        }
        if x >= *self.edges.last().unwrap() {
            return self.mass();
        }
        let j = self.cell_of(x);
        self.cdf[j] + self.values[j] * (x - self.edges[j])
    }

    /// `F^←(p) = inf{x : F(x) ≥ p}`.
    pub fn quantile(&self, p: f64) -> f64 {
        let j = self.cdf.partition_point(|&c| c < p);
        if j == 0 {
            return self.edges[0];
        }
        if j >= self.cdf.len() {
            return *self.edges.last().unwrap();
        }
        let v = self.values[j - 1];
        let x = self.edges[j - 1] + (p - self.cdf[j - 1]) / v;
        x.clamp(self.edges[j - 1], self.edges[j])
    }

    /// Same density with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.edges.clone(),
            self.values.iter().map(|v| v * c).collect(),
        )
    }

    /// `|{f > τ}|`.
    pub fn distribution(&self, tau: f64) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.values)
            .filter(|(_, &v)| v > tau)
            .map(|(w, _)| w[1] - w[0])
            .sum()
    }
}

/// Piecewise-constant density on a tensor grid; `values[i * ny + j]` lives on
/// `[x_i, x_{i+1}) × [y_j, y_{j+1})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Density2D {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
    pub values: Vec<f64>,
}

impl Density2D {
    pub fn new(x_edges: Vec<f64>, y_edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_edges(&x_edges, "x")?;
        check_edges(&y_edges, "y")?;
        if values.len() != (x_edges.len() - 1) * (y_edges.len() - 1) {
            return Err(domain("density needs one value per cell"));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(domain("density values must be finite and non-negative"));
        }
        Ok(Self {
            x_edges,
            y_edges,
            values,
        })
    }

    pub fn nx(&self) -> usize {
        self.x_edges.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.y_edges.len() - 1
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ny() + j]
    }

    pub fn cell_area(&self, i: usize, j: usize) -> f64 {
        (self.x_edges[i + 1] - self.x_edges[i]) * (self.y_edges[j + 1] - self.y_edges[j])
    }

    pub fn cell_mass(&self, i: usize, j: usize) -> f64 {
        self.value(i, j) * self.cell_area(i, j)
    }

    pub fn max_cell_mass(&self) -> f64 {
        (0..self.nx())
            .flat_map(|i| (0..self.ny()).map(move |j| (i, j)))
            .map(|(i, j)| self.cell_mass(i, j))
            .fold(0.0, f64::max)
    }

    pub fn mass(&self) -> f64 {
        (0..self.nx())
            .map(|i| (0..self.ny()).map(|j| self.cell_mass(i, j)).sum::<f64>())
            .sum()
    }

    /// Density of the first marginal.
    pub fn marginal_x(&self) -> Density1D {
        let vals = (0..self.nx())
            .map(|i| {
                (0..self.ny())
                    .map(|j| self.value(i, j) * (self.y_edges[j + 1] - self.y_edges[j]))
                    .sum()
            })
            .collect();
        Density1D::new(self.x_edges.clone(), vals).expect("marginal of a valid density")
    }

    /// Restriction of the density to the column `x ∈ [x_i, x_{i+1})`, as a
    /// density in `y`.
    pub fn column(&self, i: usize) -> Density1D {
        let vals = (0..self.ny()).map(|j| self.value(i, j)).collect();
        Density1D::new(self.y_edges.clone(), vals).expect("column of a valid density")
    }

    /// `|{f > τ}|`.
    pub fn distribution(&self, tau: f64) -> f64 {
        let mut s = 0.0;
        for i in 0..self.nx() {
            for j in 0..self.ny() {
                if self.value(i, j) > tau {
                    s += self.cell_area(i, j);
                }
            }
        }
        s
    }
}
