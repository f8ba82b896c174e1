//! Monotone transport: increasing rearrangement on the line and the
//! Knothe–Rosenblatt map in the plane.

use super::density::{Density1D, Density2D};
use crate::error::{Error, Result};
use crate::special_fn::GaussLegendre;
use serde::Serialize;

/// Relative mass agreement required of source and target.
pub const MASS_TOL: f64 = 1e-12;

fn check_mass(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0) || (a - b).abs() > MASS_TOL * a.max(b) {
        return Err(Error::MassMismatch {
            source_mass: a,
            target_mass: b,
        });
    }
    Ok(())
}

/// `T = G^← ∘ F` between two densities of equal mass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportMap1D {
    pub source: Density1D,
    pub target: Density1D,
    /// Break points `(x, T(x))` of the piecewise-affine map.
    pub knots: Vec<(f64, f64)>,
}

impl TransportMap1D {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.target.quantile(self.source.cdf(x))
    }

    /// Largest CDF residual `|μ(T ≤ y_j) - ν((-∞, y_j])|` over the target
    /// edges, with `{T ≤ y}` located by bisection.
    pub fn cdf_residual(&self) -> f64 {
        let (a, b) = (self.source.edges[0], *self.source.edges.last().unwrap());
        let mut worst = 0.0f64;
        for (j, &y) in self.target.edges.iter().enumerate() {
            let (mut lo, mut hi) = (a, b);
            if self.eval(b) <= y {
                lo = b;
            } else {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.eval(mid) <= y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            let pushed = self.source.cdf(lo);
            worst = worst.max((pushed - self.target.cdf_table()[j]).abs());
        }
        worst
    }

    /// `∫ φ(T(x)) f(x) dx`, exact up to the smoothness of `φ` on each affine piece.
    pub fn pushforward_integral(&self, phi: impl Fn(f64) -> f64, gl: &GaussLegendre) -> f64 {
        let mut cuts: Vec<f64> = self.knots.iter().map(|k| k.0).collect();
        cuts.extend_from_slice(&self.source.edges);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut s = 0.0;
        for w in cuts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let v = self.source.values[self.source.cell_of(0.5 * (w[0] + w[1]))];
            if v == 0.0 {
                continue;
            }
            s += v * gl.integrate(w[0], w[1], |x| phi(self.eval(x)));
        }
        s
    }

    /// Nondecreasing on a dense sample of the source support.
    pub fn is_monotone(&self, samples: usize) -> bool {
        let (a, b) = (self.source.edges[0], *self.source.edges.last().unwrap());
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=samples {
            let y = self.eval(a + (b - a) * i as f64 / samples as f64);
            if y < prev {
                return false;
            }
            prev = y;
        }
        true
    }
}

/// `∫ φ g` for a piecewise-constant density.
pub fn density_integral(d: &Density1D, phi: impl Fn(f64) -> f64, gl: &GaussLegendre) -> f64 {
    d.edges
        .windows(2)
        .zip(&d.values)
        .map(|(w, &v)| {
            if v == 0.0 {
                0.0
            } else {
                v * gl.integrate(w[0], w[1], &phi)
            }
        })
        .sum()
}

/// Increasing rearrangement of `mu` onto `nu`.
pub fn increasing_rearrangement_1d(mu: &Density1D, nu: &Density1D) -> Result<TransportMap1D> {
    check_mass(mu.mass(), nu.mass())?;
    let scale = mu.mass() / nu.mass();
    let nu = nu.scaled(scale)?;
    let mut levels: Vec<f64> = mu
        .cdf_table()
        .iter()
        .chain(nu.cdf_table())
        .copied()
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let knots = levels
        .iter()
        .map(|&p| (mu.quantile(p), nu.quantile(p)))
        .collect();
    Ok(TransportMap1D {
        source: mu.clone(),
        target: nu,
        knots,
    })
}

/// `T(x₁, x₂) = (T₁(x₁), T₂(x₂ | x₁))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnotheRosenblatt {
    pub source: Density2D,
    pub target: Density2D,
    pub first: TransportMap1D,
    #[serde(skip)]
    src_cols: Vec<Density1D>,
    #[serde(skip)]
    tgt_cols: Vec<Density1D>,
}

impl KnotheRosenblatt {
    fn target_column(&self, y1: f64) -> usize {
        let marg = &self.first.target;
        let mut j = marg.cell_of(y1);
        if marg.cell_mass(j) == 0.0 {
            // a boundary landing: move to the neighbouring column with mass
            if j + 1 < marg.len() && marg.cell_mass(j + 1) > 0.0 && y1 >= marg.edges[j + 1] - 1e-12
            {
                j += 1;
            } else if j > 0 && marg.cell_mass(j - 1) > 0.0 {
                j -= 1;
            }
        }
        j
    }

    /// Conditional map `x₂ ↦ T₂(x₂ | column i → column j)`.
    #[inline]
    fn conditional(&self, i: usize, j: usize, x2: f64) -> f64 {
        let s = &self.src_cols[i];
        let t = &self.tgt_cols[j];
        let p = s.cdf(x2) / s.mass();
        t.quantile(p * t.mass())
    }

    pub fn eval(&self, x: [f64; 2]) -> [f64; 2] {
        let y1 = self.first.eval(x[0]);
        let i = self.first.source.cell_of(x[0]);
        let j = self.target_column(y1);
        [y1, self.conditional(i, j, x[1])]
    }

    /// `∫ φ(T(y)) f(y) dy` integrated piecewise on the cells where `T` is
    /// affine in each coordinate.
    pub fn pushforward_integral(&self, phi: &dyn Fn([f64; 2]) -> f64, gl: &GaussLegendre) -> f64 {
        let src = &self.source;
        let marg = &self.first.source;
        let mut x_cuts: Vec<f64> = self.first.knots.iter().map(|k| k.0).collect();
        x_cuts.extend_from_slice(&src.x_edges);
        x_cuts.sort_by(f64::total_cmp);
        x_cuts.dedup();
        let mut total = 0.0;
        for w in x_cuts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let i = marg.cell_of(0.5 * (w[0] + w[1]));
            if marg.cell_mass(i) == 0.0 {
                continue;
            }
            let j = self.target_column(self.first.eval(0.5 * (w[0] + w[1])));
            let (sc, tc) = (&self.src_cols[i], &self.tgt_cols[j]);
            let mut y_cuts: Vec<f64> = tc
                .cdf_table()
                .iter()
                .map(|&c| sc.quantile(c / tc.mass() * sc.mass()))
                .collect();
            y_cuts.extend_from_slice(&src.y_edges);
            y_cuts.sort_by(f64::total_cmp);
            y_cuts.dedup();
            for v in y_cuts.windows(2) {
                if v[1] <= v[0] {
                    continue;
                }
                let k = sc.cell_of(0.5 * (v[0] + v[1]));
                let f = src.value(i, k);
                if f == 0.0 {
                    continue;
                }
                total += f * gl.integrate(w[0], w[1], |x1| {
                    let y1 = self.first.eval(x1);
                    gl.integrate(v[0], v[1], |x2| phi([y1, self.conditional(i, j, x2)]))
                });
            }
        }
        total
    }
}

/// `∫ φ g` for a gridded planar density.
pub fn density_integral_2d(
    d: &Density2D,
    phi: &dyn Fn([f64; 2]) -> f64,
    gl: &GaussLegendre,
) -> f64 {
    let mut s = 0.0;
    for i in 0..d.nx() {
        for j in 0..d.ny() {
            let v = d.value(i, j);
            if v == 0.0 {
                continue;
            }
            s += v * gl.integrate(d.x_edges[i], d.x_edges[i + 1], |x| {
                gl.integrate(d.y_edges[j], d.y_edges[j + 1], |y| phi([x, y]))
            });
        }
    }
    s
}

/// Knothe–Rosenblatt rearrangement of `mu` onto `nu`.
pub fn knothe_rosenblatt_2d(mu: &Density2D, nu: &Density2D) -> Result<KnotheRosenblatt> {
    check_mass(mu.mass(), nu.mass())?;
    let first = increasing_rearrangement_1d(&mu.marginal_x(), &nu.marginal_x())?;
    Ok(KnotheRosenblatt {
        source: mu.clone(),
        target: nu.clone(),
        first,
        src_cols: (0..mu.nx()).map(|i| mu.column(i)).collect(),
        tgt_cols: (0..nu.nx()).map(|j| nu.column(j)).collect(),
    })
}

/// A named bounded test function.
pub type TestFunction = (&'static str, Box<dyn Fn([f64; 2]) -> f64 + Send + Sync>);

/// The fixed test-function battery for change-of-variables checks, each
/// bounded by one in absolute value.
pub fn test_battery() -> Vec<TestFunction> {
    vec![
        ("one", Box::new(|_| 1.0)),
        ("cos_x", Box::new(|z| z[0].cos())),
        ("sin_y", Box::new(|z| z[1].sin())),
        ("gauss", Box::new(|z| (-(z[0] * z[0] + z[1] * z[1])).exp())),
        ("tanh_xy", Box::new(|z| (z[0] * z[1]).tanh())),
        ("cos_mix", Box::new(|z| (z[0] + 2.0 * z[1]).cos())),
        ("sin_mix", Box::new(|z| (3.0 * z[0] - z[1]).sin())),
        ("bump_x", Box::new(|z| 1.0 / (1.0 + z[0] * z[0]))),
        (
            "ripple",
            Box::new(|z| (z[0] * z[0] - z[1]).sin() * (-z[1] * z[1]).exp()),
        ),
        (
            "atan",
            Box::new(|z| (z[0] - z[1]).atan() / std::f64::consts::FRAC_PI_2),
        ),
    ]
}

/// Change-of-variables residuals `|∫φ(T)f - ∫φ g|` over the battery.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushforwardReport {
    pub residuals: Vec<(String, f64)>,
    pub max_residual: f64,
    /// `2 ×` the largest source or target cell mass.
    pub tolerance: f64,
    pub pass: bool,
}

pub fn pushforward_check(map: &KnotheRosenblatt) -> PushforwardReport {
    let gl = GaussLegendre::new(8);
    let battery = test_battery();
    let residuals: Vec<(String, f64)> = crate::par::map_slice(&battery, |(name, phi)| {
        let lhs = map.pushforward_integral(phi.as_ref(), &gl);
        let rhs = density_integral_2d(&map.target, phi.as_ref(), &gl);
        (name.to_string(), (lhs - rhs).abs())
    });
    let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    let tolerance = 2.0 * map.source.max_cell_mass().max(map.target.max_cell_mass());
    PushforwardReport {
        pass: max_residual <= tolerance,
        residuals,
        max_residual,
        tolerance,
    }
}
