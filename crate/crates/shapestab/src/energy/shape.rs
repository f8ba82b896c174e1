//! Energies of nearly-spherical sets.
//!
//! Writing `x = r z`, `y = ρ w` with `z, w ∈ S^{N-1}` turns `∫_E∫_E k(|x-y|)`
//! into `∫∫_{S×S} F(R(z), R(w), |z-w|)` where
//! `F(a, b, d) = ∫_0^a ∫_0^b k(√((r-ρ)² + rρd²)) (rρ)^{N-1} dρ dr`.
//! For homogeneous kernels of degree `κ` the splitting
//! `F(a,b) = ½(F(a,a) + F(b,b)) - ½ ∫_a^b∫_a^b` makes the diagonal part exact:
//! `∫_S F(a, a, |z-w|) dw = a^{2N+κ} K(B)/|S^{N-1}|` with `K(B)` the ball
//! energy. Only the small square remainder needs the double sphere sum.

use super::kernel::Radial;
use super::radial::{ball_pair, g_ball, v_ball};
use crate::error::{domain, Result};
use crate::geometry::NearlySphericalShape;
use crate::par::sum_rows;
use crate::special_fn::GaussLegendre;
use serde::{Deserialize, Serialize};

/// A quadrature value with an error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Default Gauss–Legendre order per direction for the radial squares.
pub const DEFAULT_BOX_ORDER: usize = 6;

/// Homogeneous kernel in terms of the squared distance.
#[derive(Clone, Copy, Debug)]
struct Homogeneous {
    /// `k(|x|) = |x|^power`.
    power: f64,
}

impl Homogeneous {
    #[inline]
    fn eval_sq(&self, d2: f64) -> f64 {
        d2.powf(0.5 * self.power)
    }
}

/// `∫_0^1 g(v) dv` with panels graded geometrically toward `v = 1`.
#[inline]
fn graded_unit(gl: &GaussLegendre, levels: usize, mut g: impl FnMut(f64) -> f64) -> f64 {
    if levels == 0 {
        return gl.integrate(0.0, 1.0, g);
    }
    let mut s = 0.0;
    let mut a = 0.0;
    let mut width = 0.5;
    for _ in 0..levels {
        s += gl.integrate(a, a + width, &mut g);
        a += width;
        width *= 0.5;
    }
    s + gl.integrate(a, 1.0, g)
}

fn grading_levels(span: f64, d: f64) -> usize {
    if d <= 0.0 {
        return 40;
    }
    let ratio = span / d;
    if ratio <= 0.5 {
        0
    } else {
        (ratio.log2().ceil() as i64 + 2).clamp(1, 40) as usize
    }
}

/// `∫_a^b ∫_a^b k(√((r-ρ)² + rρd²)) (rρ)^{N-1} dρ dr`.
fn square_remainder(n: usize, k: Homogeneous, a: f64, b: f64, d: f64, gl: &GaussLegendre) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let span = hi - lo;
    if span == 0.0 {
        return 0.0;
    }
    let d2 = d * d;
    let levels = grading_levels(span, d);
    let e = n as i32 - 1;
    // symmetric integrand: twice the triangle ρ < r, with ρ = lo + (r - lo) v
    let outer = gl.integrate(lo, hi, |r| {
        let h = r - lo;
        h * graded_unit(gl, levels, |v| {
            let rho = lo + h * v;
            let dr = h * (1.0 - v);
            k.eval_sq(dr * dr + r * rho * d2) * (r * rho).powi(e)
        })
    });
    2.0 * outer
}

fn homogeneous_shape_energy(
    shape: &NearlySphericalShape,
    k: Homogeneous,
    ball_energy: f64,
    order: usize,
) -> (f64, Estimate) {
    let n = shape.n();
    let grid = &shape.grid;
    let radii = shape.radii();
    let p = 2.0 * n as f64 + k.power;
    let gamma = ball_energy / grid.area();
    let gl = GaussLegendre::new(order);
    let gl2 = GaussLegendre::new(2 * order);
    let m = grid.len();
    let rows: Vec<(f64, f64)> = crate::par::map_indexed(m, |i| {
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for j in 0..m {
            if i == j || radii[i] == radii[j] {
                continue;
            }
            let d = grid.chord(i, j);
            let w = grid.weights[j];
            s1 += w * square_remainder(n, k, radii[i], radii[j], d, &gl);
            s2 += w * square_remainder(n, k, radii[i], radii[j], d, &gl2);
        }
        (grid.weights[i] * s1, grid.weights[i] * s2)
    });
    let a2_lo: f64 = -0.5 * rows.iter().map(|r| r.0).sum::<f64>();
    let a2: f64 = -0.5 * rows.iter().map(|r| r.1).sum::<f64>();
    let rho = shape.equal_volume_radius();
    let ln_rho = rho.ln();
    let diag_excess: f64 = grid.integrate(|i, _| {
        let l = p * (radii[i].ln() - ln_rho);
        rho.powf(p) * l.exp_m1()
    });
    let deficit = gamma * diag_excess + a2;
    let total = rho.powf(p) * ball_energy + deficit;
    let err = (a2 - a2_lo).abs();
    (
        total,
        Estimate {
            value: deficit,
            error: err,
        },
    )
}

/// `G_β` of a nearly-spherical set and its deficit against the ball of the
/// same volume.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeEnergy {
    pub value: f64,
    pub deficit: f64,
    pub error: f64,
}

/// `G_β(E)` with the default radial order.
pub fn g_beta(shape: &NearlySphericalShape, beta: f64) -> Result<ShapeEnergy> {
    g_beta_with_order(shape, beta, DEFAULT_BOX_ORDER)
}

pub fn g_beta_with_order(
    shape: &NearlySphericalShape,
    beta: f64,
    order: usize,
) -> Result<ShapeEnergy> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    shape.validate()?;
    let gb = g_ball(shape.n(), beta);
    let (value, est) = homogeneous_shape_energy(shape, Homogeneous { power: beta }, gb, order);
    Ok(ShapeEnergy {
        value,
        deficit: est.value,
        error: est.error,
    })
}

/// `V_α(E)` and `V_α(E) - V_α(B_ρ)` (non-positive for non-balls).
pub fn v_alpha(shape: &NearlySphericalShape, alpha: f64) -> Result<ShapeEnergy> {
    let n = shape.n();
    if !(alpha > 0.0 && alpha < n as f64) {
        return Err(domain(format!("alpha must lie in (0, {n}), got {alpha}")));
    }
    shape.validate()?;
    let vb = v_ball(n, alpha);
    let k = Homogeneous {
        power: alpha - n as f64,
    };
    let (value, est) = homogeneous_shape_energy(shape, k, vb, DEFAULT_BOX_ORDER);
    Ok(ShapeEnergy {
        value,
        deficit: est.value,
        error: est.error,
    })
}

/// `F(a, b, d)` by tensor Gauss–Legendre, split at `r = ρ`.
fn full_radial(n: usize, h: Radial, a: f64, b: f64, d: f64, gl: &GaussLegendre) -> f64 {
    let (m, big) = if a <= b { (a, b) } else { (b, a) };
    let e = n as i32 - 1;
    let d2 = d * d;
    let f = |r: f64, rho: f64| {
        let dr = r - rho;
        h.eval((dr * dr + r * rho * d2).max(0.0).sqrt()) * (r * rho).powi(e)
    };
    // square [0,m]²: twice the triangle ρ = r v
    let levels = if d < 0.5 {
        grading_levels(1.0, d.max(1e-12))
    } else {
        0
    };
    let square = 2.0 * gl.integrate(0.0, m, |r| r * graded_unit(gl, levels, |v| f(r, r * v)));
    let strip = if big > m {
        gl.integrate(0.0, m, |r| gl.integrate(m, big, |rho| f(r, rho)))
    } else {
        0.0
    };
    square + strip
}

/// `∫_E∫_E h(|x-y|)` summing `F(R_i, R_j, d_ij)` over all grid pairs, with
/// `F` by tensor Gauss–Legendre of the given order.
pub fn direct_energy(shape: &NearlySphericalShape, h: Radial, order: usize) -> f64 {
    let n = shape.n();
    let grid = &shape.grid;
    let radii = shape.radii();
    let gl = GaussLegendre::new(order);
    let m = grid.len();
    sum_rows(m, |i| {
        let mut s = 0.0;
        for j in 0..m {
            s += grid.weights[j] * full_radial(n, h, radii[i], radii[j], grid.chord(i, j), &gl);
        }
        grid.weights[i] * s
    })
}

/// `G_β(E)` by the full reduced four-fold integral, without the diagonal
/// splitting. Slower and less accurate; kept as a cross-check.
pub fn g_beta_direct(shape: &NearlySphericalShape, beta: f64, order: usize) -> f64 {
    direct_energy(shape, Radial::attractive(beta), order)
}

/// `∫_E∫_E (|x-y|^β - L^β)_+` with `L = M^{1/β}`.
fn truncation_excess(shape: &NearlySphericalShape, beta: f64, cutoff: f64, order: usize) -> f64 {
    let n = shape.n();
    let grid = &shape.grid;
    let radii = shape.radii();
    let gl = GaussLegendre::new(order);
    let lb = cutoff.powf(beta);
    let l2 = cutoff * cutoff;
    let e = n as i32 - 1;
    let m = grid.len();
    let panels = 4;
    sum_rows(m, |i| {
        let mut s = 0.0;
        let a = radii[i];
        for (j, &b) in radii.iter().enumerate() {
            let d = grid.chord(i, j);
            let d2 = d * d;
            let reach = ((a - b) * (a - b) + a * b * d2).max(a * a).max(b * b);
            if reach <= l2 {
                continue;
            }
            let f = |r: f64, rho: f64| {
                let dr = r - rho;
                let q = dr * dr + r * rho * d2;
                if q <= l2 {
                    0.0
                } else {
                    (q.powf(0.5 * beta) - lb) * (r * rho).powi(e)
                }
            };
            let mut v = 0.0;
            for pr in 0..panels {
                let (r0, r1) = (
                    a * pr as f64 / panels as f64,
                    a * (pr + 1) as f64 / panels as f64,
                );
                for pq in 0..panels {
                    let (q0, q1) = (
                        b * pq as f64 / panels as f64,
                        b * (pq + 1) as f64 / panels as f64,
                    );
                    v += gl.integrate(r0, r1, |r| gl.integrate(q0, q1, |rho| f(r, rho)));
                }
            }
            s += grid.weights[j] * v;
        }
        grid.weights[i] * s
    })
}

/// Truncated energy `G_β^M(E)`; equals `G_β(E)` once `M ≥ (2 max R)^β`.
pub fn g_beta_truncated(shape: &NearlySphericalShape, beta: f64, m: f64) -> Result<ShapeEnergy> {
    if !(m > 0.0) {
        return Err(domain(format!(
            "truncation level must be positive, got {m}"
        )));
    }
    let g = g_beta(shape, beta)?;
    let cutoff = m.powf(1.0 / beta);
    if cutoff >= 2.0 * shape.max_radius() {
        return Ok(g);
    }
    let x = truncation_excess(shape, beta, cutoff, 12);
    let x2 = truncation_excess(shape, beta, cutoff, 6);
    let rho = shape.equal_volume_radius();
    let ball_t = ball_pair(shape.n(), Radial::Capped { beta, cutoff }, rho, rho);
    Ok(ShapeEnergy {
        value: g.value - x,
        deficit: g.value - x - ball_t,
        error: g.error + (x - x2).abs(),
    })
}

/// `G_β(B_ρ)` for the centred ball of radius `ρ`.
pub fn g_ball_radius(n: usize, beta: f64, rho: f64) -> f64 {
    rho.powf(2.0 * n as f64 + beta) * g_ball(n, beta)
}
