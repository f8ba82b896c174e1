//! Gauss–Jacobi rules via Golub–Welsch, plus a tanh-sinh integrator for
//! endpoint-singular integrands.

use super::gamma::ln_gamma_signed;
use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Gauss rule on `[-1, 1]` for the weight `(1-t)^(e + extra) (1+t)^e`.
///
/// `jacobi_exponent` is `e`; `extra_right` is an additional exponent on the
/// `(1-t)` factor, zero for the plain symmetric rules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub jacobi_exponent: f64,
    pub extra_right: f64,
    pub order: usize,
}

impl QuadratureRule {
    /// `Σ w_i f(t_i)`.
    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Total mass of the weight function.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Eigenvalues and squared first eigenvector components of the symmetric
/// tridiagonal matrix with diagonal `d` and sub-diagonal `e` (`e[0]` unused),
/// by implicit QL with Wilkinson shifts.
pub fn tridiagonal_eigen(mut d: Vec<f64>, mut e: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = d.len();
    assert_eq!(e.len(), n);
    let mut z = vec![0.0; n];
    if n == 0 {
        return (d, z);
    }
    z[0] = 1.0;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let z2 = z.iter().map(|v| v * v).collect();
    (d, z2)
}

/// Nodes and weights of the `order`-point Gauss rule for
/// `(1-t)^alpha (1+t)^beta`, nodes increasing.
pub fn gauss_jacobi_general(order: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(domain("quadrature order must be at least 1"));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(domain(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let ab = alpha + beta;
    let mut diag = vec![0.0; order];
    let mut off = vec![0.0; order];
    diag[0] = (beta - alpha) / (ab + 2.0);
    for n in 1..order {
        let nf = n as f64;
        let s = 2.0 * nf + ab;
        diag[n] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        let b2 = if n == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0))
        } else {
            4.0 * nf * (nf + alpha) * (nf + beta) * (nf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[n] = b2.sqrt();
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2
        + ln_gamma_signed(alpha + 1.0).unwrap().0
        + ln_gamma_signed(beta + 1.0).unwrap().0
        - ln_gamma_signed(ab + 2.0).unwrap().0;
    let mu0 = ln_mu0.exp();
    let (x, z2) = tridiagonal_eigen(diag, off);
    let mut pairs: Vec<(f64, f64)> = x.into_iter().zip(z2.into_iter().map(|z| mu0 * z)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Gauss rule for the Funk–Hecke weight `(1-t²)^((N-3)/2)`.
pub fn gauss_jacobi_rule(order: usize, n_dim: usize) -> Result<QuadratureRule> {
    if n_dim < 2 {
        return Err(domain(format!("dimension must be at least 2, got {n_dim}")));
    }
    let e = (n_dim as f64 - 3.0) / 2.0;
    let (nodes, weights) = gauss_jacobi_general(order, e, e)?;
    Ok(QuadratureRule {
        nodes,
        weights,
        jacobi_exponent: e,
        extra_right: 0.0,
        order,
    })
}

/// Gauss rule for `(1-t)^(β/2) (1-t²)^((N-3)/2)`, which integrates
/// `K_β(t) P_k(t)` against the sphere weight exactly once `order > k/2`.
pub fn funk_hecke_rule(order: usize, n_dim: usize, beta: f64) -> Result<QuadratureRule> {
    if n_dim < 2 {
        return Err(domain(format!("dimension must be at least 2, got {n_dim}")));
    }
    let e = (n_dim as f64 - 3.0) / 2.0;
    let (nodes, weights) = gauss_jacobi_general(order, e + beta / 2.0, e)?;
    Ok(QuadratureRule {
        nodes,
        weights,
        jacobi_exponent: e,
        extra_right: beta / 2.0,
        order,
    })
}

/// Gauss–Legendre nodes/weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) =
            gauss_jacobi_general(order.max(1), 0.0, 0.0).expect("Legendre weight is valid");
        Self { nodes, weights }
    }

    /// `∫_a^b f`.
    #[inline]
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

const TS_MAX_LEVEL: usize = 11;
const TS_UMAX: f64 = 6.0;

/// Double-exponential quadrature on `[a, b]`. The integrand receives the
/// abscissa and its distances to `a` and `b` computed without cancellation.
pub fn tanh_sinh_dist(
    a: f64,
    b: f64,
    tol: f64,
    mut f: impl FnMut(f64, f64, f64) -> f64,
) -> Integral {
    if b == a {
        return Integral {
            value: 0.0,
            error: 0.0,
        };
    }
    let half = 0.5 * (b - a);
    let mut eval = |u: f64| -> f64 {
        let v = FRAC_PI_2 * u.sinh();
        let ch = v.cosh();
        let w = half * FRAC_PI_2 * u.cosh() / (ch * ch);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let near = half * 2.0 / (1.0 + (2.0 * v.abs()).exp());
        if near <= 0.0 {
            return 0.0;
        }
        let (x, da, db) = if v < 0.0 {
            (a + near, near, 2.0 * half - near)
        } else {
            (b - near, 2.0 * half - near, near)
        };
        w * f(x, da, db)
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= TS_UMAX {
        let u = k as f64 * h;
        sum += eval(u) + eval(-u);
        k += 1;
    }
    let mut prev = sum * h;
    let mut err = f64::INFINITY;
    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let mut add = 0.0;
        let mut j = 1;
        while (j as f64) * h <= TS_UMAX {
            let u = j as f64 * h;
            add += eval(u) + eval(-u);
            j += 2;
        }
        sum += add;
        let cur = sum * h;
        err = (cur - prev).abs();
        prev = cur;
        if level >= 3 && err <= tol * cur.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Integral {
        value: prev,
        error: err,
    }
}

/// [`tanh_sinh_dist`] for integrands that only need the abscissa.
pub fn tanh_sinh(a: f64, b: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> Integral {
    tanh_sinh_dist(a, b, tol, |x, da, db| {
        if da == 0.0 || db == 0.0 || x <= a.min(b) || x >= a.max(b) {
            0.0
        } else {
            f(x)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_orders() {
        let g = GaussLegendre::new(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((g.nodes[0] + r).abs() < 1e-15 && (g.nodes[1] - r).abs() < 1e-15);
        assert!((g.weights[0] - 1.0).abs() < 1e-14);
        assert!((g.integrate(0.0, 2.0, |x| x.powi(3)) - 4.0).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_nodes() {
        let r = gauss_jacobi_rule(8, 2).unwrap();
        for (i, &x) in r.nodes.iter().enumerate() {
            let expect = -((2 * i + 1) as f64 * std::f64::consts::PI / 16.0).cos();
            assert!((x - expect).abs() < 1e-14);
            assert!((r.weights[i] - std::f64::consts::PI / 8.0).abs() < 1e-14);
        }
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let v = tanh_sinh(0.0, 1.0, 1e-13, |x| x.powf(-0.5));
        assert!((v.value - 2.0).abs() < 1e-11, "{v:?}");
        let v = tanh_sinh_dist(-1.0, 1.0, 1e-13, |_, da, db| 1.0 / (da * db).sqrt());
        assert!((v.value - std::f64::consts::PI).abs() < 1e-11, "{v:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_jacobi_general(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi_general(3, -1.0, 0.0).is_err());
    }
}
