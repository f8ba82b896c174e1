//! Eigenvalues of the zonal kernel `K_β(t) = (1-t)^{β/2}` and of the
//! difference operator `I_β[u](ω) = 2∫|ω-ξ|^β (u(ω)-u(ξ)) dξ` on `S^{N-1}`.
//!
//! The kernel eigenvalues factor as `θ_k = (-1)^k C_β μ_k`. The ratio
//! `μ_{k+1}/μ_k = (β/2-k)/((β+2N-2)/2+k)` is a recursion for `μ`, so the
//! recursion for `θ` itself carries an extra minus sign:
//! `θ_{k+1} = -(β/2-k)/((β+2N-2)/2+k) · θ_k`.

use crate::error::{domain, precondition, Error, Result};
use crate::special_fn::{
    ball_volume, gamma, ln_gamma_signed, ln_rgamma_signed, rgamma, spherical_poly, QuadratureRule,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Default table depth.
pub const DEFAULT_K_MAX: usize = 200;

/// Dimension, kernel exponent and table depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub n: usize,
    pub beta: f64,
    pub k_max: usize,
}

impl SpectralParams {
    pub fn new(n: usize, beta: f64, k_max: usize) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("dimension N must be at least 2, got {n}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(domain(format!("beta must be positive, got {beta}")));
        }
        if k_max < 2 {
            return Err(domain(format!("k_max must be at least 2, got {k_max}")));
        }
        Ok(Self { n, beta, k_max })
    }

    fn a(&self) -> f64 {
        (self.beta + 2.0) / 2.0
    }

    fn c(&self) -> f64 {
        (self.beta + 2.0 * self.n as f64 - 2.0) / 2.0
    }
}

/// Eigenvalue table for one `(N, β)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralTable {
    pub params: SpectralParams,
    pub theta: Vec<f64>,
    pub mu: Vec<f64>,
    pub lambda: Vec<f64>,
    pub c_beta: f64,
    pub c_tilde: f64,
    pub d_beta: f64,
    pub lambda_inf: f64,
    pub omega_n: f64,
    pub omega_nm1: f64,
}

fn ln_c_beta(p: &SpectralParams) -> f64 {
    let n = p.n as f64;
    let b = p.beta;
    ((n - 1.0) * ball_volume(p.n - 1)).ln()
        + (b + 2.0 * n - 4.0) / 2.0 * LN_2
        + ln_gamma_signed((b + n - 1.0) / 2.0).unwrap().0
        + ln_gamma_signed((n - 1.0) / 2.0).unwrap().0
        + ln_gamma_signed((b + 2.0) / 2.0).unwrap().0
}

/// `C_β = (N-1)ω_{N-1} 2^{(β+2N-4)/2} Γ((β+N-1)/2) Γ((N-1)/2) Γ((β+2)/2)`.
pub fn c_beta(p: &SpectralParams) -> f64 {
    ln_c_beta(p).exp()
}

/// `μ_k = 1/(Γ((β+2)/2-k) Γ((β+2N-2)/2+k))` in log space; zero past the
/// pole for even β.
pub fn mu_closed(p: &SpectralParams, k: usize) -> f64 {
    match ln_rgamma_signed(p.a() - k as f64) {
        None => 0.0,
        Some((l1, s1)) => {
            let (l2, s2) = ln_rgamma_signed(p.c() + k as f64).unwrap();
            s1 * s2 * (l1 + l2).exp()
        }
    }
}

/// Closed form `θ_k = (-1)^k C_β μ_k`, evaluated in log-Γ space.
pub fn theta_closed(p: &SpectralParams, k: usize) -> f64 {
    match ln_rgamma_signed(p.a() - k as f64) {
        None => 0.0,
        Some((l1, s1)) => {
            let (l2, _) = ln_rgamma_signed(p.c() + k as f64).unwrap();
            let sign = if k.is_multiple_of(2) { s1 } else { -s1 };
            sign * (ln_c_beta(p) + l1 + l2).exp()
        }
    }
}

fn check_rule(p: &SpectralParams, rule: &QuadratureRule) -> Result<()> {
    let e = (p.n as f64 - 3.0) / 2.0;
    if (rule.jacobi_exponent - e).abs() > 1e-15 {
        return Err(precondition(format!(
            "rule built for exponent {} but N = {} needs {e}",
            rule.jacobi_exponent, p.n
        )));
    }
    Ok(())
}

/// Funk–Hecke integral `(N-1)ω_{N-1} ∫ K_β(t) P_k(t) (1-t²)^{(N-3)/2} dt`
/// by quadrature.
///
/// The integral is first moved onto the Rodrigues side: `k` integrations by
/// parts give
/// `∏_{j<k}(j-β/2) / (2^k ((N-1)/2)_k) · ∫ (1-t)^{β/2} (1+t)^k (1-t²)^{(N-3)/2} dt`,
/// a positive integrand, so the quadrature error stays relative even when
/// `θ_k` is many orders below `θ_0`. With [`funk_hecke_rule`](crate::special_fn::funk_hecke_rule)
/// the remaining integrand is a polynomial and the rule is exact.
pub fn theta_quadrature(p: &SpectralParams, k: usize, rule: &QuadratureRule) -> Result<f64> {
    check_rule(p, rule)?;
    let e = rule.jacobi_exponent;
    let rest = p.beta / 2.0 - rule.extra_right;
    let integral = rule.apply(|t| (1.0 - t).powf(rest) * (1.0 + t).powi(k as i32));
    let mut factor = 1.0;
    for j in 0..k {
        factor *= (j as f64 - p.beta / 2.0) / (2.0 * (e + 1.0 + j as f64));
    }
    let n = p.n as f64;
    Ok((n - 1.0) * ball_volume(p.n - 1) * factor * integral)
}

/// The same Funk–Hecke integral summed directly against `P_k` at the nodes.
/// Accurate to about `ε·θ_0` in absolute terms.
pub fn theta_quadrature_direct(p: &SpectralParams, k: usize, rule: &QuadratureRule) -> Result<f64> {
    check_rule(p, rule)?;
    let rest = p.beta / 2.0 - rule.extra_right;
    let integral = rule.apply(|t| (1.0 - t).powf(rest) * spherical_poly(k, p.n, t));
    Ok((p.n as f64 - 1.0) * ball_volume(p.n - 1) * integral)
}

/// `μ_0..μ_{k_max}`: closed-form `μ_0`, then the exact rational recursion.
pub fn mu_sequence(p: &SpectralParams) -> Vec<f64> {
    let mut mu = Vec::with_capacity(p.k_max + 1);
    let mut m = mu_closed(p, 0);
    for k in 0..=p.k_max {
        mu.push(m);
        let kf = k as f64;
        m *= (p.beta / 2.0 - kf) / (p.c() + kf);
    }
    mu
}

/// `θ_k` from the sign-corrected recursion.
pub fn theta_sequence(p: &SpectralParams) -> Vec<f64> {
    let c = c_beta(p);
    mu_sequence(p)
        .into_iter()
        .enumerate()
        .map(|(k, m)| if k % 2 == 0 { c * m } else { -c * m })
        .collect()
}

/// `λ_k = 2^{1+β/2}(θ_0 - θ_k)` with `λ_0 = 0` exactly.
pub fn lambda_sequence(p: &SpectralParams) -> Vec<f64> {
    let th = theta_sequence(p);
    let f = 2f64.powf(1.0 + p.beta / 2.0);
    th.iter()
        .enumerate()
        .map(|(k, &t)| if k == 0 { 0.0 } else { f * (th[0] - t) })
        .collect()
}

/// Eigenvalue of `u ↦ 2∫|ω-ξ|^b (u(ω)-u(ξ)) dξ` on degree-`k` harmonics for
/// any real `b > 1-N-2`, including the hypersingular range `b < 0`.
///
/// Writes `λ_k = K [1/Γ(c) - ∏_{j<k}(j-b/2) / Γ(c+k)]` with `c = (b+2N-2)/2`
/// and `K = 2^{1+b/2}(N-1)ω_{N-1} 2^{(b+2N-4)/2} Γ((b+N-1)/2) Γ((N-1)/2)`,
/// which has no removable poles.
pub fn marchaud_eigenvalue(n: usize, b: f64, k: usize) -> f64 {
    let nf = n as f64;
    let c = (b + 2.0 * nf - 2.0) / 2.0;
    let kk = 2f64.powf(1.0 + b / 2.0)
        * (nf - 1.0)
        * ball_volume(n - 1)
        * 2f64.powf((b + 2.0 * nf - 4.0) / 2.0)
        * gamma((b + nf - 1.0) / 2.0)
        * gamma((nf - 1.0) / 2.0);
    // ∏_{j<k}(j - b/2) / Γ(c+k) in log space; it overflows term by term
    let mut ln_prod = 0.0;
    let mut sign = 1.0;
    for j in 0..k {
        let f = j as f64 - b / 2.0;
        if f == 0.0 {
            return kk * rgamma(c);
        }
        ln_prod += f.abs().ln();
        sign *= f.signum();
    }
    let ratio = match ln_rgamma_signed(c + k as f64) {
        Some((l, sg)) => sign * sg * (ln_prod + l).exp(),
        None => 0.0,
    };
    kk * (rgamma(c) - ratio)
}

/// Gap constant `D_β` (three branches in β).
pub fn d_beta(p: &SpectralParams) -> f64 {
    let b = p.beta;
    let n = p.n as f64;
    let base = b * mu_closed(p, 0) * c_tilde(p) / (b + 2.0 * n - 2.0);
    let branch = if b < 2.0 {
        1.0 - (2.0 - b) / (b + 2.0 * n)
    } else if b <= 4.0 {
        1.0
    } else {
        1.0 - (b - 2.0) * (b - 4.0) / ((b + 2.0 * n) * (b + 2.0 * n + 2.0))
    };
    base * branch
}

fn c_tilde(p: &SpectralParams) -> f64 {
    2f64.powf(1.0 + p.beta / 2.0) * c_beta(p)
}

impl SpectralTable {
    pub fn new(p: SpectralParams) -> Self {
        let mu = mu_sequence(&p);
        let c = c_beta(&p);
        let theta: Vec<f64> = mu
            .iter()
            .enumerate()
            .map(|(k, &m)| if k % 2 == 0 { c * m } else { -c * m })
            .collect();
        let f = 2f64.powf(1.0 + p.beta / 2.0);
        let lambda = theta
            .iter()
            .enumerate()
            .map(|(k, &t)| if k == 0 { 0.0 } else { f * (theta[0] - t) })
            .collect();
        let c_tilde = f * c;
        Self {
            params: p,
            lambda_inf: c_tilde * mu[0],
            d_beta: d_beta(&p),
            theta,
            mu,
            lambda,
            c_beta: c,
            c_tilde,
            omega_n: ball_volume(p.n),
            omega_nm1: ball_volume(p.n - 1),
        }
    }

    pub fn k_max(&self) -> usize {
        self.params.k_max
    }
}

/// Outcome of [`verify_gap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: usize,
    pub beta: f64,
    pub d_beta: f64,
    pub min_gap: f64,
    pub argmin_k: usize,
    pub slack: f64,
}

/// Tolerance on `min_k (λ_1 - λ_k) - D_β`.
pub const GAP_TOLERANCE: f64 = 1e-9;

/// Checks `λ_1 = max λ_k` and `λ_1 - λ_k ≥ D_β` for `2 ≤ k ≤ k_max`.
pub fn verify_gap(table: &SpectralTable) -> Result<GapReport> {
    let p = table.params;
    if p.k_max < 10 {
        return Err(precondition(format!(
            "verify_gap needs k_max >= 10, got {}",
            p.k_max
        )));
    }
    let l = &table.lambda;
    let case = |k: usize| format!("N={}, beta={}, k={k}", p.n, p.beta);
    for (k, &v) in l.iter().enumerate() {
        if v > l[1] + GAP_TOLERANCE * l[1].abs() {
            return Err(Error::Violation {
                check: "lambda_1 maximality".into(),
                case: case(k),
                slack: l[1] - v,
            });
        }
    }
    let (argmin_k, min_gap) = (2..=p.k_max)
        .map(|k| (k, l[1] - l[k]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let slack = min_gap - table.d_beta;
    if slack < -GAP_TOLERANCE * table.d_beta.max(1.0) {
        return Err(Error::Violation {
            check: "spectral gap".into(),
            case: case(argmin_k),
            slack,
        });
    }
    Ok(GapReport {
        n: p.n,
        beta: p.beta,
        d_beta: table.d_beta,
        min_gap,
        argmin_k,
        slack,
    })
}

/// Sign and monotonicity structure of `λ_k - λ_∞`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    /// `⌈β/2⌉`.
    pub k_tilde: usize,
    /// Largest `k < β/2 + 1`.
    pub alternation_last_k: usize,
    /// `(-1)^k (λ_k - λ_∞) < 0` for every `k < β/2 + 1`.
    pub alternation_holds: bool,
    /// First index from which `λ_k` is monotone up to `k_max`.
    pub monotone_from: usize,
    /// `λ_k → λ_∞` monotonically for `k > k_tilde`.
    pub monotone_tail_holds: bool,
    /// For even β, first index of the exact plateau `λ_k = λ_∞`.
    pub plateau_from: Option<usize>,
    /// Signs of `λ_k - λ_∞` for `k ≤ k_max` (`0` on the plateau).
    pub signs: Vec<i8>,
}

/// Reports the initial oscillation of `λ_k` around `λ_∞` and its monotone tail.
pub fn oscillation_profile(table: &SpectralTable) -> Result<OscillationReport> {
    let p = table.params;
    if !((p.k_max as f64) > p.beta / 2.0 + 2.0) {
        return Err(precondition(format!(
            "oscillation_profile needs k_max > beta/2 + 2, got k_max = {}",
            p.k_max
        )));
    }
    let linf = table.lambda_inf;
    let tol = 1e-12 * linf;
    let diff: Vec<f64> = table.lambda.iter().map(|l| l - linf).collect();
    let signs: Vec<i8> = diff
        .iter()
        .map(|&d| {
            if d.abs() <= tol {
                0
            } else if d > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let k_tilde = (p.beta / 2.0).ceil() as usize;
    let bound = p.beta / 2.0 + 1.0;
    let alternation_last_k = (bound.ceil() as usize).saturating_sub(1);
    let alternation_holds = (0..=alternation_last_k.min(p.k_max)).all(|k| {
        let s = if k % 2 == 0 { diff[k] } else { -diff[k] };
        s < 0.0
    });
    let l = &table.lambda;
    let mut monotone_from = p.k_max;
    let dir = (l[p.k_max] - l[p.k_max - 1]).signum();
    for k in (1..p.k_max).rev() {
        let step = l[k + 1] - l[k];
        if step == 0.0 || step.signum() == dir || step.abs() <= tol {
            monotone_from = k;
        } else {
            break;
        }
    }
    let even = (p.beta / 2.0).fract() == 0.0;
    let plateau_from = even.then(|| p.beta as usize / 2 + 1);
    let monotone_tail_holds = match plateau_from {
        Some(m) => (m..=p.k_max).all(|k| signs[k] == 0),
        None => {
            let start = k_tilde + 1;
            (start..p.k_max).all(|k| {
                diff[k + 1].abs() <= diff[k].abs() && diff[k + 1].signum() == diff[k].signum()
            })
        }
    };
    Ok(OscillationReport {
        k_tilde,
        alternation_last_k,
        alternation_holds,
        monotone_from,
        monotone_tail_holds,
        plateau_from,
        signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::funk_hecke_rule;
    use std::f64::consts::PI;

    fn p(n: usize, beta: f64) -> SpectralParams {
        SpectralParams::new(n, beta, 50).unwrap()
    }

    #[test]
    fn planar_quadratic_kernel() {
        let q = p(2, 2.0);
        assert!((theta_closed(&q, 0) - 2.0 * PI).abs() < 1e-12);
        assert!((theta_closed(&q, 1) + PI).abs() < 1e-12);
        assert_eq!(theta_closed(&q, 2), 0.0);
        let t = SpectralTable::new(q);
        assert!((t.lambda[1] - 12.0 * PI).abs() < 1e-11);
        assert!((t.lambda[2] - 8.0 * PI).abs() < 1e-11);
        assert!((t.d_beta - 4.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        let q = p(3, 1.0);
        let rule = funk_hecke_rule(20, 3, 1.0).unwrap();
        for k in 0..10 {
            let a = theta_closed(&q, k);
            let b = theta_quadrature(&q, k, &rule).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{k}: {a} {b}");
        }
    }

    #[test]
    fn marchaud_matches_positive_branch() {
        let q = p(3, 2.5);
        let t = SpectralTable::new(q);
        for k in 0..8 {
            let a = marchaud_eigenvalue(3, 2.5, k);
            assert!((a - t.lambda[k]).abs() <= 1e-12 * t.lambda_inf, "{k}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(SpectralParams::new(1, 1.0, 10).is_err());
        assert!(SpectralParams::new(2, 0.0, 10).is_err());
        assert!(SpectralParams::new(2, 1.0, 1).is_err());
    }
}
