//! Reference computations used by the integration tests. Nothing here calls
//! the numerical routines of the library.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// `ln Γ(x)` for `x > 0` by upward recurrence and the Stirling series.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < 20.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2)
        + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// `π^{N/2} / Γ(N/2 + 1)`.
pub fn ball_volume(n: usize) -> f64 {
    (0.5 * n as f64 * PI.ln() - ln_gamma(0.5 * n as f64 + 1.0)).exp()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton's method.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; order];
    let mut w = vec![0.0; order];
    for i in 0..order {
        let mut z = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm) = if order == 1 { (z, 1.0) } else { (p1, p0) };
            let dp = order as f64 * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=order {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let d = order as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * d * d);
                break;
            }
        }
    }
    (x, w)
}

pub struct Gl {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Gl {
    pub fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        Self { x, w }
    }

    pub fn int(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let (h, c) = (0.5 * (b - a), 0.5 * (b + a));
        self.x
            .iter()
            .zip(&self.w)
            .map(|(x, w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    }

    /// Composite rule with panels shrinking geometrically toward both ends.
    pub fn graded(&self, a: f64, b: f64, levels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        let mut w = 0.5 * (b - a);
        let (mut lo, mut hi) = (mid, mid);
        for _ in 0..levels {
            w *= 0.5;
            s += self.int(lo - w, lo, &mut f) + self.int(hi, hi + w, &mut f);
            lo -= w;
            hi += w;
        }
        s + self.int(a, lo, &mut f) + self.int(hi, b, &mut f)
    }
}

/// Spherical polynomial `P_k` in dimension `N`, normalized by `P_k(1) = 1`,
/// from the explicit Gegenbauer sum (`N ≥ 3`) or `cos(k arccos t)` (`N = 2`).
pub fn spherical_poly(k: usize, n: usize, t: f64) -> f64 {
    if n == 2 {
        return (k as f64 * t.clamp(-1.0, 1.0).acos()).cos();
    }
    let lam = (n as f64 - 2.0) / 2.0;
    let c = |t: f64| -> f64 {
        let mut s = 0.0;
        for j in 0..=k / 2 {
            let ln = ln_gamma(k as f64 - j as f64 + lam)
                - ln_gamma(lam)
                - ln_gamma(j as f64 + 1.0)
                - ln_gamma((k - 2 * j) as f64 + 1.0);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * ln.exp() * (2.0 * t).powi((k - 2 * j) as i32);
        }
        s
    };
    c(t) / c(1.0)
}

/// `θ_k = (N-1)ω_{N-1} ∫_0^π (1-cos φ)^{β/2} P_k(cos φ) sin^{N-2}φ dφ`.
pub fn theta_direct(n: usize, beta: f64, k: usize) -> f64 {
    let gl = Gl::new(40);
    let pref = (n as f64 - 1.0) * ball_volume(n - 1);
    let f = |phi: f64| {
        (1.0 - phi.cos()).powf(beta / 2.0)
            * spherical_poly(k, n, phi.cos())
            * phi.sin().powi(n as i32 - 2)
    };
    let panels = 16 + 2 * k;
    let h = PI / panels as f64;
    let mut s = gl.graded(0.0, h, 30, f);
    for p in 1..panels {
        s += gl.int(p as f64 * h, (p + 1) as f64 * h, f);
    }
    pref * s
}

/// `θ_k` by `k` integrations by parts followed by the Beta integral
/// `∫(1-t)^a(1+t)^b dt = 2^{a+b+1} Γ(a+1)Γ(b+1)/Γ(a+b+2)`.
pub fn theta_rodrigues(n: usize, beta: f64, k: usize) -> f64 {
    let e = (n as f64 - 3.0) / 2.0;
    let mut factor = 1.0;
    for j in 0..k {
        factor *= (j as f64 - beta / 2.0) / (2.0 * (e + 1.0 + j as f64));
    }
    if factor == 0.0 {
        return 0.0;
    }
    let a = beta / 2.0 + e;
    let b = k as f64 + e;
    let ln_b =
        (a + b + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0);
    (n as f64 - 1.0) * ball_volume(n - 1) * factor * ln_b.exp()
}

/// Uniform point in the unit ball of `R^N` with radius drawn from stratum
/// `[j, j+1)/strata` of the radial volume fraction.
fn stratified_point(n: usize, j: usize, strata: usize, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let u = (j as f64 + rng.random::<f64>()) / strata as f64;
    let r = u.powf(1.0 / n as f64);
    let mut d = [0.0f64; 3];
    loop {
        let mut s = 0.0;
        for x in d.iter_mut().take(n) {
            *x = rng.random_range(-1.0..1.0);
            s += *x * *x;
        }
        if s > 1e-12 && s <= 1.0 {
            let s = s.sqrt();
            for x in d.iter_mut().take(n) {
                *x *= r / s;
            }
            return d;
        }
    }
}

/// Monte Carlo `G_β(B) = ω_N² E|X-Y|^β` with radially stratified `X`, `Y`.
/// Returns the estimate and its standard error over `batches` batches.
pub fn mc_g_ball(n: usize, beta: f64, pairs: usize, seed: u64) -> (f64, f64) {
    let batches = 50;
    let strata = 20;
    let per = pairs / batches / (strata * strata);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut means = Vec::with_capacity(batches);
    for _ in 0..batches {
        let mut s = 0.0;
        for i in 0..strata {
            for j in 0..strata {
                for _ in 0..per {
                    let x = stratified_point(n, i, strata, &mut rng);
                    let y = stratified_point(n, j, strata, &mut rng);
                    let d2: f64 = (0..n).map(|k| (x[k] - y[k]).powi(2)).sum();
                    s += d2.powf(beta / 2.0);
                }
            }
        }
        means.push(s / (per * strata * strata) as f64);
    }
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (batches - 1) as f64;
    let w2 = ball_volume(n).powi(2);
    (w2 * m, w2 * (var / batches as f64).sqrt())
}

/// `P_s` of the unit ball in polar coordinates around each interior point:
/// `(1-s)/ω_{N-1} ∫_B Σ_dir ρ(x, σ)^{-s}/s dσ dx`, `ρ` the distance to the
/// sphere along `σ`.
pub fn polar_p_s_ball(n: usize, s: f64) -> f64 {
    let gl = Gl::new(24);
    let rho = |r: f64, c: f64| -r * c + (1.0 - r * r * (1.0 - c * c)).sqrt();
    let inner = |r: f64| -> f64 {
        match n {
            2 => 2.0 * gl.graded(0.0, PI, 12, |th| rho(r, th.cos()).powf(-s) / s),
            3 => 2.0 * PI * gl.graded(0.0, PI, 12, |th| th.sin() * rho(r, th.cos()).powf(-s) / s),
            _ => unimplemented!(),
        }
    };
    let area = if n == 2 { 2.0 * PI } else { 4.0 * PI };
    let shell = |r: f64| area * r.powi(n as i32 - 1) * inner(r);
    let mut total = 0.0;
    let mut a = 0.0;
    let mut w = 0.5;
    for _ in 0..40 {
        total += gl.int(a, a + w, shell);
        a += w;
        w *= 0.5;
    }
    total += gl.int(a, 1.0, shell);
    (1.0 - s) / ball_volume(n - 1) * total
}

/// `∫_B |y - τe₁|^β dy` in the plane for `τ ∈ [0, 1]`, in polar coordinates
/// about `τe₁`: `∫_0^{2π} ρ(θ)^{β+2}/(β+2) dθ`.
pub fn psi_planar(tau: f64, beta: f64) -> f64 {
    assert!((0.0..=1.0).contains(&tau));
    let m = 4096;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|i| {
            let th = h * i as f64;
            let rho =
                (-tau * th.cos() + (1.0 - tau * tau * th.sin().powi(2)).max(0.0).sqrt()).max(0.0);
            h * rho.powf(beta + 2.0) / (beta + 2.0)
        })
        .sum()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Relative difference `|a - b| / |b|`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Random radial step with `pieces` shells, values in `[0, 1]`, radii in `(0, 2]`.
pub fn random_step_data(r: &mut ChaCha8Rng, pieces: usize) -> (Vec<f64>, Vec<f64>) {
    let mut radii: Vec<f64> = (0..pieces).map(|_| r.random_range(0.05..2.0)).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let values = radii.iter().map(|_| r.random_range(0.0..=1.0)).collect();
    (radii, values)
}

/// Random tensor-grid density: edges, values.
pub fn random_grid_density(
    r: &mut ChaCha8Rng,
    nx: usize,
    ny: usize,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let edges = |r: &mut ChaCha8Rng, k: usize| {
        let mut e = vec![0.0];
        for _ in 0..k {
            let last = *e.last().unwrap();
            e.push(last + r.random_range(0.2..1.0));
        }
        e
    };
    let x = edges(r, nx);
    let y = edges(r, ny);
    let v = (0..nx * ny)
        .map(|_| {
            if r.random_bool(0.15) {
                0.0
            } else {
                r.random_range(0.1..2.0)
            }
        })
        .collect();
    (x, y, v)
}

/// Cumulative mass of a piecewise-constant 1D density at `x`.
pub fn cdf_1d(edges: &[f64], values: &[f64], x: f64) -> f64 {
    edges
        .windows(2)
        .zip(values)
        .map(|(w, v)| v * (x.clamp(w[0], w[1]) - w[0]))
        .sum()
}

/// Radial shell pushed inward: `(1, 1+a)` onto `(1-b, 1)` with equal `r dr` measure.
pub fn inward_shell(a: f64) -> (f64, f64) {
    let m = (1.0 + a) * (1.0 + a) - 1.0;
    let b = 1.0 - (1.0 - m).sqrt();
    (a, b)
}
