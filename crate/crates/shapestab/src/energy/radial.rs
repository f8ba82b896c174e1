//! Energies of radial step functions. A step function is a signed sum of
//! centred ball indicators, and the interaction of two balls reduces to a
//! one-dimensional integral against the lens volume
//! `|B_p ∩ B_q(s e₁)|`: `∫∫ χ_p(x) χ_q(y) h(|x-y|) = |S^{N-1}| ∫ h(s) s^{N-1} lens(p, q, s) ds`.

use super::kernel::Radial;
use crate::error::{domain, Result};
use crate::geometry::{lens_deficit, lens_volume, BallConfiguration, RadialProfile, RadialStep};
use crate::special_fn::{ball_volume, sphere_area, tanh_sinh, tanh_sinh_dist, GaussLegendre};

const TOL: f64 = 1e-14;

/// `∫_{B_p} ∫_{B_q} h(|x-y|) dx dy` for centred balls.
pub fn ball_pair(n: usize, h: Radial, p: f64, q: f64) -> f64 {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    let lo = q - p;
    let hi = p + q;
    let w = ball_volume(n);
    let nf = n as i32;
    let core = w * p.powi(nf) * h.primitive(n, lo);
    let integrand = |s: f64| h.eval_shell(n, s) * lens_volume(n, p, q, s);
    let mut cuts = vec![lo];
    if let Some(k) = h.kink() {
        if k > lo && k < hi {
            cuts.push(k);
        }
    }
    cuts.push(hi);
    let mut tail = 0.0;
    for c in cuts.windows(2) {
        tail += tanh_sinh_dist(c[0], c[1], TOL, |s, da, _| {
            // keep s exact near s = 0 for singular powers
            let s = if c[0] == 0.0 { da } else { s };
            integrand(s)
        })
        .value;
    }
    sphere_area(n) * (core + tail)
}

/// `G(f, g) = ∫∫ f(x) g(y) h(|x-y|)`, exactly symmetric in `(f, g)`.
pub fn pair_energy(h: Radial, f: &RadialStep, g: &RadialStep) -> Result<f64> {
    if f.n != g.n {
        return Err(domain("dimension mismatch"));
    }
    let one_way = |a: &RadialStep, b: &RadialStep| -> f64 {
        let mut s = 0.0;
        for (p, c) in a.balls() {
            for (q, d) in b.balls() {
                s += c * d * ball_pair(a.n, h, p, q);
            }
        }
        s
    };
    Ok(0.5 * (one_way(f, g) + one_way(g, f)))
}

/// `G(f) = G(f, f)`.
pub fn self_energy(h: Radial, f: &RadialStep) -> f64 {
    let balls = f.balls();
    let mut s = 0.0;
    for (i, &(p, c)) in balls.iter().enumerate() {
        s += c * c * ball_pair(f.n, h, p, p);
        for &(q, d) in &balls[i + 1..] {
            s += 2.0 * c * d * ball_pair(f.n, h, p, q);
        }
    }
    s
}

/// `G(f) - G(g)` written as `G(f - g, f + g)`, which stays accurate when the
/// two are close.
pub fn energy_difference(h: Radial, f: &RadialStep, g: &RadialStep) -> Result<f64> {
    let d = f.combine(-1.0, g)?;
    let s = f.combine(1.0, g)?;
    pair_energy(h, &d, &s)
}

/// `G_β(B)` for the unit ball.
pub fn g_ball(n: usize, beta: f64) -> f64 {
    ball_pair(n, Radial::attractive(beta), 1.0, 1.0)
}

/// `V_α(B)` for the unit ball.
pub fn v_ball(n: usize, alpha: f64) -> f64 {
    ball_pair(n, Radial::riesz(alpha, n), 1.0, 1.0)
}

/// `∫_{B_p} ∫_{B_q^c} ... ` building block for `P_s` of radial sets:
/// `|S^{N-1}| ∫_0^∞ s^{-1-σ} (lens(p,q,0) - lens(p,q,s)) ds`.
pub fn perimeter_pair(n: usize, sigma: f64, p: f64, q: f64) -> f64 {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    let w = ball_volume(n);
    let full = w * p.powi(n as i32);
    let lo = q - p;
    let hi = p + q;
    let body = if lo == 0.0 {
        tanh_sinh_dist(0.0, hi, TOL, |_, da, _| {
            if da <= 0.0 {
                0.0
            } else {
                lens_deficit(n, p, da) / da * da.powf(-sigma)
            }
        })
        .value
    } else {
        tanh_sinh(lo, hi, TOL, |s| {
            s.powf(-1.0 - sigma) * (full - lens_volume(n, p, q, s))
        })
        .value
    };
    sphere_area(n) * (body + full * hi.powf(-sigma) / sigma)
}

/// `P_s(E)` for a radial set, `s ∈ (0, 1]`, with the `(1-s)/ω_{N-1}`
/// normalization; `s = 1` is the classical perimeter.
pub fn p_s_radial(profile: &RadialProfile, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(domain(format!("s must lie in (0, 1], got {s}")));
    }
    let n = profile.n;
    if s == 1.0 {
        let area = sphere_area(n);
        return Ok(profile
            .breakpoints
            .iter()
            .map(|r| area * r.powi(n as i32 - 1))
            .sum());
    }
    let balls = profile.to_step().balls();
    let mut acc = 0.0;
    for (i, &(p, c)) in balls.iter().enumerate() {
        acc += c * c * perimeter_pair(n, s, p, p);
        for &(q, d) in &balls[i + 1..] {
            acc += 2.0 * c * d * perimeter_pair(n, s, p, q);
        }
    }
    Ok((1.0 - s) / ball_volume(n - 1) * acc)
}

/// `P_s(B)` of the unit ball.
pub fn p_s_ball(n: usize, s: f64) -> Result<f64> {
    p_s_radial(&RadialProfile::ball(n, 1.0)?, s)
}

fn psi_integrand(n: usize, tau: f64, power: f64, weight_cos: bool) -> impl Fn(f64) -> f64 {
    move |th: f64| {
        let (s, c) = th.sin_cos();
        let r = (-tau * c + (1.0 - tau * tau * s * s).max(0.0).sqrt()).max(0.0);
        let jac = if n == 2 { 1.0 } else { s.powi(n as i32 - 2) };
        let f = if weight_cos { c } else { 1.0 };
        f * r.powf(power) * jac
    }
}

fn psi_generic(n: usize, beta: f64, tau: f64, derivative: bool) -> f64 {
    let nf = n as f64;
    let (power, pref) = if derivative {
        (
            beta + nf - 1.0,
            -beta * sphere_area(n - 1) / (beta + nf - 1.0),
        )
    } else {
        (beta + nf, sphere_area(n - 1) / (beta + nf))
    };
    if tau <= 1.0 {
        let g = psi_integrand(n, tau, power, derivative);
        let half = std::f64::consts::FRAC_PI_2;
        let a = tanh_sinh(0.0, half, TOL, &g).value;
        let b = tanh_sinh(half, std::f64::consts::PI, TOL, &g).value;
        pref * (a + b)
    } else {
        // rays from τe₁ that meet the ball form the cone of half-angle asin(1/τ) around -e₁
        let amax = (1.0 / tau).asin();
        let v = tanh_sinh_dist(0.0, amax, TOL, |a, _, db| {
            let (s, c) = a.sin_cos();
            // 1 - τ² sin² a = τ² (sin a_max - sin a)(sin a_max + sin a)
            let gap = 2.0 * (0.5 * (amax + a)).cos() * (0.5 * db).sin();
            let disc = (tau * tau * gap * (1.0 / tau + s)).max(0.0);
            let sq = disc.sqrt();
            let rp = tau * c + sq;
            let rm = tau * c - sq;
            let jac = if n == 2 { 1.0 } else { s.powi(n as i32 - 2) };
            let diff = rp.powf(power) - rm.powf(power);
            // cos θ = -cos a on the reflected cone
            let f = if derivative { -c } else { 1.0 };
            f * diff * jac
        });
        pref * v.value
    }
}

/// `ψ(τ) = ∫_B |y - τ e₁|^β dy`.
pub fn psi(tau: f64, n: usize, beta: f64) -> Result<f64> {
    if !(tau >= 0.0) || n < 2 {
        return Err(domain(format!(
            "psi needs tau >= 0 and N >= 2, got ({tau}, {n})"
        )));
    }
    Ok(psi_generic(n, beta, tau, false))
}

/// `ψ'(τ) = β ∫_B |y - τe₁|^{β-2} (τ - y₁) dy`.
pub fn psi_prime(tau: f64, n: usize, beta: f64) -> Result<f64> {
    if !(tau >= 0.0) || n < 2 {
        return Err(domain(format!(
            "psi needs tau >= 0 and N >= 2, got ({tau}, {n})"
        )));
    }
    Ok(psi_generic(n, beta, tau, true))
}

/// `ζ_f(ρ)`: average over `|y| = ρ` of `∫ f(z)|z-y|^β dz`.
pub fn zeta(f: &RadialStep, beta: f64, rho: f64) -> Result<f64> {
    let mut s = 0.0;
    for (r, c) in f.balls() {
        s += c * r.powf(f.n as f64 + beta) * psi(rho / r, f.n, beta)?;
    }
    Ok(s)
}

/// `∫_{|x|<a} ∫_{|y-De₁|<b} h(|x-y|)` for disjoint balls (`D ≥ a + b`).
pub fn separated_pair(n: usize, h: Radial, a: f64, b: f64, dist: f64) -> f64 {
    let gl = GaussLegendre::new(48);
    let jac_area = sphere_area(n - 1);
    let mean = |s: f64| -> f64 {
        // |S^{N-2}| ∫_0^π h(|D e₁ + s ω|) sin^{N-2}θ dθ
        let g = |th: f64| {
            let r2 = dist * dist + s * s + 2.0 * dist * s * th.cos();
            let jac = if n == 2 {
                1.0
            } else {
                th.sin().powi(n as i32 - 2)
            };
            h.eval(r2.max(0.0).sqrt()) * jac
        };
        let half = std::f64::consts::FRAC_PI_2;
        jac_area * (gl.integrate(0.0, half, g) + gl.integrate(half, std::f64::consts::PI, g))
    };
    let lo = (a - b).abs();
    let hi = a + b;
    let nf = n as i32;
    let inner = tanh_sinh(0.0, lo, 1e-13, |s| {
        s.powi(nf - 1) * ball_volume(n) * a.min(b).powi(nf) * mean(s)
    })
    .value;
    let outer = tanh_sinh(lo, hi, 1e-13, |s| {
        s.powi(nf - 1) * lens_volume(n, a, b, s) * mean(s)
    })
    .value;
    inner + outer
}

/// Interaction energy `∫_E ∫_E h(|x-y|)` of a union of disjoint balls.
pub fn configuration_energy(h: Radial, cfg: &BallConfiguration) -> f64 {
    let n = cfg.n;
    let mut s = 0.0;
    for (i, a) in cfg.balls.iter().enumerate() {
        s += ball_pair(n, h, a.radius, a.radius);
        for b in &cfg.balls[i + 1..] {
            s += 2.0 * separated_pair(n, h, a.radius, b.radius, cfg.distance(a, b));
        }
    }
    s
}

/// `P_s` of a union of disjoint balls.
pub fn configuration_p_s(cfg: &BallConfiguration, s: f64) -> Result<f64> {
    let n = cfg.n;
    let mut acc = 0.0;
    for b in &cfg.balls {
        acc += p_s_radial(&RadialProfile::ball(n, b.radius)?, s)?;
    }
    if s < 1.0 {
        let h = Radial::Power(-(n as f64) - s);
        let f = 2.0 * (1.0 - s) / ball_volume(n - 1);
        for (i, a) in cfg.balls.iter().enumerate() {
            for b in &cfg.balls[i + 1..] {
                acc -= f * separated_pair(n, h, a.radius, b.radius, cfg.distance(a, b));
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn planar_quadratic_ball() {
        assert!((g_ball(2, 2.0) - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn perimeter_limit() {
        let b = RadialProfile::ball(2, 1.0).unwrap();
        assert!((p_s_radial(&b, 1.0).unwrap() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn psi_at_origin() {
        let v = psi(0.0, 2, 2.0).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-13);
        let v = psi(0.0, 3, 1.0).unwrap();
        assert!((v - 3.0 * ball_volume(3) / 4.0).abs() < 1e-13);
    }
}
