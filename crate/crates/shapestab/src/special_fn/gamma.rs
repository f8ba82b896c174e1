//! Gamma-function family on the real line.

use crate::error::{domain, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (PI * r).sin();
    if (n as i64).rem_euclid(2) == 0 {
        s
    } else {
        -s
    }
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x >= 0.5 {
        ln_gamma_lanczos(x)
    } else {
        // reflection; sin(pi x) > 0 on (0, 1/2)
        (PI / sin_pi(x)).ln() - ln_gamma_lanczos(1.0 - x)
    }
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma_pos(x), 1.0));
    }
    if x == x.floor() {
        return None;
    }
    // Γ(x) = π / (sin(πx) Γ(1-x))
    let s = sin_pi(x);
    Some(((PI / s.abs()).ln() - ln_gamma_pos(1.0 - x), s.signum()))
}

/// `Γ(x)`; `inf` with the one-sided sign convention is never produced, poles give NaN.
pub fn gamma(x: f64) -> f64 {
    match ln_gamma_signed(x) {
        Some((l, s)) => s * l.exp(),
        None => f64::NAN,
    }
}

/// `1/Γ(x)`, an entire function: exactly zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 0.0 {
        return (-ln_gamma_pos(x)).exp();
    }
    // 1/Γ(x) = Γ(1-x) sin(πx)/π
    let s = sin_pi(x);
    s * (ln_gamma_pos(1.0 - x) - PI.ln()).exp()
}

/// `ln |1/Γ(x)|` and its sign; `None` at the zeros of `1/Γ`.
pub fn ln_rgamma_signed(x: f64) -> Option<(f64, f64)> {
    ln_gamma_signed(x).map(|(l, s)| (-l, s))
}

/// Rising factorial `(a)_j = a (a+1) ... (a+j-1)` by literal product.
pub fn pochhammer(a: f64, j: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..j {
        p *= a + i as f64;
    }
    p
}

/// Volume `ω_n` of the unit ball in `R^n` (`ω_0 = 1`).
pub fn ball_volume(n: usize) -> f64 {
    // ω_n = 2π/n · ω_{n-2}
    let mut w = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        w *= 2.0 * PI / k as f64;
        k += 2;
    }
    w
}

/// Surface measure `n ω_n` of the unit sphere `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * ball_volume(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-15);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn reflection_branch() {
        // Γ(-1/2) = -2√π
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!((rgamma(-0.5) * gamma(-0.5) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(-1.0, 3), 0.0);
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((ball_volume(2) - PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    }
}
