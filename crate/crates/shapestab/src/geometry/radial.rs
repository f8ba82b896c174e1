use crate::error::{domain, precondition, Result};
use crate::special_fn::{ball_volume, GaussLegendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::optimize::golden_section;

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(precondition(format!(
            "ball-intersection geometry is implemented for N in {{2, 3}}, got {n}"
        )))
    }
}

/// Volume of `B_p(0) ∩ B_q(s e₁)`.
pub fn lens_volume(n: usize, p: f64, q: f64, s: f64) -> f64 {
    let s = s.abs();
    let m = p.min(q);
    if s <= (p - q).abs() {
        return ball_volume(n) * m.powi(n as i32);
    }
    if s >= p + q {
        return 0.0;
    }
    if n == 2 {
        let c1 = ((s * s + p * p - q * q) / (2.0 * s * p)).clamp(-1.0, 1.0);
        let c2 = ((s * s + q * q - p * p) / (2.0 * s * q)).clamp(-1.0, 1.0);
        let k = ((-s + p + q) * (s + p - q) * (s - p + q) * (s + p + q)).max(0.0);
        p * p * c1.acos() + q * q * c2.acos() - 0.5 * k.sqrt()
    } else if n == 3 {
        let a = p + q - s;
        PI * a * a * (s * s + 2.0 * s * (p + q) - 3.0 * (p - q) * (p - q)) / (12.0 * s)
    } else {
        let a = (s * s + p * p - q * q) / (2.0 * s);
        cap_volume(n, p, a) + cap_volume(n, q, s - a)
    }
}

/// `∫_0^x sin^N t dt` by Gauss–Legendre on a smooth integrand.
fn sine_power_integral(n: usize, x: f64) -> f64 {
    GaussLegendre::new(40).integrate(0.0, x, |t| t.sin().powi(n as i32))
}

/// Volume of `{y ∈ B_r : y₁ > d}` for `|d| ≤ r`.
fn cap_volume(n: usize, r: f64, d: f64) -> f64 {
    let c = (d / r).clamp(-1.0, 1.0);
    ball_volume(n - 1) * r.powi(n as i32) * sine_power_integral(n, c.acos())
}

/// `ω_N p^N - |B_p ∩ B_p(s e₁)|` without cancellation at small `s`.
pub fn lens_deficit(n: usize, p: f64, s: f64) -> f64 {
    let s = s.abs();
    if s >= 2.0 * p {
        return ball_volume(n) * p.powi(n as i32);
    }
    if n == 2 {
        2.0 * p * p * (s / (2.0 * p)).asin() + 0.5 * s * (4.0 * p * p - s * s).sqrt()
    } else if n == 3 {
        PI * s * (12.0 * p * p - s * s) / 12.0
    } else {
        let lo = (s / (2.0 * p)).clamp(0.0, 1.0).acos();
        let band = GaussLegendre::new(40).integrate(lo, 0.5 * PI, |t| t.sin().powi(n as i32));
        2.0 * ball_volume(n - 1) * p.powi(n as i32) * band
    }
}

/// Radially symmetric step function: value `values[j]` on
/// `r_{j-1} ≤ |x| < r_j` (with `r_{-1} = 0`), zero outside `r_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialStep {
    pub n: usize,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialStep {
    pub fn new(n: usize, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(domain("radial step needs one value per breakpoint"));
        }
        if !(breakpoints[0] > 0.0) || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain(
                "breakpoints must be positive and strictly increasing",
            ));
        }
        if values.iter().chain(&breakpoints).any(|v| !v.is_finite()) {
            return Err(domain("radial step must be finite"));
        }
        Ok(Self {
            n,
            breakpoints,
            values,
        })
    }

    /// Indicator of the centred ball of radius `r`.
    pub fn ball(n: usize, r: f64) -> Result<Self> {
        Self::new(n, vec![r], vec![1.0])
    }

    /// Decomposition `f = Σ c_j χ_{B_{r_j}}` as `(r_j, c_j)`.
    pub fn balls(&self) -> Vec<(f64, f64)> {
        let m = self.values.len();
        (0..m)
            .map(|j| {
                let next = if j + 1 < m { self.values[j + 1] } else { 0.0 };
                (self.breakpoints[j], self.values[j] - next)
            })
            .filter(|&(_, c)| c != 0.0)
            .collect()
    }

    /// `∫ f`.
    pub fn mass(&self) -> f64 {
        let w = ball_volume(self.n);
        let mut prev = 0.0f64;
        let mut s = 0.0;
        for (r, v) in self.breakpoints.iter().zip(&self.values) {
            let rn = r.powi(self.n as i32);
            s += v * (rn - prev);
            prev = rn;
        }
        w * s
    }

    /// Value at radius `r`.
    pub fn eval(&self, r: f64) -> f64 {
        match self.breakpoints.iter().position(|&b| r < b) {
            Some(j) => self.values[j],
            None => 0.0,
        }
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self {
            n: self.n,
            breakpoints: self.breakpoints.iter().map(|r| r * lambda).collect(),
            values: self.values.clone(),
        }
    }

    pub fn max_radius(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// `f + a g` on the merged breakpoints.
    pub fn combine(&self, a: f64, g: &RadialStep) -> Result<Self> {
        if self.n != g.n {
            return Err(domain("dimension mismatch"));
        }
        let mut br: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&g.breakpoints)
            .copied()
            .collect();
        br.sort_by(f64::total_cmp);
        br.dedup();
        let mut vals = Vec::with_capacity(br.len());
        let mut lo = 0.0;
        for &r in &br {
            let mid = 0.5 * (lo + r);
            vals.push(self.eval(mid) + a * g.eval(mid));
            lo = r;
        }
        Self::new(self.n, br, vals)
    }
}

/// Radial set as a union of annuli, stored by its boundary radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub n: usize,
    pub breakpoints: Vec<f64>,
    /// Membership of `[0, r_0)`, `[r_0, r_1)`, …, `[r_m, ∞)`; the last is `false`.
    pub inside: Vec<bool>,
}

impl RadialProfile {
    pub fn new(n: usize, breakpoints: Vec<f64>, inside: Vec<bool>) -> Result<Self> {
        check_dim(n)?;
        if breakpoints.is_empty() || inside.len() != breakpoints.len() + 1 {
            return Err(domain("profile needs one flag per interval"));
        }
        if !(breakpoints[0] > 0.0) || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain(
                "breakpoints must be positive and strictly increasing",
            ));
        }
        if *inside.last().unwrap() {
            return Err(domain("the unbounded interval must be outside"));
        }
        if inside.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain("membership flags must alternate"));
        }
        Ok(Self {
            n,
            breakpoints,
            inside,
        })
    }

    pub fn ball(n: usize, r: f64) -> Result<Self> {
        Self::new(n, vec![r], vec![true, false])
    }

    pub fn to_step(&self) -> RadialStep {
        let values = self.inside[..self.breakpoints.len()]
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect();
        RadialStep {
            n: self.n,
            breakpoints: self.breakpoints.clone(),
            values,
        }
    }

    pub fn volume(&self) -> f64 {
        self.to_step().mass()
    }

    pub fn rescale(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain(format!(
                "scale factor must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            n: self.n,
            breakpoints: self.breakpoints.iter().map(|r| r * lambda).collect(),
            inside: self.inside.clone(),
        })
    }

    /// Radius of the ball with the same volume.
    pub fn equal_volume_radius(&self) -> f64 {
        (self.volume() / ball_volume(self.n)).powf(1.0 / self.n as f64)
    }

    /// `|E Δ B_ρ(0)|`, exact from the breakpoints.
    pub fn symmetric_difference_centered(&self, rho: f64) -> f64 {
        let n = self.n as i32;
        let mut cuts: Vec<f64> = self.breakpoints.clone();
        cuts.push(rho);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut lo = 0.0f64;
        let mut s = 0.0;
        let step = self.to_step();
        for &r in &cuts {
            let mid = 0.5 * (lo + r);
            let e = step.eval(mid);
            let b = if mid < rho { 1.0 } else { 0.0 };
            if e != b {
                s += r.powi(n) - lo.powi(n);
            }
            lo = r;
        }
        ball_volume(self.n) * s
    }

    /// `|E Δ B_ρ(d e₁)|`.
    pub fn symmetric_difference(&self, rho: f64, d: f64) -> f64 {
        if d == 0.0 {
            return self.symmetric_difference_centered(rho);
        }
        let inter: f64 = self
            .to_step()
            .balls()
            .iter()
            .map(|&(r, c)| c * lens_volume(self.n, r, rho, d))
            .sum();
        self.volume() + ball_volume(self.n) * rho.powi(self.n as i32) - 2.0 * inter
    }

    /// Fraenkel asymmetry against balls of the same volume: centred exact
    /// value and the minimum over offsets found by search.
    pub fn fraenkel_asymmetry(&self) -> RadialAsymmetry {
        let rho = self.equal_volume_radius();
        let centered = self.symmetric_difference_centered(rho);
        let dmax = self.breakpoints.last().unwrap() + rho;
        let samples = 400;
        let mut best = (0.0, centered);
        for i in 1..=samples {
            let d = dmax * i as f64 / samples as f64;
            let v = self.symmetric_difference(rho, d);
            if v < best.1 {
                best = (d, v);
            }
        }
        let h = dmax / samples as f64;
        let (lo, hi) = ((best.0 - h).max(0.0), (best.0 + h).min(dmax));
        let (d, v) = golden_section(|d| self.symmetric_difference(rho, d), lo, hi, 1e-12);
        if v < best.1 {
            best = (d, v);
        }
        let value = best.1.min(centered);
        RadialAsymmetry {
            value,
            centered,
            offset: if best.1 < centered { best.0 } else { 0.0 },
        }
    }
}

/// Asymmetry of a radial profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialAsymmetry {
    /// `min(search, centred)`.
    pub value: f64,
    /// `|E Δ B_ρ(0)|`.
    pub centered: f64,
    /// Distance of the best ball centre from the origin.
    pub offset: f64,
}

/// `B_{r₁} ∪ (B_{r₂} \ B₁)` with `r₁ = (1-h)^{1/N}`, `r₂ = (1+h)^{1/N}`.
pub fn annulus_family(h: f64, n: usize) -> Result<RadialProfile> {
    if !(h > 0.0 && h < 0.5) {
        return Err(domain(format!(
            "annulus parameter must lie in (0, 1/2), got {h}"
        )));
    }
    let e = 1.0 / n as f64;
    RadialProfile::new(
        n,
        vec![(1.0 - h).powf(e), 1.0, (1.0 + h).powf(e)],
        vec![true, false, true, false],
    )
}
