use crate::energy::p_s_shape;
use crate::error::{domain, precondition, Result};
use crate::geometry::NearlySphericalShape;
use crate::par::map_slice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiminCase {
    pub index: usize,
    pub symmetric_difference: f64,
    pub p_star: f64,
    pub p_competitor: f64,
    /// `(P_s(E*) - P_s(F)) / |E* Δ F|`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiminReport {
    pub s: f64,
    pub cases: Vec<QuasiminCase>,
    /// Indices of competitors equal to `E*`.
    pub excluded: Vec<usize>,
    /// Empirical constant `Λ̂`: the largest ratio.
    pub lambda_hat: f64,
    /// `Λ̂` over the first `j + 1` battery entries.
    pub running_max: Vec<f64>,
}

/// `|E Δ F|` for star-shaped sets sharing grid and centre.
fn star_difference(a: &NearlySphericalShape, b: &NearlySphericalShape) -> f64 {
    let n = a.n() as i32;
    a.grid
        .integrate(|i, _| (a.radius(i).powi(n) - b.radius(i).powi(n)).abs())
        / n as f64
}

/// Largest distance between boundary points where the radii differ.
fn perturbation_diameter(a: &NearlySphericalShape, b: &NearlySphericalShape) -> f64 {
    let pts: Vec<[f64; 3]> = (0..a.grid.len())
        .filter(|&i| (a.radius(i) - b.radius(i)).abs() > 0.0)
        .flat_map(|i| {
            let z = a.grid.nodes[i];
            [a.radius(i), b.radius(i)].map(|r| [z[0] * r, z[1] * r, z[2] * r])
        })
        .collect();
    let mut d: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d = d.max((0..3).map(|k| (p[k] - q[k]).powi(2)).sum::<f64>().sqrt());
        }
    }
    d
}

/// Empirical quasi-minimality constant of `E*` for `P_s` over competitors
/// that differ from it inside a ball of radius below 1.
pub fn quasimin_ratio(
    e_star: &NearlySphericalShape,
    battery: &[NearlySphericalShape],
    s: f64,
) -> Result<QuasiminReport> {
    for (j, f) in battery.iter().enumerate() {
        if f.grid != e_star.grid || f.center != e_star.center {
            return Err(domain(format!(
                "competitor {j} uses a different grid or centre"
            )));
        }
        if perturbation_diameter(e_star, f) >= 2.0 {
            return Err(precondition(format!(
                "competitor {j} is not localized in a ball of radius < 1"
            )));
        }
    }
    let p_star = p_s_shape(e_star, s)?.value;
    let evals: Vec<Result<Option<QuasiminCase>>> = map_slice(
        &battery.iter().enumerate().collect::<Vec<_>>(),
        |&(index, f)| {
            let d = star_difference(e_star, f);
            if d == 0.0 {
                return Ok(None);
            }
            let p = p_s_shape(f, s)?.value;
            Ok(Some(QuasiminCase {
                index,
                symmetric_difference: d,
                p_star,
                p_competitor: p,
                ratio: (p_star - p) / d,
            }))
        },
    );
    let mut cases = Vec::new();
    let mut excluded = Vec::new();
    let mut running_max = Vec::with_capacity(battery.len());
    let mut best = f64::NEG_INFINITY;
    for (j, e) in evals.into_iter().enumerate() {
        match e? {
            Some(c) => {
                best = best.max(c.ratio);
                cases.push(c);
            }
            None => excluded.push(j),
        }
        running_max.push(best);
    }
    Ok(QuasiminReport {
        s,
        cases,
        excluded,
        lambda_hat: best,
        running_max,
    })
}

/// Smooth bump `exp(1 - 1/(1 - x²))` on `|x| < 1`.
fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

/// `E*` with the boundary radius changed by `amplitude · bump((φ-φ₀)/width)`.
pub fn localized_bump(
    e_star: &NearlySphericalShape,
    phi0: f64,
    width: f64,
    amplitude: f64,
) -> Result<NearlySphericalShape> {
    if e_star.n() != 2 {
        return Err(precondition("localized bumps are built on planar shapes"));
    }
    if !(width > 0.0 && width < PI) {
        return Err(domain(format!(
            "bump width must lie in (0, π), got {width}"
        )));
    }
    let r: Vec<f64> = (0..e_star.grid.len())
        .map(|i| {
            let phi = e_star.grid.circle_angle(i);
            let mut d = (phi - phi0).rem_euclid(2.0 * PI);
            if d > PI {
                d -= 2.0 * PI;
            }
            e_star.radius(i) + amplitude * bump(d / width)
        })
        .collect();
    let mut f = e_star.clone();
    f.t = 0.5;
    f.u = r.iter().map(|ri| 2.0 * (ri / e_star.scale - 1.0)).collect();
    f.validate()?;
    Ok(f)
}

/// `count` seeded bumps and dents with widths in `[0.15, 0.5]` and
/// amplitudes of size at most `0.08`.
pub fn random_bump_battery(
    e_star: &NearlySphericalShape,
    count: usize,
    seed: u64,
) -> Result<Vec<NearlySphericalShape>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let phi0 = rng.random_range(0.0..2.0 * PI);
            let width = rng.random_range(0.15..0.5);
            let mut amp = rng.random_range(0.01..0.08);
            if rng.random_bool(0.5) {
                amp = -amp;
            }
            localized_bump(e_star, phi0, width, amp)
        })
        .collect()
}
