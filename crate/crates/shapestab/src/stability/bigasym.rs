use crate::energy::shape_g_beta;
use crate::error::{domain, Result};
use crate::geometry::{Ball, BallConfiguration, Shape};
use crate::par::map_slice;
use crate::special_fn::ball_volume;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Smallest gap between distinct balls of a generated configuration.
pub const MIN_GAP: f64 = 3.0;

/// `(3^β - 2^β)/2 · ω_N²`.
pub fn big_asymmetry_bound(n: usize, beta: f64) -> f64 {
    let w = ball_volume(n);
    0.5 * (3f64.powf(beta) - 2f64.powf(beta)) * w * w
}

/// Mass threshold `ξ` below which every unit ball meets the set: for unions
/// of balls with gaps of at least 3 a unit ball meets one component only,
/// and `ξ = (3^β - 2^β) ω_N / (2·3^β)` makes the bound follow from
/// `G_β(B) ≤ 2^β ω_N²`.
pub fn xi(n: usize, beta: f64) -> f64 {
    let b3 = 3f64.powf(beta);
    (b3 - 2f64.powf(beta)) * ball_volume(n) / (2.0 * b3)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigAsymmetryCase {
    pub balls: BallConfiguration,
    pub min_gap: Option<f64>,
    pub asymmetry: f64,
    /// `δ(E) ≥ 2(ω_N - ξ)`.
    pub precondition: bool,
    pub deficit: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

/// Two half-volume balls at growing separation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub gap: f64,
    pub center_distance: f64,
    pub deficit: f64,
    /// `deficit / center_distance^β`.
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigAsymmetryReport {
    pub n: usize,
    pub beta: f64,
    pub xi: f64,
    pub bound: f64,
    pub cases: Vec<BigAsymmetryCase>,
    pub growth: Vec<GrowthPoint>,
    /// Every case meeting the precondition satisfies the bound.
    pub pass: bool,
    /// The two-ball deficits increase with the separation.
    pub growth_monotone: bool,
}

fn place(n: usize, radii: &[f64], rng: &mut ChaCha8Rng) -> Vec<Ball> {
    let mut balls: Vec<Ball> = Vec::with_capacity(radii.len());
    let mut reach = 0.0;
    for &r in radii {
        let extra = rng.random_range(0.0..2.0);
        'attempt: loop {
            reach += 0.5;
            for _ in 0..64 {
                let mut c = [0.0; 3];
                for x in c.iter_mut().take(n) {
                    *x = rng.random_range(-reach..reach);
                }
                let ok = balls.iter().all(|b| {
                    let d = (0..3)
                        .map(|k| (b.center[k] - c[k]).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    d - b.radius - r >= MIN_GAP + extra
                });
                if ok {
                    balls.push(Ball {
                        center: c,
                        radius: r,
                    });
                    break 'attempt;
                }
            }
        }
    }
    balls
}

/// Random configuration of volume `ω_N` whose largest component carries at
/// most `max_fraction` of the volume.
fn random_configuration(
    n: usize,
    max_fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<BallConfiguration> {
    let k_min = (1.0 / max_fraction).ceil() as usize;
    let k = k_min + rng.random_range(0..4usize);
    let mut w: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..1.0)).collect();
    loop {
        let total: f64 = w.iter().sum();
        let frac: Vec<f64> = w.iter().map(|x| x / total).collect();
        let top = frac.iter().copied().fold(0.0, f64::max);
        if top <= max_fraction {
            let radii: Vec<f64> = frac.iter().map(|f| f.powf(1.0 / n as f64)).collect();
            return BallConfiguration::new(n, place(n, &radii, rng));
        }
        w.push(rng.random_range(0.5..1.0));
    }
}

fn evaluate(cfg: BallConfiguration, beta: f64, bound: f64, xi: f64) -> Result<BigAsymmetryCase> {
    let n = cfg.n;
    let w = ball_volume(n);
    let asymmetry = cfg.far_field_asymmetry();
    let precondition = asymmetry >= 2.0 * (w - xi) * (1.0 - 1e-12);
    let g = shape_g_beta(&Shape::Balls(cfg.clone()), beta)?;
    let slack = g.deficit - bound;
    Ok(BigAsymmetryCase {
        min_gap: cfg.min_separation(),
        balls: cfg,
        asymmetry,
        precondition,
        deficit: g.deficit,
        bound,
        slack,
        pass: slack >= -g.error,
    })
}

/// Equal-volume configurations of `count` random scattered balls meeting the
/// asymmetry precondition, `extra` more with a few large components, and
/// the two-ball separation sweep.
pub fn big_asymmetry_check(
    n: usize,
    beta: f64,
    count: usize,
    seed: u64,
) -> Result<BigAsymmetryReport> {
    if !(n == 2 || n == 3) {
        return Err(domain(format!(
            "ball configurations need N in {{2, 3}}, got {n}"
        )));
    }
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    let w = ball_volume(n);
    let xi = xi(n, beta);
    let bound = big_asymmetry_bound(n, beta);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut configs = Vec::with_capacity(count + 3);
    for _ in 0..count {
        configs.push(random_configuration(n, xi / w, &mut rng)?);
    }
    for k in [2usize, 3, 4] {
        configs.push(random_configuration(n, 1.0 / k as f64, &mut rng)?);
    }
    let cases: Vec<BigAsymmetryCase> =
        map_slice(&configs, |c| evaluate(c.clone(), beta, bound, xi))
            .into_iter()
            .collect::<Result<_>>()?;
    let r = 0.5f64.powf(1.0 / n as f64);
    let gaps = [3.0, 6.0, 12.0, 24.0, 48.0, 96.0];
    let growth: Vec<GrowthPoint> = map_slice(&gaps, |&gap| -> Result<GrowthPoint> {
        let dist = gap + 2.0 * r;
        let cfg = BallConfiguration::new(
            n,
            vec![
                Ball {
                    center: [0.0; 3],
                    radius: r,
                },
                Ball {
                    center: [dist, 0.0, 0.0],
                    radius: r,
                },
            ],
        )?;
        let d = shape_g_beta(&Shape::Balls(cfg), beta)?.deficit;
        Ok(GrowthPoint {
            gap,
            center_distance: dist,
            deficit: d,
            scaled: d / dist.powf(beta),
        })
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let growth_monotone = growth.windows(2).all(|p| p[1].deficit > p[0].deficit);
    let pass = cases.iter().filter(|c| c.precondition).all(|c| c.pass);
    Ok(BigAsymmetryReport {
        n,
        beta,
        xi,
        bound,
        cases,
        growth,
        pass,
        growth_monotone,
    })
}
