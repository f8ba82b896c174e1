mod common;

use common::{ball_volume, rel};
use proptest::prelude::*;
use shapestab::energy::{shape_g_beta, zonal_coefficients};
use shapestab::geometry::*;
use shapestab::stability::*;
use std::f64::consts::PI;

fn mode(grid: &SphereGrid, k: usize, amp: f64) -> Vec<f64> {
    grid.sample(|z| amp * (k as f64 * z[1].atan2(z[0])).cos())
}

fn l2(grid: &SphereGrid, u: &[f64]) -> f64 {
    grid.integrate(|i, _| u[i] * u[i])
}

fn low_moments(grid: &SphereGrid, u: &[f64]) -> [f64; 3] {
    [
        grid.integrate(|i, _| u[i]),
        grid.integrate(|i, z| u[i] * z[0]),
        grid.integrate(|i, z| u[i] * z[1]),
    ]
}

#[test]
fn projection_examples() {
    let g = SphereGrid::circle(128).unwrap();
    let p = constraint_project(&g, &vec![1.0; 128]).unwrap();
    assert!(p.u.iter().all(|v| v.abs() < 1e-14));
    let u = mode(&g, 2, 0.4);
    let p = constraint_project(&g, &u).unwrap();
    assert!(p.u.iter().zip(&u).all(|(a, b)| (a - b).abs() < 1e-14));
    assert_eq!(p.rescale, 1.0);
    for seed in 0..5 {
        let u: Vec<f64> = random_band_limited(&g, 12, seed)
            .unwrap()
            .iter()
            .zip(g.sample(|z| 0.2 + 0.1 * z[0] - 0.3 * z[1]))
            .map(|(a, b)| a + b)
            .collect();
        let p = constraint_project(&g, &u).unwrap();
        let norm = l2(&g, &p.u).sqrt();
        for m in low_moments(&g, &p.u) {
            assert!(m.abs() <= 1e-10 * norm);
        }
        assert!(p.u.iter().all(|v| v.abs() <= 0.5 + 1e-15));
    }
}

#[test]
fn constraint_enforcement_is_exact() {
    let g = SphereGrid::circle(128).unwrap();
    let u = constraint_project(&g, &random_band_limited(&g, 8, 3).unwrap())
        .unwrap()
        .u;
    for t in [0.01, 0.05, 0.2] {
        let c = enforce_constraints(&g, &u, t).unwrap();
        let e = NearlySphericalShape::new(g.clone(), c.t, c.u.clone()).unwrap();
        assert!((e.volume() - PI).abs() < VOLUME_TOL);
        let b = e.barycenter();
        assert!(b[0].hypot(b[1]) < BARYCENTER_TOL);
        assert!(c.volume_error < VOLUME_TOL && c.barycenter_error < BARYCENTER_TOL);
    }
    let s = SphereGrid::sphere(10, 20).unwrap();
    let u = s.sample(|z| 0.4 * (z[0] * z[1] + z[2] * z[2] - 1.0 / 3.0));
    let c = enforce_constraints(&s, &u, 0.1).unwrap();
    let e = NearlySphericalShape::new(s, c.t, c.u).unwrap();
    assert!((e.volume() - 4.0 * PI / 3.0).abs() < VOLUME_TOL);
}

#[test]
fn gap_form_of_single_modes() {
    let g = SphereGrid::circle(64).unwrap();
    let z2 = zonal_coefficients(&g, &mode(&g, 2, 1.0 / PI.sqrt()), 20).unwrap();
    let f = spectral_gap_form(&z2, 2.0).unwrap();
    assert!((f.l2_squared - 1.0).abs() < 1e-13);
    assert!((f.gap - 4.0 * PI).abs() < 1e-10, "{f:?}");
    assert!((f.d_beta - 4.0 * PI).abs() < 1e-10);
    assert!(f.pass && f.slack.abs() < 1e-10);
    let z1 = zonal_coefficients(&g, &mode(&g, 1, 1.0), 20).unwrap();
    let f = spectral_gap_form(&z1, 2.0).unwrap();
    assert!(f.gap.abs() < 1e-10);
    let z0 = zonal_coefficients(&g, &vec![0.0; 64], 20).unwrap();
    let f = spectral_gap_form(&z0, 1.0).unwrap();
    assert_eq!(f.gap, 0.0);
    assert!(f.pass);
}

#[test]
fn fuglede_pure_mode() {
    let g = SphereGrid::circle(256).unwrap();
    let u = mode(&g, 3, 0.5);
    let r = fuglede_check(&g, 1.0, &u, &[0.02, 0.01, 0.005]).unwrap();
    let table = shapestab::spectral::SpectralTable::new(
        shapestab::spectral::SpectralParams::new(2, 1.0, 10).unwrap(),
    );
    let predicted = 0.5 * (table.lambda[1] - table.lambda[3]);
    assert!(rel(r.predicted_ratio, predicted) < 1e-12);
    assert!(rel(r.extrapolated_ratio.unwrap(), predicted) < 0.02);
    assert!(r.pass);
    for c in &r.cases {
        assert!(c.u_l2_squared > 0.0 && c.bound > 0.0 && c.pass);
    }
    r.into_result().unwrap();
}

#[test]
fn fuglede_rejects_unprojected_input() {
    let g = SphereGrid::circle(64).unwrap();
    let u = g.sample(|z| 0.3 * z[0] + 0.1 * (2.0 * z[1].atan2(z[0])).cos());
    assert!(fuglede_check(&g, 1.0, &u, &[0.01]).is_err());
    assert!(fuglede_projected(&g, 1.0, &u, &[0.01, 0.005]).unwrap().pass);
}

#[test]
fn neville_reproduces_quadratics() {
    let x = [0.3, 0.2, 0.1];
    let y: Vec<f64> = x.iter().map(|t| 2.0 - 3.0 * t + 5.0 * t * t).collect();
    assert!((neville_at_zero(&x, &y) - 2.0).abs() < 1e-13);
}

#[test]
fn least_squares_on_exact_line() {
    let x = [0.0, 1.0, 2.0, 5.0];
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
    let (slope, intercept, res) = least_squares(&x, &y);
    assert!((slope - 2.0).abs() < 1e-14 && (intercept + 1.0).abs() < 1e-14 && res < 1e-14);
}

#[test]
fn annulus_quadratic_deficit_matches_moments() {
    // β = 2: G(E) = 2|E| ∫_E |x|² for centred E
    let f = sharpness_fit(2, 2.0, &default_h_grid()).unwrap();
    let w = ball_volume(2);
    for p in &f.points {
        let (r1, r2) = ((1.0 - p.h).sqrt(), (1.0 + p.h).sqrt());
        let m2 = 2.0 * w / 4.0 * (r1.powi(4) - 1.0 + r2.powi(4));
        let ball = 2.0 * w * (2.0 * w / 4.0);
        let want = 2.0 * w * m2 - ball;
        assert!(
            (p.deficit - want).abs() <= 1e-9 * want.abs() + 1e-13,
            "{} {}",
            p.deficit,
            want
        );
    }
    assert!(f.pass && f.slope > SLOPE_RANGE.0 && f.slope < SLOPE_RANGE.1);
    assert!(f.decades >= MIN_DECADES);
}

#[test]
fn sharpness_needs_enough_points() {
    assert!(sharpness_fit(2, 1.0, &[0.01, 0.02, 0.05]).is_err());
}

#[test]
fn big_asymmetry_constants_and_cases() {
    let w = ball_volume(2);
    let beta: f64 = 1.5;
    let x = xi(2, beta);
    assert!(
        rel(
            x,
            (3f64.powf(beta) - 2f64.powf(beta)) * w / (2.0 * 3f64.powf(beta))
        ) < 1e-14
    );
    assert!(
        rel(
            big_asymmetry_bound(2, beta),
            0.5 * (3f64.powf(beta) - 2f64.powf(beta)) * w * w
        ) < 1e-14
    );
    let r = big_asymmetry_check(2, beta, 5, 3).unwrap();
    assert!(r.pass && r.growth_monotone);
    assert!(r.cases.iter().any(|c| c.precondition));
    for c in r.cases.iter().filter(|c| c.precondition) {
        assert!(c.asymmetry >= 2.0 * (w - x));
        assert!(c.deficit >= c.bound);
    }
    let last = r.growth.last().unwrap();
    assert!(rel(last.scaled, 0.5 * w * w) < 0.1, "{last:?}");
}

#[test]
fn two_ball_quadratic_deficit() {
    // split the unit disc into two equal discs at centre distance D
    let rr = (0.5f64).sqrt();
    for d in [4.0, 8.0] {
        let cfg = BallConfiguration::new(
            2,
            vec![
                Ball {
                    center: [0.0, 0.0, 0.0],
                    radius: rr,
                },
                Ball {
                    center: [d, 0.0, 0.0],
                    radius: rr,
                },
            ],
        )
        .unwrap();
        let def = shape_g_beta(&Shape::Balls(cfg), 2.0).unwrap().deficit;
        let (a, m2) = (PI * 0.5, PI * 0.25 * 0.5);
        let own = 2.0 * a * m2;
        let cross = a * a * d * d + 2.0 * a * m2;
        let ball = 2.0 * PI * (PI / 2.0);
        let want = 2.0 * own + 2.0 * cross - ball;
        assert!(rel(def, want) < 1e-10, "{def} {want}");
    }
}

#[test]
fn mixed_scan_small_grid() {
    let par = MixedParams::new(2, 1.0, 0.5, 0.5).unwrap();
    let battery = vec![
        Competitor {
            label: "annulus".into(),
            shape: Shape::Radial(annulus_family(0.2, 2).unwrap()),
        },
        Competitor {
            label: "split".into(),
            shape: Shape::Balls(
                BallConfiguration::new(
                    2,
                    vec![
                        Ball {
                            center: [0.0, 0.0, 0.0],
                            radius: 0.5f64.sqrt(),
                        },
                        Ball {
                            center: [3.0, 0.0, 0.0],
                            radius: 0.5f64.sqrt(),
                        },
                    ],
                )
                .unwrap(),
            ),
        },
    ];
    let w = ball_volume(2);
    let grid = [1e-3 * w, 1e-1 * w, w, 10.0 * w, 1e3 * w];
    let r = ball_minimality_scan(par, &grid, &battery).unwrap();
    assert!(r.max_scaling_error < SCALING_TOL);
    assert!(r.rows.last().unwrap().ball_wins);
    assert!(r.largest_decade_dominated);
    for c in &r.competitors {
        assert!(c.g > 0.0, "{}", c.label);
    }
}

#[test]
fn quasimin_sign_of_bumps() {
    let g = SphereGrid::circle(256).unwrap();
    let b = NearlySphericalShape::ball(g);
    let dent = localized_bump(&b, 1.0, 0.3, -0.05).unwrap();
    let bump = localized_bump(&b, 1.0, 0.3, 0.05).unwrap();
    let d = quasimin_ratio(&b, &[dent], 0.5).unwrap();
    let o = quasimin_ratio(&b, &[bump], 0.5).unwrap();
    // pushing the boundary inward lowers P_s; pushing outward raises it
    assert!(d.cases[0].ratio > 0.0, "{:?}", d.cases);
    assert!(o.cases[0].ratio < 0.0, "{:?}", o.cases);
}

#[test]
fn quasimin_constant_is_stable() {
    let g = SphereGrid::circle(256).unwrap();
    let b = NearlySphericalShape::ball(g);
    let battery = random_bump_battery(&b, 24, 11).unwrap();
    let q = quasimin_ratio(&b, &battery, 0.5).unwrap();
    assert!(q.lambda_hat.is_finite() && q.lambda_hat > 0.0);
    let n = q.running_max.len();
    assert!(q.running_max.windows(2).all(|w| w[1] >= w[0]));
    assert!(rel(q.running_max[n / 2], q.lambda_hat) < 0.25);
    let with_self = {
        let mut v = battery.clone();
        v.push(b.clone());
        quasimin_ratio(&b, &v, 0.5).unwrap()
    };
    assert_eq!(with_self.excluded, vec![24]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn projection_kills_low_modes(seed in 0u64..1000, c in -1.0f64..1.0, a in -1.0f64..1.0) {
        let g = SphereGrid::circle(96).unwrap();
        let base = random_band_limited(&g, 10, seed).unwrap();
        let lin = g.sample(|z| c + a * z[0]);
        let u: Vec<f64> = base.iter().zip(&lin).map(|(x, y)| x + y).collect();
        let p = constraint_project(&g, &u).unwrap();
        let norm = l2(&g, &p.u).sqrt();
        for m in low_moments(&g, &p.u) {
            prop_assert!(m.abs() <= 1e-10 * norm.max(1e-300));
        }
    }

    #[test]
    fn gap_form_nonnegative(seed in 0u64..1000, beta in 0.2f64..6.0) {
        let g = SphereGrid::circle(64).unwrap();
        let u = random_band_limited(&g, 12, seed).unwrap();
        let z = zonal_coefficients(&g, &u, 20).unwrap();
        let f = spectral_gap_form(&z, beta).unwrap();
        prop_assert!(f.pass && f.slack >= -1e-9 * f.exact_bound);
    }
}
