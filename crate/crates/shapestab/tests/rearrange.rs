mod common;

use common::{ball_volume, cdf_1d, inward_shell, random_grid_density, random_step_data, rel, rng};
use rand::Rng;
use shapestab::energy::radial::self_energy;
use shapestab::energy::Radial;
use shapestab::geometry::{Ball, BallConfiguration, RadialProfile, RadialStep};
use shapestab::rearrange::*;
use std::f64::consts::PI;

fn level_measure(n: usize, radii: &[f64], values: &[f64], tau: f64) -> f64 {
    let w = ball_volume(n);
    let mut prev = 0.0f64;
    let mut acc = 0.0;
    for (&r, &v) in radii.iter().zip(values) {
        if v > tau {
            acc += w * (r.powi(n as i32) - prev.powi(n as i32));
        }
        prev = r;
    }
    acc
}

#[test]
fn rearrangement_preserves_level_sets() {
    let mut r = rng(21);
    for _ in 0..30 {
        let n = r.random_range(2..=3);
        let (radii, values) = random_step_data(&mut r, 6);
        let f = RadialStep::new(n, radii.clone(), values.clone()).unwrap();
        let star = decreasing_rearrangement(&f).unwrap();
        assert!(is_radially_decreasing(&star));
        for tau in [0.0, 0.1, 0.35, 0.6, 0.9] {
            let want = level_measure(n, &radii, &values, tau);
            let a = distribution(&star, tau);
            assert!(
                (a - want).abs() <= 1e-12 * want.max(1.0),
                "{tau}: {a} {want}"
            );
        }
    }
}

#[test]
fn riesz_direction_on_random_profiles() {
    let mut r = rng(5);
    for _ in 0..50 {
        let n = r.random_range(2..=3);
        let (radii, values) = random_step_data(&mut r, 5);
        let f = RadialStep::new(n, radii, values).unwrap();
        for beta in [0.5, 1.0, 2.5] {
            let rep = riesz_increasing_check(&RieszInput::Radial(f.clone()), beta).unwrap();
            assert!(rep.gap >= -EQUALITY_TOL * rep.g_star, "{rep:?}");
            if rep.equality {
                assert!(rep.rearranged);
            }
        }
    }
}

#[test]
fn equality_only_for_ball_indicators() {
    for n in [2, 3] {
        let b = RadialStep::ball(n, 0.8).unwrap();
        let rep = riesz_increasing_check(&RieszInput::Radial(b), 1.0).unwrap();
        assert!(rep.equality && rep.ball_indicator);
        let a = RadialStep::new(n, vec![0.5, 1.0], vec![0.0, 1.0]).unwrap();
        let rep = riesz_increasing_check(&RieszInput::Radial(a), 1.0).unwrap();
        assert!(!rep.equality && rep.gap > 0.0);
    }
    let one = BallConfiguration::new(
        2,
        vec![Ball {
            center: [0.3, -0.2, 0.0],
            radius: 1.0,
        }],
    )
    .unwrap();
    let rep = riesz_increasing_check(&RieszInput::Balls(one), 2.0).unwrap();
    assert!(rep.equality);
    let two = BallConfiguration::new(
        2,
        vec![
            Ball {
                center: [0.0, 0.0, 0.0],
                radius: 1.0,
            },
            Ball {
                center: [3.0, 0.0, 0.0],
                radius: 0.5,
            },
        ],
    )
    .unwrap();
    let rep = riesz_increasing_check(&RieszInput::Balls(two), 2.0).unwrap();
    assert!(!rep.equality && rep.gap > 0.0);
}

#[test]
fn quadratic_energy_of_step_by_moments() {
    // ∫∫ f(x)f(y)|x-y|² = 2 m0 m2 for radial f
    let f = RadialStep::new(3, vec![0.4, 1.0, 1.5], vec![1.0, 0.3, 0.7]).unwrap();
    let w = ball_volume(3);
    let shells = [(0.0, 0.4, 1.0), (0.4, 1.0, 0.3), (1.0, 1.5, 0.7)];
    let m0: f64 = shells
        .iter()
        .map(|(a, b, v)| v * w * (b * b * b - a * a * a))
        .sum();
    let m2: f64 = shells
        .iter()
        .map(|(a, b, v)| v * 3.0 * w * (b.powi(5) - a.powi(5)) / 5.0)
        .sum();
    let g = self_energy(Radial::attractive(2.0), &f);
    assert!(rel(g, 2.0 * m0 * m2) < 1e-12);
}

#[test]
fn function_minimum_on_random_densities() {
    let mut r = rng(8);
    for _ in 0..50 {
        let n = r.random_range(2..=3);
        let (radii, values) = random_step_data(&mut r, 6);
        let g = RadialStep::new(n, radii, values).unwrap();
        let rep = function_minimum_check(&g, r.random_range(0.3..3.0)).unwrap();
        assert!(rep.slack >= -1e-10 * rep.bound, "{rep:?}");
    }
}

#[test]
fn pair_lower_bound_and_zeta() {
    let g = RadialProfile::new(2, vec![0.5, 1.0], vec![false, true, false]).unwrap();
    let h = RadialProfile::ball(2, 0.7).unwrap();
    let rep = pair_lower_bound_check(&g, &h, 1.0).unwrap();
    assert!(rep.slack > 0.0);
    let ball = RadialStep::ball(2, 1.0).unwrap();
    let rho: Vec<f64> = (0..20).map(|i| 0.1 * i as f64).collect();
    assert!(zeta_min_increment(&ball, 1.0, &rho).unwrap() > 0.0);
}

#[test]
fn increasing_rearrangement_composes_cdfs() {
    let mut r = rng(13);
    for _ in 0..20 {
        let (x, _, vx) = random_grid_density(&mut r, 7, 1);
        let (y, _, mut vy) = random_grid_density(&mut r, 5, 1);
        let ma = cdf_1d(&x, &vx, f64::INFINITY);
        let mb = cdf_1d(&y, &vy, f64::INFINITY);
        vy.iter_mut().for_each(|v| *v *= ma / mb);
        let mu = Density1D::new(x.clone(), vx.clone()).unwrap();
        let nu = Density1D::new(y.clone(), vy.clone()).unwrap();
        let t = increasing_rearrangement_1d(&mu, &nu).unwrap();
        for i in 0..=40 {
            let p = x[0] + (x[x.len() - 1] - x[0]) * i as f64 / 40.0;
            let lhs = cdf_1d(&y, &vy, t.eval(p));
            let rhs = cdf_1d(&x, &vx, p);
            assert!((lhs - rhs).abs() < 1e-10 * ma, "{lhs} {rhs}");
        }
        assert!(t.cdf_residual() < 1e-10 * ma);
    }
}

#[test]
fn knothe_rosenblatt_pushforward() {
    let mut r = rng(17);
    for _ in 0..20 {
        let (x, y, v) = random_grid_density(&mut r, 4, 3);
        let (x2, y2, mut v2) = random_grid_density(&mut r, 3, 4);
        let mu = Density2D::new(x, y, v).unwrap();
        let scale = mu.mass()
            / Density2D::new(x2.clone(), y2.clone(), v2.clone())
                .unwrap()
                .mass();
        v2.iter_mut().for_each(|a| *a *= scale);
        let nu = Density2D::new(x2, y2, v2).unwrap();
        let map = knothe_rosenblatt_2d(&mu, &nu).unwrap();
        let rep = pushforward_check(&map);
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn mismatched_masses_are_rejected() {
    let mu = Density1D::new(vec![0.0, 1.0], vec![1.0]).unwrap();
    let nu = Density1D::new(vec![0.0, 1.0], vec![2.0]).unwrap();
    assert!(increasing_rearrangement_1d(&mu, &nu).is_err());
}

#[test]
fn single_sector_radius_map() {
    let (a, b) = inward_shell(0.05);
    let map = shell_transport(
        &[SectorShells {
            a0: 0.0,
            a1: 1.0,
            source: vec![(1.0, 1.0 + a)],
            target: vec![(1.0 - b, 1.0)],
        }],
        0.1,
    )
    .unwrap();
    let s = &map.sectors[0];
    for i in 0..=10 {
        let rr = 1.0 + a * i as f64 / 10.0;
        let want = ((1.0 - b) * (1.0 - b) + rr * rr - 1.0).sqrt();
        assert!((s.radius_map(rr) - want).abs() < 1e-14);
    }
    assert!(map.cdf_residual() < 1e-14);
}

#[test]
fn shell_transport_bound() {
    let mut r = rng(29);
    for beta in [0.5, 2.0] {
        for _ in 0..4 {
            let eps = 0.15;
            let k = r.random_range(1..=4);
            let width = 2.0 * PI / k as f64;
            let sectors: Vec<SectorShells> = (0..k)
                .map(|j| {
                    let (a, b) = inward_shell(r.random_range(0.2..0.8) * eps);
                    SectorShells {
                        a0: j as f64 * width,
                        a1: (j + 1) as f64 * width,
                        source: vec![(1.0, 1.0 + a)],
                        target: vec![(1.0 - b, 1.0)],
                    }
                })
                .collect();
            let map = shell_transport(&sectors, eps).unwrap();
            let core = PolarCell {
                r0: 0.0,
                r1: 1.0 - eps,
                a0: 0.0,
                a1: 2.0 * PI,
            };
            let rep = transport_energy_bound_check(&map, &[core], beta).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert!(rel(rep.lhs, rep.lhs_direct) < 1e-6, "{rep:?}");
        }
    }
}
