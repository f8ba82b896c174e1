mod common;

use common::{ln_gamma, rel, theta_direct, theta_rodrigues};
use proptest::prelude::*;
use shapestab::io::write_spectral_csv;
use shapestab::special_fn::{funk_hecke_rule, ln_gamma_signed};
use shapestab::spectral::*;
use std::f64::consts::PI;

fn params(n: usize, beta: f64, k_max: usize) -> SpectralParams {
    SpectralParams::new(n, beta, k_max).unwrap()
}

#[test]
fn log_gamma_against_stirling() {
    for &x in &[0.3, 0.5, 1.0, 1.5, 2.75, 7.0, 19.5, 60.25] {
        let (l, s) = ln_gamma_signed(x).unwrap();
        assert_eq!(s, 1.0);
        assert!(
            (l - ln_gamma(x)).abs() < 1e-13 * ln_gamma(x).abs().max(1.0),
            "{x}"
        );
    }
}

#[test]
fn closed_form_against_direct_quadrature() {
    for n in [2, 3, 4, 5] {
        for beta in [0.5, 1.0, 2.5, 7.0] {
            let p = params(n, beta, 10);
            for k in 0..=6 {
                let a = theta_closed(&p, k);
                let b = theta_direct(n, beta, k);
                assert!(
                    (a - b).abs() <= 1e-9 * theta_closed(&p, 0),
                    "N={n} beta={beta} k={k}: {a} {b}"
                );
            }
        }
    }
}

#[test]
fn closed_form_against_beta_integrals() {
    for n in [2, 3, 4, 5] {
        for beta in [0.5, 1.0, 2.0, 2.5, 4.0, 7.0] {
            let p = params(n, beta, 20);
            for k in 0..=20 {
                let a = theta_closed(&p, k);
                let b = theta_rodrigues(n, beta, k);
                if b == 0.0 {
                    assert_eq!(a, 0.0);
                } else {
                    assert!(rel(a, b) < 1e-11, "N={n} beta={beta} k={k}: {a} {b}");
                }
            }
        }
    }
}

#[test]
fn planar_quadratic_values() {
    let t = SpectralTable::new(params(2, 2.0, 50));
    assert!((theta_direct(2, 2.0, 0) - 2.0 * PI).abs() < 1e-12);
    assert!((theta_direct(2, 2.0, 1) + PI).abs() < 1e-12);
    assert!((t.theta[0] - 2.0 * PI).abs() < 1e-12);
    assert!((t.theta[1] + PI).abs() < 1e-12);
    assert!((t.lambda[1] - 12.0 * PI).abs() < 1e-11);
    assert!((t.lambda[2] - 8.0 * PI).abs() < 1e-11);
    assert!((t.d_beta - 4.0 * PI).abs() < 1e-11);
    assert!((t.mu[1] - t.mu[0] / 2.0).abs() < 1e-15);
}

#[test]
fn printed_recursion_has_the_wrong_sign() {
    // θ_{k+1} = (β/2-k)/(c+k) θ_k, read literally, would make θ_1 positive.
    let p = params(2, 2.0, 5);
    let c = (p.beta + 2.0 * p.n as f64 - 2.0) / 2.0;
    let literal = p.beta / 2.0 / c * theta_closed(&p, 0);
    let quad = theta_direct(2, 2.0, 1);
    assert!((literal - PI).abs() < 1e-12);
    assert!((quad + PI).abs() < 1e-12);
    let seq = theta_sequence(&p);
    assert!((seq[1] - quad).abs() < 1e-12);
}

#[test]
fn factorization_and_monotone_modulus() {
    for n in [2, 3, 4] {
        for beta in [0.5, 1.0, 2.5, 7.0, 9.3] {
            let p = params(n, beta, 200);
            let t = SpectralTable::new(p);
            for k in 0..=200 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((t.theta[k] - sign * t.c_beta * t.mu[k]).abs() <= 1e-14 * t.theta[0]);
                assert!(
                    (t.theta[k] - theta_closed(&p, k)).abs()
                        <= 1e-11 * t.theta[k].abs().max(1e-300) + 1e-15 * t.theta[0]
                );
                if k < 200 {
                    assert!(t.theta[k + 1].abs() <= t.theta[k].abs() * (1.0 + 1e-14));
                }
            }
            assert_eq!(t.lambda[0], 0.0);
            assert!(
                (t.lambda_inf - 2f64.powf(1.0 + beta / 2.0) * t.theta[0]).abs()
                    < 1e-12 * t.lambda_inf
            );
        }
    }
}

#[test]
fn raabe_ratio() {
    for (n, beta) in [(2, 0.5), (3, 1.0), (4, 2.5)] {
        let p = params(n, beta, 501);
        let t = SpectralTable::new(p);
        let k = 500;
        let r = k as f64 * (t.theta[k].abs() / t.theta[k + 1].abs() - 1.0);
        let target = beta + n as f64 - 1.0;
        assert!(rel(r, target) < 0.01, "{r} vs {target}");
    }
}

#[test]
fn eigenvalues_converge_to_the_plateau() {
    let t = SpectralTable::new(params(3, 1.0, 2000));
    let last = t.lambda[2000];
    assert!(rel(last, t.lambda_inf) < 1e-3);
    assert!((t.lambda[1999] - t.lambda_inf).abs() > (last - t.lambda_inf).abs());
}

#[test]
fn even_beta_truncation() {
    for n in [2, 3] {
        for m in 1..=3 {
            let beta = 2.0 * m as f64;
            let p = params(n, beta, 30);
            let rule = funk_hecke_rule(40, n, beta).unwrap();
            for k in m + 1..=30 {
                assert_eq!(theta_closed(&p, k), 0.0);
                let d = theta_quadrature_direct(&p, k, &rule).unwrap();
                assert!(d.abs() <= 1e-12 * theta_closed(&p, 0), "{n} {m} {k} {d}");
            }
            let t = SpectralTable::new(p);
            for k in m + 1..=30 {
                assert_eq!(t.lambda[k], t.lambda_inf);
            }
        }
    }
}

#[test]
fn gap_examples() {
    let r = verify_gap(&SpectralTable::new(params(2, 2.0, 50))).unwrap();
    assert_eq!(r.argmin_k, 2);
    assert!((r.min_gap - 4.0 * PI).abs() < 1e-11);
    let t = SpectralTable::new(params(3, 0.5, 100));
    verify_gap(&t).unwrap();
    assert!(t.lambda[1..].windows(2).all(|w| w[1] < w[0]));
    let t7 = SpectralTable::new(params(2, 7.0, 60));
    verify_gap(&t7).unwrap();
    let o = oscillation_profile(&t7).unwrap();
    assert_eq!(o.k_tilde, 4);
    assert!(o.alternation_holds && o.monotone_tail_holds);
    for k in 1..=4 {
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert!(s * (t7.lambda[k] - t7.lambda_inf) < 0.0, "{k}");
    }
}

#[test]
fn even_beta_plateau_in_profile() {
    let o = oscillation_profile(&SpectralTable::new(params(3, 4.0, 20))).unwrap();
    assert_eq!(o.plateau_from, Some(3));
}

#[test]
fn csv_emission() {
    let t = SpectralTable::new(params(2, 2.0, 5));
    let mut buf = Vec::new();
    write_spectral_csv(&t, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("# N=2\n# beta="));
    assert!(text.contains("# D_beta="));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "k,theta,mu,lambda,lambda_minus_lambda_inf");
    assert_eq!(rows.len(), 7);
    let theta1: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(theta1, t.theta[1]);
}

#[test]
fn marchaud_at_positive_exponent_matches_table() {
    for (n, beta) in [(2, 0.5), (3, 2.5), (4, 7.0)] {
        let t = SpectralTable::new(params(n, beta, 30));
        for k in 0..=30 {
            let m = marchaud_eigenvalue(n, beta, k);
            assert!(
                (m - t.lambda[k]).abs() <= 1e-11 * t.lambda_inf,
                "{n} {beta} {k}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gap_holds_for_random_beta(n in 2usize..6, beta in 0.05f64..12.0) {
        let t = SpectralTable::new(params(n, beta, 200));
        let r = verify_gap(&t).unwrap();
        prop_assert!(r.slack >= -GAP_TOLERANCE);
        let l1 = t.lambda[1];
        prop_assert!(t.lambda.iter().all(|&l| l <= l1 * (1.0 + 1e-14)));
    }

    #[test]
    fn d_beta_branches_join(n in 2usize..6) {
        for b in [2.0, 4.0] {
            let lo = d_beta(&params(n, b - 1e-9, 10));
            let hi = d_beta(&params(n, b + 1e-9, 10));
            prop_assert!(rel(lo, hi) < 1e-7);
        }
    }
}
