//! Spherical (normalized Gegenbauer) polynomials and the orthonormal
//! associated Legendre functions used for real harmonics on `S²`.

use std::f64::consts::PI;

/// Spherical polynomial `P_k` in dimension `N`, normalized by `P_k(1) = 1`.
///
/// For `N = 2` this is the Chebyshev polynomial `T_k`, for `N = 3` the
/// Legendre polynomial.
pub fn spherical_poly(k: usize, n_dim: usize, t: f64) -> f64 {
    let mut out = [0.0];
    spherical_poly_all(k, n_dim, t, |j, v| {
        if j == k {
            out[0] = v
        }
    });
    out[0]
}

/// Calls `sink(j, P_j(t))` for `j = 0..=k_max` in order.
pub fn spherical_poly_all(k_max: usize, n_dim: usize, t: f64, mut sink: impl FnMut(usize, f64)) {
    let nm2 = n_dim as f64 - 2.0;
    let mut p0 = 1.0;
    sink(0, p0);
    if k_max == 0 {
        return;
    }
    let mut p1 = t;
    sink(1, p1);
    for k in 1..k_max {
        let kf = k as f64;
        let p2 = ((2.0 * kf + nm2) * t * p1 - kf * p0) / (kf + nm2);
        sink(k + 1, p2);
        p0 = p1;
        p1 = p2;
    }
}

/// Table `[l][m]` (`m ≤ l ≤ l_max`) of `√((2l+1)/4π · (l-m)!/(l+m)!) P_l^m(x)`,
/// without the Condon–Shortley phase.
pub fn legendre_normalized(l_max: usize, x: f64) -> Vec<Vec<f64>> {
    let sx = (1.0 - x * x).max(0.0).sqrt();
    let mut p: Vec<Vec<f64>> = (0..=l_max).map(|l| vec![0.0; l + 1]).collect();
    let mut pmm = (0.25 / PI).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = m as f64;
            pmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sx;
        }
        p[m][m] = pmm;
        if m < l_max {
            p[m + 1][m] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
        }
        for l in (m + 2)..=l_max {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let lp = lf - 1.0;
            let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
            p[l][m] = a * (x * p[l - 1][m] - p[l - 2][m] / a_prev);
        }
    }
    p
}
