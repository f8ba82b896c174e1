//! Special functions and quadrature primitives.

mod gamma;
mod polynomials;
mod quadrature;

pub use gamma::{
    ball_volume, gamma, ln_gamma_signed, ln_rgamma_signed, log_gamma, pochhammer, rgamma, sin_pi,
    sphere_area,
};
pub use polynomials::{legendre_normalized, spherical_poly, spherical_poly_all};
pub use quadrature::{
    funk_hecke_rule, gauss_jacobi_general, gauss_jacobi_rule, tanh_sinh, tanh_sinh_dist,
    tridiagonal_eigen, GaussLegendre, Integral, QuadratureRule,
};
