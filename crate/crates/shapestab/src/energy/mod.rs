//! Shape functionals: the attractive energy `G_β`, its truncation, the Riesz
//! potential `V_α`, the fractional perimeter `P_s`, the auxiliary potentials
//! `ψ` and `ζ_f`, and the sphere seminorms.

mod kernel;
pub mod radial;

pub use kernel::{KernelKind, KernelSpec, Radial};
mod shape;

pub use shape::{
    direct_energy, g_ball_radius, g_beta, g_beta_direct, g_beta_truncated, g_beta_with_order,
    v_alpha, Estimate, ShapeEnergy, DEFAULT_BOX_ORDER,
};

mod perimeter;
pub use perimeter::{log_sine_weights, p_s_shape, spectral_derivative, MAX_SLOPE};

mod seminorm;
pub use seminorm::{
    max_degree, seminorm_beta, seminorm_beta_direct, seminorm_s, synthesize, zonal_coefficients,
    SeminormPair, ZonalCoefficients,
};

mod report;
pub use report::{
    energy_report, epsilon_of_m, fingerprint, g_beta_radial, g_truncated_radial, mixed_energy,
    shape_g_beta, shape_g_truncated, shape_p_s, shape_v_alpha, v_alpha_radial, EnergyConfig,
    EnergyReport, RADIAL_REL_TOL,
};
