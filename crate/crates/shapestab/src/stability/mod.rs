//! Desk-scale checks of the stability inequalities: the Fuglede bound for
//! nearly-spherical sets, the sharpness exponent on annulus swaps, the
//! big-asymmetry bound, ball dominance for the mixed energy and empirical
//! quasi-minimality constants.

mod bigasym;
mod fuglede;
mod mixed;
mod project;
mod quasimin;
mod random;
mod sharpness;

pub use bigasym::{
    big_asymmetry_bound, big_asymmetry_check, xi, BigAsymmetryCase, BigAsymmetryReport,
    GrowthPoint, MIN_GAP,
};
pub use fuglede::{
    fuglede_check, fuglede_projected, neville_at_zero, spectral_gap_form, FugledeCase,
    FugledeReport, GapForm, T_MAX,
};
pub use mixed::{
    ball_minimality_scan, default_battery, default_m_grid, Competitor, CompetitorDeficits,
    MixedParams, MixedRow, MixedScanReport, ScanViolation, SCALING_TOL,
};
pub use project::{
    constraint_project, enforce_constraints, Constrained, Projected, BARYCENTER_TOL, VOLUME_TOL,
};
pub use quasimin::{
    localized_bump, quasimin_ratio, random_bump_battery, QuasiminCase, QuasiminReport,
};
pub use random::{normalize_sup, random_band_limited, RANDOM_DEGREE};
pub use sharpness::{
    default_h_grid, least_squares, sharpness_fit, SlopeFit, SlopePoint, MIN_DECADES,
    MIN_FIT_POINTS, SLOPE_RANGE,
};
