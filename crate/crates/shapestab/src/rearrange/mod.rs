//! Rearrangements and transport maps.

mod decreasing;
mod density;
mod monotone;
mod riesz;
mod shell;

pub use decreasing::{
    decreasing_rearrangement, decreasing_rearrangement_2d, distribution, is_radially_decreasing,
};
pub use density::{Density1D, Density2D};
pub use monotone::{
    density_integral, density_integral_2d, increasing_rearrangement_1d, knothe_rosenblatt_2d,
    pushforward_check, test_battery, KnotheRosenblatt, PushforwardReport, TransportMap1D, MASS_TOL,
};
pub use riesz::{
    function_minimum_check, pair_lower_bound_check, riesz_increasing_check, tau_bound,
    zeta_min_increment, LowerBoundReport, RieszInput, RieszReport, EQUALITY_TOL,
};
pub use shell::{
    shell_transport, transport_alpha, transport_constant, transport_energy_bound_check, PolarCell,
    SectorMap, SectorShells, ShellMap, TransportBoundReport,
};
