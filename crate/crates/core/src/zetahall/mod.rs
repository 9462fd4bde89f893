//! Zeta-regularized grand partition function and the Hall staircase.
//!
//! All energies in units of `eps_B`.

mod hall;
mod hurwitz;
mod thermal;

pub use hall::{
    auto_n_max, build_spectrum_table, hall_conductivity, hall_conductivity_thermal, hall_curve, plateau_edges,
    reduced, ConductivityCurve, MAX_LEVEL_INDEX, PlateauEdge, SpectrumTable,
};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_du0, DERIVATIVE_FIXTURES};
pub use thermal::{
    hurwitz_logdet, level_logdet, level_logdet_closed_form, low_temperature_logdet, matsubara_frequency,
    matsubara_product_logdet, occupation, step_deviation, LogDet, ThermalParams, ON_LEVEL_TOLERANCE,
};
