//! Landau levels of the deformed model in the Landau gauge.
//!
//! Internal units: `eB = v_F = hbar = 1`, so energies are in
//! `eps_B = v_F sqrt(eB)`, lengths in `l_B`, and the mass equals the signed
//! ratio `z`.

mod current;
mod free;
mod spectrum;
mod states;
mod symmetry;

pub use current::{
    continuity_residual, current_density, total_charge, uniform_grid, CurrentSample, Superposition,
};
pub use free::{free_det_residual, free_dispersion, FreeModeResult};
pub use spectrum::{
    det_residual, level_energy, level_lambda, limit_energy, paired_gap, valley_spectrum, zero_mode_energy,
    zero_mode_energy_ev, LandauLevel, LevelKind, Regime, DEGENERACY_PER_AREA,
};
pub use states::{
    eigenstate, overlap, overlap_quadrature, paper_normalization, valley_state, zero_mode_state, Component,
    SpinorState,
};
pub use symmetry::{tp_violation, PauliExpansion};
