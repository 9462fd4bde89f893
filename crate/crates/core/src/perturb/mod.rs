//! First-order perturbation theory on the Landau levels: the quadratic
//! nearest-neighbor term and a crossed in-plane electric field.
//!
//! Internal units as in [`crate::landau`].

mod crossed;
mod nearest;

pub use crossed::{
    crossed_field_first_order, crossed_field_spectrum, rigid_shift, sigma2_element, CrossedFieldLevel,
    CrossedFieldSpec, PERTURBATIVE_LIMIT,
};
pub use nearest::{
    apply_h, fit_exponent, free_perturbation_check, free_perturbation_shift, landau_matrix_element,
    perturbation_matrix, second_order_shifts, Factor, FactorOrder, MatrixElement, PerturbationSpec,
    ShiftSample,
};
