//! Harmonic-oscillator toolkit: Hermite functions, Gauss-Hermite quadrature
//! and truncated operator matrices. The dense matrices built here are the
//! brute-force oracle for the closed-form Landau problem.

mod hermite;
mod operators;
mod quadrature;

pub use hermite::{
    hermite, hermite_function, hermite_function_derivative, hermite_functions_normalized,
    hermite_functions_normalized_with_derivative, normalized_hermite_polys, recurrence_check,
    HermiteBasis, Normalization,
};
pub use operators::{
    annihilation, build_landau_operator, covariant_momenta, creation, interior_eigenpairs,
    momentum, number_operator, pauli, position, spin_swap, BasisTag, OperatorMatrix, Spin,
};
pub use quadrature::QuadratureRule;
