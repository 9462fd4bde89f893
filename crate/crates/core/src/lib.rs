//! Landau levels of a deformed-Heisenberg-algebra model of graphene.
//!
//! The crate covers the tight-binding bands of the honeycomb lattice, the
//! closed-form Landau spectrum and eigenfunctions of the continuum model for
//! both valleys, the zeta-regularized Hall conductivity, and first-order
//! perturbation theory for the quadratic nearest-neighbor term and for
//! crossed electric and magnetic fields. Each closed form has an
//! independent numerical oracle (dense diagonalization on a truncated
//! oscillator basis, Gauss-Hermite quadrature, finite differences).

pub mod error;
pub mod landau;
pub mod lattice;
pub mod linalg;
pub mod oscillator;
pub mod perturb;
pub mod units;
pub mod validate;
pub mod zetahall;

pub use error::{Error, Result};
