//! Valley map and time-reversal × parity on the Landau Hamiltonian.
//!
//! The Hamiltonian is kept as an expression in the kinetic momenta
//! `Π1 = p`, `Π2 = −q` (units of `sqrt(eB)`),
//!
//! `2mH/|eB| = c0 (Π1² + Π2²) ⊗ 1 + Π1 ⊗ C1 + Π2 ⊗ C2`,
//!
//! with scalar `c0` and 2x2 spin matrices `C1`, `C2`. Time reversal × parity
//! acts as complex conjugation on the spin structure followed by conjugation
//! with `σ1`; the kinetic momenta are left alone, which is how the symmetry is
//! stated for the continuum operator. The orbital factors are only assembled
//! into matrices afterwards.

use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::Valley;
use crate::linalg::CMatrix;
use crate::oscillator::{momentum, pauli, position, Spin};

#[derive(Debug, Clone, PartialEq)]
pub struct PauliExpansion {
    pub kinetic: Complex64,
    pub c1: CMatrix,
    pub c2: CMatrix,
}

impl PauliExpansion {
    /// `2mH_K/|eB| = Π² + 2z (Π1 σ1 + Π2 σ2)`, and `H_K' = −σ2 H_K σ2`.
    pub fn landau(valley: Valley, z: f64) -> Self {
        let k = Self {
            kinetic: Complex64::new(1.0, 0.0),
            c1: pauli(Spin::X).scale_real(2.0 * z),
            c2: pauli(Spin::Y).scale_real(2.0 * z),
        };
        match valley {
            Valley::K => k,
            Valley::KPrime => k.spin_conjugate(&pauli(Spin::Y)).negate(),
        }
    }

    /// `U (·) U†` on the spin factors.
    pub fn spin_conjugate(&self, u: &CMatrix) -> Self {
        let ud = u.adjoint();
        Self {
            kinetic: self.kinetic,
            c1: &(u * &self.c1) * &ud,
            c2: &(u * &self.c2) * &ud,
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            kinetic: -self.kinetic,
            c1: self.c1.scale_real(-1.0),
            c2: self.c2.scale_real(-1.0),
        }
    }

    pub fn complex_conjugate(&self) -> Self {
        Self {
            kinetic: self.kinetic.conj(),
            c1: self.c1.conj(),
            c2: self.c2.conj(),
        }
    }

    /// `σ1 H* σ1`.
    pub fn time_reversal_parity(&self) -> Self {
        self.complex_conjugate().spin_conjugate(&pauli(Spin::X))
    }

    /// Dense matrix on the oscillator ⊗ spinor basis, with `Π1² + Π2² = 2a†a + 1`
    /// from truncated products as in [`crate::oscillator::build_landau_operator`].
    pub fn assemble(&self, n_max: usize) -> Result<CMatrix> {
        let p = momentum(n_max);
        let minus_q = position(n_max).scale_real(-1.0);
        let kinetic = &(&p * &p) + &(&minus_q * &minus_q);
        let one = pauli(Spin::Identity);
        let m = &kinetic.scale(self.kinetic).kron(&one) + &p.kron(&self.c1);
        Ok(&m + &minus_q.kron(&self.c2))
    }
}

/// Largest entry of `σ1 H* σ1 − H` for the valley Hamiltonian.
pub fn tp_violation(valley: Valley, z: f64, n_max: usize) -> Result<f64> {
    let h = PauliExpansion::landau(valley, z);
    Ok(h.time_reversal_parity().assemble(n_max)?.max_abs_diff(&h.assemble(n_max)?))
}
