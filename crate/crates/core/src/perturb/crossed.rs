use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landau::{level_energy, level_lambda, zero_mode_energy, LevelKind, SpinorState};
use crate::oscillator::QuadratureRule;

/// Above this `|E/(v_F B)|` first-order results are reported but flagged.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// In-plane electric field along `x1` on top of the perpendicular `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossedFieldSpec {
    /// `E / (v_F B)`.
    pub e_over_vfb: f64,
    /// Transverse momentum, units of `1/l_B`.
    pub k: f64,
    /// Displacement `−mE/eB²` of the oscillator center, units of `l_B`.
    pub shifted_center: f64,
}

impl CrossedFieldSpec {
    pub fn new(e_over_vfb: f64, k: f64, z: f64) -> Result<Self> {
        if !(e_over_vfb.is_finite() && k.is_finite() && z.is_finite()) {
            return Err(Error::invalid("crossed-field parameters must be finite"));
        }
        Ok(Self { e_over_vfb, k, shifted_center: -z * e_over_vfb })
    }

    pub fn is_perturbative(&self) -> bool {
        self.e_over_vfb.abs() <= PERTURBATIVE_LIMIT
    }

    /// `Λ = λ + (mE/B)(mE/B − 2k)` for the unshifted eigenvalue `λ = 2mℰ`.
    pub fn lambda_cr(&self, lambda: f64, z: f64) -> f64 {
        let me_b = z * self.e_over_vfb;
        lambda + me_b * (me_b - 2.0 * self.k)
    }
}

/// `(E/B)[k − mE/2B]` in units of `eps_B`.
pub fn rigid_shift(e_over_vfb: f64, k: f64, z: f64) -> f64 {
    e_over_vfb * (k - 0.5 * z * e_over_vfb)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossedFieldLevel {
    pub kind: LevelKind,
    /// Zero-order energy, from `Λ` equal to the unshifted level.
    pub energy: f64,
    pub unshifted: f64,
    pub shift: f64,
    pub lambda_cr: f64,
}

/// Zero-order level in crossed fields: the shifted oscillator has the
/// unperturbed eigenvalue in `Λ`, so `λ = Λ − (mE/B)(mE/B − 2k)`.
pub fn crossed_field_spectrum(kind: LevelKind, cf: &CrossedFieldSpec, z: f64) -> Result<CrossedFieldLevel> {
    let (unshifted, lambda_cr) = match kind {
        LevelKind::ZeroMode => (zero_mode_energy(z)?, 1.0),
        LevelKind::Pair { n, s } => (level_energy(n, s, z)?, level_lambda(n, s, z)?),
    };
    let me_b = z * cf.e_over_vfb;
    let lambda = lambda_cr - me_b * (me_b - 2.0 * cf.k);
    Ok(CrossedFieldLevel {
        kind,
        energy: lambda / (2.0 * z),
        unshifted,
        shift: rigid_shift(cf.e_over_vfb, cf.k, z),
        lambda_cr,
    })
}

/// `<bra|σ2|ket>` by Gauss-Hermite quadrature.
pub fn sigma2_element(bra: &SpinorState, ket: &SpinorState) -> Result<Complex64> {
    if bra.k != ket.k {
        return Err(Error::invalid("matrix elements need states at the same k"));
    }
    let rule = QuadratureRule::gauss_hermite(bra.max_orbital() + ket.max_orbital() + 2)?;
    let i = Complex64::new(0.0, 1.0);
    rule.integrate_complex(|q| {
        let (a, b) = (bra.eval(q), ket.eval(q));
        // σ2 (u, l) = (−i l, i u)
        (a[0].conj() * (-i * b[1]) + a[1].conj() * (i * b[0])) * (q * q).exp()
    })
}

/// First-order shift `<ψ| (w²E/(m v_F B)) σ2 |ψ>`; `w²/m = z` internally.
pub fn crossed_field_first_order(state: &SpinorState, cf: &CrossedFieldSpec) -> Result<f64> {
    let mean = sigma2_element(state, state)?;
    Ok(state.z * cf.e_over_vfb * mean.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::{eigenstate, zero_mode_state};

    fn levels() -> Vec<LevelKind> {
        let mut out = vec![LevelKind::ZeroMode];
        for n in 0..6 {
            out.push(LevelKind::Pair { n, s: 1 });
            out.push(LevelKind::Pair { n, s: -1 });
        }
        out
    }

    #[test]
    fn no_field_is_no_shift() {
        let cf = CrossedFieldSpec::new(0.0, 0.7, -1e3).unwrap();
        for kind in levels() {
            let l = crossed_field_spectrum(kind, &cf, -1e3).unwrap();
            assert_eq!(l.shift, 0.0);
            assert!((l.energy - l.unshifted).abs() < 1e-14 * l.unshifted.abs().max(1.0));
        }
    }

    #[test]
    fn shift_is_rigid_and_matches_lambda_route() {
        for z in [-1e3, -2.0, 0.5] {
            let cf = CrossedFieldSpec::new(0.03, 1.2, z).unwrap();
            for kind in levels() {
                let l = crossed_field_spectrum(kind, &cf, z).unwrap();
                let scale = l.unshifted.abs().max(1.0);
                assert!((l.energy - l.unshifted - l.shift).abs() < 1e-14 * scale, "z={z} {kind:?}");
            }
        }
    }

    #[test]
    fn shift_is_linear_in_k_and_quadratic_in_field() {
        let z = -7.0;
        let r = 0.02;
        let slope = (rigid_shift(r, 2.5, z) - rigid_shift(r, -1.0, z)) / 3.5;
        assert!((slope - r).abs() < 1e-15);
        let beyond = rigid_shift(2.0 * r, 0.4, z) - 2.0 * rigid_shift(r, 0.4, z);
        assert!((beyond + z * r * r).abs() < 1e-16);
    }

    #[test]
    fn sigma2_mean_vanishes() {
        let cf = CrossedFieldSpec::new(0.01, 0.0, 3.0).unwrap();
        let st = eigenstate(3, -1, 0.0, 3.0).unwrap();
        assert!(crossed_field_first_order(&st, &cf).unwrap().abs() < 1e-13);
        let psi0 = zero_mode_state(0.0, 3.0).unwrap();
        assert_eq!(crossed_field_first_order(&psi0, &cf).unwrap(), 0.0);
    }

    #[test]
    fn sigma2_couples_neighboring_levels() {
        // same-n partners have disjoint orbitals per component, so use n and n + 1
        let a = eigenstate(3, 1, 0.0, 1.0).unwrap();
        let b = eigenstate(2, 1, 0.0, 1.0).unwrap();
        let v = sigma2_element(&a, &b).unwrap();
        assert!((v.re - -0.497771738062026426802645578679).abs() < 1e-13);
        assert!(v.im.abs() < 1e-14);
        let same_n = sigma2_element(&eigenstate(2, -1, 0.0, 1.0).unwrap(), &b).unwrap();
        assert!(same_n.norm() < 1e-14);
    }

    #[test]
    fn large_fields_are_flagged() {
        assert!(CrossedFieldSpec::new(0.05, 0.0, 1.0).unwrap().is_perturbative());
        assert!(!CrossedFieldSpec::new(0.5, 0.0, 1.0).unwrap().is_perturbative());
        let cf = CrossedFieldSpec::new(0.2, 1.0, 4.0).unwrap();
        assert_eq!(cf.shifted_center, -0.8);
        assert!((cf.lambda_cr(3.0, 4.0) - (3.0 + 0.8 * (0.8 - 2.0))).abs() < 1e-15);
    }
}
