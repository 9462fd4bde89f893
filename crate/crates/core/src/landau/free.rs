use num_complex::Complex64;
use serde::Serialize;

/// One branch of the zero-field dispersion. Units with `hbar = 1`; `mass`
/// and `v_fermi` in any consistent system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeModeResult {
    pub kvec: [f64; 2],
    pub branch: i8,
    pub energy: f64,
    /// Eigenvector of `σ·k̂` with eigenvalue `branch`; for `k = 0` the
    /// constant spinors `(1, 0)` and `(0, 1)`.
    pub helicity_spinor: [Complex64; 2],
}

/// `E_± = k²/2m ± v_F |k|`, `+` branch first. An infinite mass is the
/// massless Dirac cone.
pub fn free_dispersion(kvec: [f64; 2], mass: f64, v_fermi: f64) -> [FreeModeResult; 2] {
    let k = kvec[0].hypot(kvec[1]);
    let kinetic = if mass.is_infinite() { 0.0 } else { k * k / (2.0 * mass) };
    let phase = Complex64::from_polar(1.0, kvec[1].atan2(kvec[0]));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let spinor = |branch: i8| {
        if k == 0.0 {
            if branch > 0 {
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            } else {
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
            }
        } else {
            [Complex64::new(r, 0.0), phase * (r * branch as f64)]
        }
    };
    [1i8, -1].map(|branch| FreeModeResult {
        kvec,
        branch,
        energy: kinetic + branch as f64 * v_fermi * k,
        helicity_spinor: spinor(branch),
    })
}

/// `(E − k²/2m)² − v_F² k²`, vanishing on the dispersion.
pub fn free_det_residual(energy: f64, k: f64, mass: f64, v_fermi: f64) -> f64 {
    let kinetic = if mass.is_infinite() { 0.0 } else { k * k / (2.0 * mass) };
    let d = energy - kinetic;
    d * d - v_fermi * v_fermi * k * k
}
