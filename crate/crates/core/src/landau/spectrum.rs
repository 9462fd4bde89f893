use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Valley;
use crate::units::ModelParams;

/// Flux quanta per unit area, `eB/h = 1/(2π l_B²)`, in units of `1/l_B²`.
pub const DEGENERACY_PER_AREA: f64 = 1.0 / (2.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LevelKind {
    ZeroMode,
    Pair { n: usize, s: i8 },
}

impl LevelKind {
    pub fn n(&self) -> Option<usize> {
        match self {
            LevelKind::ZeroMode => None,
            LevelKind::Pair { n, .. } => Some(*n),
        }
    }

    pub fn s(&self) -> Option<i8> {
        match self {
            LevelKind::ZeroMode => None,
            LevelKind::Pair { s, .. } => Some(*s),
        }
    }
}

/// One Landau level. Energies in units of `eps_B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandauLevel {
    pub kind: LevelKind,
    pub valley: Valley,
    pub energy: f64,
    /// Per `l_B²`; see [`DEGENERACY_PER_AREA`].
    pub degeneracy_per_area: f64,
}

impl LandauLevel {
    pub fn is_zero_mode(&self) -> bool {
        self.kind == LevelKind::ZeroMode
    }
}

pub(crate) fn branch_sign(s: i8) -> Result<f64> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::invalid(format!("branch index s must be ±1, got {s}"))),
    }
}

fn require_massive(z: f64) -> Result<()> {
    if z == 0.0 {
        Err(Error::domain("z = 0 is the massless limit; use limit_energy"))
    } else if !z.is_finite() {
        Err(Error::domain(format!("z must be finite, got {z}")))
    } else {
        Ok(())
    }
}

/// `R = sqrt(1 + 8 z² (n+1))` and `R - 1` without cancellation.
pub(crate) fn root_and_excess(n: usize, z: f64) -> (f64, f64) {
    let x = 8.0 * z * z * (n as f64 + 1.0);
    let r = (1.0 + x).sqrt();
    (r, x / (r + 1.0))
}

/// `λ = 2(n+1) + s R`, the eigenvalue of `2mH/|eB|` (see
/// [`crate::oscillator::build_landau_operator`]).
pub fn level_lambda(n: usize, s: i8, z: f64) -> Result<f64> {
    let sign = branch_sign(s)?;
    let (r, _) = root_and_excess(n, z);
    Ok(2.0 * (n as f64 + 1.0) + sign * r)
}

/// `E = (1/z)[n + 1 + (s/2) sqrt(1 + 8z²(n+1))]`, units of `eps_B`. The
/// sign of `z` carries the sign of the mass.
pub fn level_energy(n: usize, s: i8, z: f64) -> Result<f64> {
    require_massive(z)?;
    Ok(level_lambda(n, s, z)? / (2.0 * z))
}

/// Relative residual of `[2(n+1) − λ]² − 1 − 8z²(n+1) = 0` at `λ = 2zE`.
pub fn det_residual(n: usize, s: i8, z: f64) -> Result<f64> {
    let lambda = 2.0 * z * level_energy(n, s, z)?;
    let m = n as f64 + 1.0;
    let x = 8.0 * z * z * m;
    let d = 2.0 * m - lambda;
    Ok((d * d - 1.0 - x) / (1.0 + x))
}

/// `E_0 = 1/(2z)`, units of `eps_B`.
pub fn zero_mode_energy(z: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::domain("zero mode energy eB/2m diverges for m = 0"));
    }
    Ok(0.5 / z)
}

/// `E_0 = eB/2m` in eV.
pub fn zero_mode_energy_ev(params: &ModelParams) -> Result<f64> {
    let scale = params.scale()?;
    Ok(zero_mode_energy(scale.z)? * scale.eps_b_ev)
}

/// Exact separation between `E_{K',n,±}` and its near-degenerate partner of
/// the other valley, `2(n+1)/w`.
pub fn paired_gap(n: usize, z: f64) -> Result<f64> {
    require_massive(z)?;
    Ok(2.0 * (n as f64 + 1.0) / z.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `sgn(z) s sqrt(2(n+1)) + (n+1)/z`, error `O(z^-2)`.
    LargeZ,
    /// `(1/z)[n + 1 + s/2 + 2 s z² (n+1)]`, error `O(z^4)` in units of `eB/|m|`.
    SmallZ,
    /// `s sqrt(2(n+1))`.
    Massless,
}

pub fn limit_energy(n: usize, s: i8, z: f64, regime: Regime) -> Result<f64> {
    let sign = branch_sign(s)?;
    let m = n as f64 + 1.0;
    match regime {
        Regime::Massless => Ok(sign * (2.0 * m).sqrt()),
        Regime::LargeZ => {
            require_massive(z)?;
            Ok(z.signum() * sign * (2.0 * m).sqrt() + m / z)
        }
        Regime::SmallZ => {
            require_massive(z)?;
            Ok((m + sign / 2.0 + 2.0 * sign * z * z * m) / z)
        }
    }
}

/// Zero mode plus `(n, ±)` for `n ≤ n_max` of one valley. `K'` levels are the
/// negated `K` levels.
pub fn valley_spectrum(valley: Valley, n_max: usize, z: f64) -> Result<Vec<LandauLevel>> {
    let sign = match valley {
        Valley::K => 1.0,
        Valley::KPrime => -1.0,
    };
    let level = |kind, energy: f64| LandauLevel {
        kind,
        valley,
        energy: sign * energy,
        degeneracy_per_area: DEGENERACY_PER_AREA,
    };
    let mut out = Vec::with_capacity(2 * n_max + 3);
    out.push(level(LevelKind::ZeroMode, zero_mode_energy(z)?));
    for n in 0..=n_max {
        for s in [1i8, -1] {
            out.push(level(LevelKind::Pair { n, s }, level_energy(n, s, z)?));
        }
    }
    Ok(out)
}
