//! Physical parameters, unit conversions and the lattice to continuum mapping.
//!
//! Everything downstream of this module works in dimensionless internal
//! units: energies in `eps_B = hbar v_F / l_B`, lengths in the magnetic
//! length `l_B = sqrt(hbar / eB)`. With `hbar = eB = v_F = 1` the mass is
//! the signed ratio `z = m v_F l_B / hbar` and the deformation parameter
//! `theta = m v_F` equals `z` as well.

use std::fmt;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};

/// CODATA 2018 values (exact where the SI fixes them).
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Speed of light, m/s.
    pub const C: f64 = 299_792_458.0;
    /// Elementary charge, C.
    pub const E_CHARGE: f64 = 1.602_176_634e-19;
    /// Electron mass, kg.
    pub const M_E: f64 = 9.109_383_701_5e-31;
    /// Planck constant, J s.
    pub const H: f64 = 6.626_070_15e-34;
    /// One angstrom in meters.
    pub const ANGSTROM: f64 = 1e-10;
    /// Electron rest energy, eV.
    pub const M_E_C2_EV: f64 = M_E * C * C / E_CHARGE;
    /// hbar c in eV m.
    pub const HBAR_C_EV_M: f64 = HBAR * C / E_CHARGE;
}

use constants::*;

/// Values quoted alongside the graphene hopping parameters in the
/// literature this model is compared with. They are not mutually
/// consistent with the mapping formulas implemented here (the formulas
/// give `v_F/c ~ 3.02e-3`, `|m| c^2 ~ 4.29 MeV ~ 8.4 m_e` and `w ~ 533`
/// at 10 T), so they are kept for reference only.
pub mod reference {
    /// Quoted Fermi velocity, m/s.
    pub const V_FERMI_M_PER_S: f64 = 6.0e5;
    /// Quoted `v_F / c`.
    pub const V_FERMI_OVER_C: f64 = 2.0e-3;
    /// Quoted `m c^2`, eV.
    pub const MASS_EV: f64 = -4.3e6;
    /// Quoted mass in natural units, 1/m.
    pub const MASS_INVERSE_METERS: f64 = -8.53e13;
    /// Quoted `|m| / m_e`.
    pub const MASS_OVER_M_E: f64 = 32.9;
    /// Quoted `w` at 10 T.
    pub const W_AT_10_TESLA: f64 = 1385.0;
    /// Quoted level-spacing scale at 10 T, eV.
    pub const EPS_B_EV_AT_10_TESLA: f64 = 4.87e-2;
    /// The quoted numbers cannot all be reproduced from one parameter set.
    pub const CONSISTENT_WITH_FORMULAS: bool = false;
}

/// Tight-binding parameters of the honeycomb lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    /// Carbon-carbon distance, m.
    pub a: f64,
    /// Nearest-neighbor hopping, eV.
    pub t: f64,
    /// Next-to-nearest-neighbor hopping, eV.
    pub t_prime: f64,
}

impl LatticeParams {
    pub fn new(a: f64, t: f64, t_prime: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("lattice constant must be > 0, got {a}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("hopping t must be > 0, got {t}")));
        }
        if !(t_prime >= 0.0 && t_prime.is_finite()) {
            return Err(Error::invalid(format!("hopping t' must be >= 0, got {t_prime}")));
        }
        Ok(Self { a, t, t_prime })
    }

    pub fn from_angstrom(a_angstrom: f64, t: f64, t_prime: f64) -> Result<Self> {
        Self::new(a_angstrom * ANGSTROM, t, t_prime)
    }

    /// a = 1.42 Å, t = 2.8 eV, t' = 0.1 eV.
    pub fn graphene() -> Self {
        Self { a: 1.42 * ANGSTROM, t: 2.8, t_prime: 0.1 }
    }
}

/// External fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    /// Magnetic flux density, T.
    pub b_tesla: f64,
    /// In-plane electric field along x1, V/m.
    pub e_field: f64,
    /// Sign of eB, +1 or -1.
    pub charge_sign: i8,
}

impl FieldParams {
    pub fn new(b_tesla: f64, e_field: f64, charge_sign: i8) -> Result<Self> {
        if !(b_tesla >= 0.0 && b_tesla.is_finite()) {
            return Err(Error::invalid(format!("B must be >= 0, got {b_tesla}")));
        }
        if !e_field.is_finite() {
            return Err(Error::invalid("electric field must be finite"));
        }
        if charge_sign != 1 && charge_sign != -1 {
            return Err(Error::invalid(format!("charge sign must be +1 or -1, got {charge_sign}")));
        }
        Ok(Self { b_tesla, e_field, charge_sign })
    }

    pub fn magnetic(b_tesla: f64) -> Result<Self> {
        Self::new(b_tesla, 0.0, 1)
    }
}

/// Continuum parameters obtained from the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumParams {
    /// Fermi velocity, m/s.
    pub v_fermi: f64,
    /// Signed rest energy `m c^2`, eV. `-inf` in the massless limit `t' = 0`.
    pub mass_ev: f64,
}

impl ContinuumParams {
    pub fn v_fermi_over_c(&self) -> f64 {
        self.v_fermi / C
    }

    pub fn is_massless(&self) -> bool {
        self.mass_ev.is_infinite()
    }
}

/// `v_F = (3/2) a t / hbar` and `m = -2 hbar^2 / (9 t' a^2)`.
///
/// The mass follows from matching the `k^2` term of the next-to-nearest
/// neighbor band to `k^2 / 2m`; it is negative and diverges as `t' -> 0`.
pub fn map_lattice_to_continuum(lp: &LatticeParams) -> ContinuumParams {
    let v_fermi = 1.5 * lp.a * lp.t * E_CHARGE / HBAR;
    let mass_ev = if lp.t_prime == 0.0 {
        f64::NEG_INFINITY
    } else {
        -2.0 * HBAR_C_EV_M * HBAR_C_EV_M / (9.0 * lp.t_prime * lp.a * lp.a)
    };
    ContinuumParams { v_fermi, mass_ev }
}

/// Scales set by the magnetic field. Only defined for `B > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticScale {
    /// Signed `z = m v_F l_B / hbar`; `w = |z|`.
    pub z: f64,
    /// `eps_B = hbar v_F / l_B`, eV.
    pub eps_b_ev: f64,
    /// Magnetic length, m. Unknown when the scale was given directly.
    pub l_b_m: Option<f64>,
}

impl MagneticScale {
    /// Working point given directly as `(z, eps_B)`.
    pub fn from_z(z: f64, eps_b_ev: f64) -> Result<Self> {
        if z.is_nan() {
            return Err(Error::invalid("z is NaN"));
        }
        if !(eps_b_ev > 0.0 && eps_b_ev.is_finite()) {
            return Err(Error::invalid(format!("eps_B must be > 0, got {eps_b_ev}")));
        }
        Ok(Self { z, eps_b_ev, l_b_m: None })
    }

    pub fn w(&self) -> f64 {
        self.z.abs()
    }
}

/// Full model: continuum parameters plus fields and the derived scales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub v_fermi: f64,
    pub mass_ev: f64,
    pub field: FieldParams,
    pub spin_degeneracy: u32,
    scale: Option<MagneticScale>,
}

impl ModelParams {
    /// Magnetic scales; a domain error when `B = 0`.
    pub fn scale(&self) -> Result<MagneticScale> {
        self.scale
            .ok_or_else(|| Error::domain("magnetic quantities are undefined for B = 0"))
    }

    pub fn z(&self) -> Result<f64> {
        self.scale().map(|s| s.z)
    }

    pub fn w(&self) -> Result<f64> {
        self.scale().map(|s| s.w())
    }

    pub fn eps_b_ev(&self) -> Result<f64> {
        self.scale().map(|s| s.eps_b_ev)
    }

    pub fn l_b_m(&self) -> Result<f64> {
        self.scale()?
            .l_b_m
            .ok_or_else(|| Error::domain("magnetic length unknown"))
    }

    /// Deformation parameter `theta = m v_F`, as an energy `m c^2 v_F / c` in eV.
    pub fn theta_ev(&self) -> f64 {
        self.mass_ev * self.v_fermi / C
    }

    /// `E / (v_F B)`, the small parameter of the crossed-field problem.
    pub fn e_over_vfb(&self) -> Result<f64> {
        if self.field.b_tesla == 0.0 {
            return Err(Error::domain("E/(v_F B) undefined for B = 0"));
        }
        Ok(self.field.e_field / (self.v_fermi * self.field.b_tesla))
    }

    /// Flux quanta per unit area `eB/h`, 1/m^2.
    pub fn degeneracy_per_area(&self) -> f64 {
        E_CHARGE * self.field.b_tesla / H
    }
}

/// Build the model for Fermi velocity `v_fermi` (m/s) and signed rest energy
/// `mass_ev` (eV), in the fields `fp`.
pub fn derive_model(v_fermi: f64, mass_ev: f64, fp: &FieldParams) -> Result<ModelParams> {
    if !(v_fermi > 0.0 && v_fermi.is_finite()) {
        return Err(Error::invalid(format!("v_F must be > 0, got {v_fermi}")));
    }
    if mass_ev.is_nan() {
        return Err(Error::invalid("mass is NaN"));
    }
    let scale = if fp.b_tesla > 0.0 {
        let l_b = (HBAR / (E_CHARGE * fp.b_tesla)).sqrt();
        let v_over_c = v_fermi / C;
        let eps_b_ev = HBAR_C_EV_M * v_over_c / l_b;
        // z = m v_F l_B / hbar = (m c^2)(v_F / c) l_B / (hbar c)
        let z = mass_ev * v_over_c * l_b / HBAR_C_EV_M;
        Some(MagneticScale { z, eps_b_ev, l_b_m: Some(l_b) })
    } else {
        None
    };
    Ok(ModelParams {
        v_fermi,
        mass_ev,
        field: *fp,
        spin_degeneracy: 2,
        scale,
    })
}

/// Physical quantity tagged with its dimension, for crossing the unit boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// Energy in eV.
    EnergyEv(f64),
    /// Length in m.
    LengthM(f64),
}

/// Convert an energy (eV) or length (m) to internal units.
pub fn to_internal(q: Quantity, scale: &MagneticScale) -> Result<f64> {
    match q {
        Quantity::EnergyEv(e) => Ok(e / scale.eps_b_ev),
        Quantity::LengthM(l) => scale
            .l_b_m
            .map(|lb| l / lb)
            .ok_or_else(|| Error::domain("magnetic length unknown")),
    }
}

/// Inverse of [`to_internal`]; `like` selects the dimension.
pub fn from_internal(x: f64, like: Quantity, scale: &MagneticScale) -> Result<Quantity> {
    match like {
        Quantity::EnergyEv(_) => Ok(Quantity::EnergyEv(x * scale.eps_b_ev)),
        Quantity::LengthM(_) => scale
            .l_b_m
            .map(|lb| Quantity::LengthM(x * lb))
            .ok_or_else(|| Error::domain("magnetic length unknown")),
    }
}

/// Contents of a `key = value` parameter file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamsFile {
    pub lattice: LatticeParams,
    pub field: FieldParams,
    pub v_fermi_over_c: Option<f64>,
    pub mass_ev: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    a_angstrom: Option<Spanned<f64>>,
    #[serde(rename = "t_eV")]
    t_ev: Option<Spanned<f64>>,
    #[serde(rename = "tprime_eV")]
    tprime_ev: Option<Spanned<f64>>,
    #[serde(rename = "B_tesla")]
    b_tesla: Option<Spanned<f64>>,
    #[serde(rename = "E_voltperm")]
    e_voltperm: Option<Spanned<f64>>,
    #[serde(rename = "vF_over_c")]
    vf_over_c: Option<Spanned<f64>>,
    #[serde(rename = "mass_eV")]
    mass_ev: Option<Spanned<f64>>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

impl ParamsFile {
    /// Parse a flat TOML table of numbers (`key = value`, `#` comments).
    /// Unknown or repeated keys are errors. Lattice keys default to the
    /// graphene values, `B_tesla` is required.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawParams = toml::from_str(text).map_err(|e| Error::Config {
            line: e.span().map(|r| line_of(text, r.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?;
        let config_err = |v: &Spanned<f64>, message: String| Error::Config { line: line_of(text, v.span().start), message };
        let fields = [
            ("a_angstrom", &raw.a_angstrom),
            ("t_eV", &raw.t_ev),
            ("tprime_eV", &raw.tprime_ev),
            ("B_tesla", &raw.b_tesla),
            ("E_voltperm", &raw.e_voltperm),
            ("vF_over_c", &raw.vf_over_c),
            ("mass_eV", &raw.mass_ev),
        ];
        for (key, v) in fields {
            if let Some(v) = v {
                if !v.get_ref().is_finite() {
                    return Err(config_err(v, format!("{key} is not finite")));
                }
            }
        }
        let get = |v: &Option<Spanned<f64>>| v.as_ref().map(|s| *s.get_ref());

        let g = LatticeParams::graphene();
        let lattice = LatticeParams::new(
            get(&raw.a_angstrom).map(|a| a * ANGSTROM).unwrap_or(g.a),
            get(&raw.t_ev).unwrap_or(g.t),
            get(&raw.tprime_ev).unwrap_or(g.t_prime),
        )
        .map_err(|e| {
            let line = [&raw.a_angstrom, &raw.t_ev]
                .iter()
                .filter_map(|v| v.as_ref().map(|s| line_of(text, s.span().start)))
                .max()
                .unwrap_or(0);
            Error::Config { line, message: e.to_string() }
        })?;

        let b = raw
            .b_tesla
            .as_ref()
            .ok_or(Error::Config { line: 0, message: "missing required key B_tesla".into() })?;
        let field = FieldParams::new(*b.get_ref(), get(&raw.e_voltperm).unwrap_or(0.0), 1)
            .map_err(|e| config_err(b, e.to_string()))?;

        if let Some(v) = &raw.vf_over_c {
            if *v.get_ref() <= 0.0 {
                return Err(config_err(v, "vF_over_c must be > 0".into()));
            }
        }
        Ok(Self { lattice, field, v_fermi_over_c: get(&raw.vf_over_c), mass_ev: get(&raw.mass_ev) })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { line: 0, message: format!("{}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    /// Model built from the lattice mapping, with the optional overrides applied.
    pub fn model(&self) -> Result<ModelParams> {
        let cont = map_lattice_to_continuum(&self.lattice);
        let v = self.v_fermi_over_c.map(|r| r * C).unwrap_or(cont.v_fermi);
        let m = self.mass_ev.unwrap_or(cont.mass_ev);
        derive_model(v, m, &self.field)
    }
}

impl fmt::Display for ParamsFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a_angstrom = {}", self.lattice.a / ANGSTROM)?;
        writeln!(f, "t_eV = {}", self.lattice.t)?;
        writeln!(f, "tprime_eV = {}", self.lattice.t_prime)?;
        writeln!(f, "B_tesla = {}", self.field.b_tesla)?;
        writeln!(f, "E_voltperm = {}", self.field.e_field)?;
        if let Some(v) = self.v_fermi_over_c {
            writeln!(f, "vF_over_c = {v}")?;
        }
        if let Some(m) = self.mass_ev {
            writeln!(f, "mass_eV = {m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn graphene_mass_and_velocity() {
        let c = map_lattice_to_continuum(&LatticeParams::graphene());
        // |m| c^2 ~ 4.3 MeV
        assert!((c.mass_ev.abs() / 1e6 - 4.3).abs() < 0.05, "{}", c.mass_ev);
        assert!(c.mass_ev < 0.0);
        // 3 a t / (2 hbar c) with CODATA constants
        assert_relative_eq!(c.v_fermi_over_c(), 3.0224e-3, max_relative = 1e-4);
    }

    #[test]
    fn zero_next_neighbor_hopping_is_massless() {
        let lp = LatticeParams::from_angstrom(1.42, 2.8, 0.0).unwrap();
        let c = map_lattice_to_continuum(&lp);
        assert!(c.is_massless());
        assert_eq!(c.mass_ev, f64::NEG_INFINITY);
    }

    #[test]
    fn mapping_is_homogeneous() {
        let lp = LatticeParams::graphene();
        let base = map_lattice_to_continuum(&lp);
        let scaled_t = map_lattice_to_continuum(&LatticeParams { t: 3.0 * lp.t, ..lp });
        assert_relative_eq!(scaled_t.v_fermi, 3.0 * base.v_fermi, max_relative = 1e-14);
        let scaled_tp = map_lattice_to_continuum(&LatticeParams { t_prime: 3.0 * lp.t_prime, ..lp });
        assert_relative_eq!(scaled_tp.mass_ev, base.mass_ev / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn eps_b_at_ten_tesla() {
        let fp = FieldParams::magnetic(10.0).unwrap();
        let m = derive_model(2e-3 * C, -4.3e6, &fp).unwrap();
        let eps = m.eps_b_ev().unwrap();
        assert!((eps - 4.87e-2).abs() < 0.01e-2, "{eps}");
    }

    #[test]
    fn w_from_lattice_chain() {
        let fp = FieldParams::magnetic(10.0).unwrap();
        let m = derive_model(3.02e-3 * C, -4.29e6, &fp).unwrap();
        let w = m.w().unwrap();
        assert!((w - 533.0).abs() < 1.0, "{w}");
        assert!(m.z().unwrap() < 0.0);
    }

    #[test]
    fn massless_model_has_zero_z_when_mass_vanishes() {
        let fp = FieldParams::magnetic(1.0).unwrap();
        let m = derive_model(1e6, 0.0, &fp).unwrap();
        assert_eq!(m.z().unwrap(), 0.0);
    }

    #[test]
    fn zero_field_has_no_magnetic_scale() {
        let fp = FieldParams::magnetic(0.0).unwrap();
        let m = derive_model(1e6, -1e6, &fp).unwrap();
        assert!(matches!(m.eps_b_ev(), Err(Error::Domain(_))));
        assert!(matches!(m.z(), Err(Error::Domain(_))));
        assert!(matches!(m.e_over_vfb(), Err(Error::Domain(_))));
    }

    #[test]
    fn mass_sign_flips_z_only() {
        let fp = FieldParams::magnetic(5.0).unwrap();
        let a = derive_model(1e6, 2e6, &fp).unwrap();
        let b = derive_model(1e6, -2e6, &fp).unwrap();
        assert_eq!(a.z().unwrap(), -b.z().unwrap());
        assert_eq!(a.w().unwrap(), b.w().unwrap());
    }

    #[test]
    fn internal_units() {
        let s = MagneticScale::from_z(-1000.0, 4.87e-2).unwrap();
        assert_eq!(to_internal(Quantity::EnergyEv(4.87e-2), &s).unwrap(), 1.0);
        assert_eq!(to_internal(Quantity::EnergyEv(2.0 * 4.87e-2), &s).unwrap(), 2.0);
        let e0 = to_internal(Quantity::EnergyEv(-2.43e-5), &s).unwrap();
        assert!((e0 - (-1.0 / 2000.0)).abs() < 0.005 / 2000.0, "{e0}");
        assert!(matches!(to_internal(Quantity::LengthM(1e-9), &s), Err(Error::Domain(_))));
    }

    #[test]
    fn config_parsing() {
        let text = "# graphene at 10 T\na_angstrom = 1.42\nt_eV=2.8\n tprime_eV = 0.1 # comment\nB_tesla = 10\n";
        let p = ParamsFile::parse(text).unwrap();
        assert_relative_eq!(p.lattice.a, 1.42e-10, max_relative = 1e-15);
        assert_eq!(p.field.e_field, 0.0);
        let m = p.model().unwrap();
        assert!(m.z().unwrap() < 0.0);

        let err = ParamsFile::parse("B_tesla = 1\nfoo = 2\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");
        assert!(ParamsFile::parse("a_angstrom = 1.42\n").is_err());
        assert!(ParamsFile::parse("B_tesla = 1\nB_tesla = 2\n").is_err());
        assert!(ParamsFile::parse("B_tesla = -1\n").is_err());
        assert!(ParamsFile::parse("B_tesla 1\n").is_err());

        let o = ParamsFile::parse("B_tesla = 10\nvF_over_c = 2e-3\nmass_eV = -4.3e6\n").unwrap();
        let m = o.model().unwrap();
        assert_relative_eq!(m.v_fermi, 2e-3 * C, max_relative = 1e-15);
        assert_eq!(m.mass_ev, -4.3e6);
        let again = ParamsFile::parse(&o.to_string()).unwrap();
        assert_eq!(again, o);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn internal_round_trip(e in -1e3f64..1e3, eps in 1e-4f64..1.0, lb in 1e-9f64..1e-7) {
                let s = MagneticScale { z: -10.0, eps_b_ev: eps, l_b_m: Some(lb) };
                for q in [Quantity::EnergyEv(e), Quantity::LengthM(e * 1e-9)] {
                    let x = to_internal(q, &s).unwrap();
                    let back = from_internal(x, q, &s).unwrap();
                    let (a, b) = match (q, back) {
                        (Quantity::EnergyEv(a), Quantity::EnergyEv(b)) => (a, b),
                        (Quantity::LengthM(a), Quantity::LengthM(b)) => (a, b),
                        _ => unreachable!(),
                    };
                    prop_assert!((a - b).abs() <= 1e-14 * a.abs());
                }
            }
        }
    }
}
