use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::hurwitz::{hurwitz_zeta, hurwitz_zeta_du0};
use crate::error::{Error, Result};

/// Inverse temperature and chemical potential in units of `eps_B`, and the
/// arbitrary scale of the zeta determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalParams {
    pub beta: f64,
    pub mu: f64,
    pub lambda_scale: f64,
}

impl ThermalParams {
    pub fn new(beta: f64, mu: f64, lambda_scale: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::invalid(format!("beta must be > 0, got {beta}")));
        }
        if !(lambda_scale > 0.0 && lambda_scale.is_finite()) {
            return Err(Error::invalid(format!("scale must be > 0, got {lambda_scale}")));
        }
        if !mu.is_finite() {
            return Err(Error::invalid("mu must be finite"));
        }
        Ok(Self { beta, mu, lambda_scale })
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..*self }
    }
}

/// Fermionic Matsubara frequency `(2π/β)(l + 1/2)`.
pub fn matsubara_frequency(l: i64, beta: f64) -> f64 {
    2.0 * PI / beta * (l as f64 + 0.5)
}

/// Per-level contribution to `log Det`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogDet {
    pub value: f64,
    /// `μ` sits on the level within `ON_LEVEL_TOLERANCE / β`.
    pub on_level: bool,
}

pub const ON_LEVEL_TOLERANCE: f64 = 1e-12;

/// `−d/du Σ_l (λ_l/Λ)^{-u}` at `u = 0` over the Matsubara eigenvalues
/// `λ_l = iω_l + μ − E`, using the two Hurwitz functions with arguments
/// rotated into `Re(a) > 0`:
///
/// `(2π/βΛ)^{-u} { e^{-iπu/2} ζ(u, 1/2 − i σ X) + e^{iπu/2} ζ(u, 1/2 + i σ X) }`,
///
/// `X = β|μ − E|/2π`, `σ = sign(μ − E)`. This equals `log(1 + e^{β(E−μ)})`.
pub fn hurwitz_logdet(energy: f64, tp: &ThermalParams) -> Result<LogDet> {
    let delta = tp.mu - energy;
    let x = tp.beta * delta.abs() / (2.0 * PI);
    let sigma = if delta > 0.0 {
        1.0
    } else if delta < 0.0 {
        -1.0
    } else {
        0.0
    };
    let a_minus = Complex64::new(0.5, -sigma * x);
    let a_plus = Complex64::new(0.5, sigma * x);
    let half_pi_i = Complex64::new(0.0, PI / 2.0);
    let zero = Complex64::new(0.0, 0.0);
    let zeta_minus = hurwitz_zeta(zero, a_minus)?;
    let zeta_plus = hurwitz_zeta(zero, a_plus)?;
    // brace and its u-derivative at 0
    let brace = zeta_minus + zeta_plus;
    let brace_du = -half_pi_i * zeta_minus + hurwitz_zeta_du0(a_minus)? + half_pi_i * zeta_plus
        + hurwitz_zeta_du0(a_plus)?;
    let scale_log = (2.0 * PI / (tp.beta * tp.lambda_scale)).ln();
    let derivative = -scale_log * brace + brace_du;
    let tolerance = 1e-9 * (1.0 + x * (1.0 + x).ln());
    if derivative.im.abs() > tolerance {
        return Err(Error::numerical(format!(
            "zeta determinant has imaginary part {}",
            derivative.im
        )));
    }
    Ok(LogDet {
        value: -derivative.re,
        on_level: tp.beta * delta.abs() < ON_LEVEL_TOLERANCE,
    })
}

/// `log(2 cosh(β(μ − E)/2))`, the symmetric form of the per-level
/// determinant: [`hurwitz_logdet`] plus `β(μ − E)/2`. Checked against the
/// closed form before returning.
pub fn level_logdet(energy: f64, tp: &ThermalParams) -> Result<LogDet> {
    let raw = hurwitz_logdet(energy, tp)?;
    let value = raw.value + 0.5 * tp.beta * (tp.mu - energy);
    let closed = level_logdet_closed_form(energy, tp);
    if (value - closed).abs() > 1e-8 * closed.abs().max(1.0) {
        return Err(Error::numerical(format!(
            "zeta determinant {value} disagrees with closed form {closed}"
        )));
    }
    Ok(LogDet { value, on_level: raw.on_level })
}

/// `log(2 cosh(y))`, `y = β(μ − E)/2`, without overflow.
pub fn level_logdet_closed_form(energy: f64, tp: &ThermalParams) -> f64 {
    let y = (0.5 * tp.beta * (tp.mu - energy)).abs();
    y + (-2.0 * y).exp().ln_1p()
}

/// Low-temperature form `β(E − μ) Θ(E − μ)` of [`hurwitz_logdet`].
pub fn low_temperature_logdet(energy: f64, tp: &ThermalParams) -> f64 {
    (tp.beta * (energy - tp.mu)).max(0.0)
}

/// Fermi factor `(1/2)[1 + tanh(β(μ − E)/2)] = 1/(1 + e^{β(E−μ)})`, the
/// `μ`-derivative of [`level_logdet`] over `β` plus `1/2`.
pub fn occupation(energy: f64, tp: &ThermalParams) -> f64 {
    logistic(tp.beta * (tp.mu - energy))
}

/// `|occupation − Θ(μ − E)|`, evaluated without cancellation.
pub fn step_deviation(energy: f64, tp: &ThermalParams) -> f64 {
    let x = tp.beta * (tp.mu - energy);
    if x > 0.0 {
        logistic(-x)
    } else {
        logistic(x)
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Independent oracle: the Matsubara product paired as `l, −l−1`,
/// `log 2 + Σ_{l<L} log(1 + (μ−E)²/ω_l²)` plus the integral of the tail.
pub fn matsubara_product_logdet(energy: f64, tp: &ThermalParams, terms: usize) -> f64 {
    let y = tp.beta * (tp.mu - energy).abs() / (2.0 * PI);
    let mut sum = 0.0;
    for l in (0..terms).rev() {
        let t = l as f64 + 0.5;
        sum += (y * y / (t * t)).ln_1p();
    }
    // Σ_{l≥L} g(l + 1/2) ≈ ∫_L^∞ log(1 + y²/t²) dt (midpoint rule)
    let big_t = terms as f64;
    let tail = PI * y - big_t * (y * y / (big_t * big_t)).ln_1p() - 2.0 * y * (big_t / y.max(1e-300)).atan();
    std::f64::consts::LN_2 + sum + if y > 0.0 { tail } else { 0.0 }
}
