//! Nearest and next-nearest neighbor tight-binding bands of the honeycomb
//! lattice. Wavevectors are measured in units of `1/a`, `a` the
//! carbon-carbon distance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::units::LatticeParams;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Wavevector in units of `1/a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KPoint {
    pub k1: f64,
    pub k2: f64,
}

impl KPoint {
    pub fn new(k1: f64, k2: f64) -> Self {
        Self { k1, k2 }
    }

    pub fn polar(radius: f64, theta: f64) -> Self {
        Self { k1: radius * theta.cos(), k2: radius * theta.sin() }
    }

    pub fn norm(&self) -> f64 {
        self.k1.hypot(self.k2)
    }

    /// Polar angle; `0` at the origin.
    pub fn theta(&self) -> f64 {
        if self.k1 == 0.0 && self.k2 == 0.0 {
            0.0
        } else {
            self.k2.atan2(self.k1)
        }
    }

    pub fn reflect(&self) -> Self {
        Self { k1: self.k1, k2: -self.k2 }
    }

    fn dot(&self, v: [f64; 2]) -> f64 {
        self.k1 * v[0] + self.k2 * v[1]
    }
}

impl std::ops::Add for KPoint {
    type Output = KPoint;
    fn add(self, o: KPoint) -> KPoint {
        KPoint::new(self.k1 + o.k1, self.k2 + o.k2)
    }
}

impl std::ops::Sub for KPoint {
    type Output = KPoint;
    fn sub(self, o: KPoint) -> KPoint {
        KPoint::new(self.k1 - o.k1, self.k2 - o.k2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Valley {
    K,
    KPrime,
}

/// Honeycomb geometry in units of `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoneycombGeometry {
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub b1: [f64; 2],
    pub b2: [f64; 2],
    pub deltas: [[f64; 2]; 3],
    pub k: KPoint,
    pub k_prime: KPoint,
}

impl Default for HoneycombGeometry {
    fn default() -> Self {
        let r = 2.0 * PI / 3.0;
        Self {
            a1: [1.5, SQRT3 / 2.0],
            a2: [1.5, -SQRT3 / 2.0],
            b1: [r, r * SQRT3],
            b2: [r, -r * SQRT3],
            deltas: [[0.5, SQRT3 / 2.0], [0.5, -SQRT3 / 2.0], [-1.0, 0.0]],
            k: KPoint::new(r, r / SQRT3),
            k_prime: KPoint::new(r, -r / SQRT3),
        }
    }
}

impl HoneycombGeometry {
    pub fn dirac_point(&self, valley: Valley) -> KPoint {
        match valley {
            Valley::K => self.k,
            Valley::KPrime => self.k_prime,
        }
    }

    /// Zone-edge midpoint `M`.
    pub fn m_point(&self) -> KPoint {
        KPoint::new(2.0 * PI / 3.0, 0.0)
    }

    /// `Σ_j exp(i k·δ_j)`; its modulus squared is the structure factor.
    pub fn hopping_sum(&self, k: KPoint) -> Complex64 {
        self.deltas.iter().map(|d| Complex64::from_polar(1.0, k.dot(*d))).sum()
    }
}

/// `f(k) = 3 + 4cos(3k1/2)cos(√3k2/2) + 2cos(√3k2)`, evaluated as
/// `|Σ exp(ik·δ)|^2` so that it stays accurate (and non-negative) near the
/// Dirac points.
pub fn structure_factor(k: KPoint, geom: &HoneycombGeometry) -> f64 {
    geom.hopping_sum(k).norm_sqr()
}

/// The cosine form of [`structure_factor`], plus its gradient and Hessian.
pub fn structure_factor_cosine(k: KPoint) -> (f64, [f64; 2], [[f64; 2]; 2]) {
    let c = SQRT3 / 2.0;
    let (s1, c1) = (1.5 * k.k1).sin_cos();
    let (s2, c2) = (c * k.k2).sin_cos();
    let (s3, c3) = (2.0 * c * k.k2).sin_cos();
    let f = 3.0 + 4.0 * c1 * c2 + 2.0 * c3;
    let grad = [-6.0 * s1 * c2, -4.0 * c * c1 * s2 - 4.0 * c * s3];
    let h12 = 6.0 * c * s1 * s2;
    let hess = [[-9.0 * c1 * c2, h12], [h12, -4.0 * c * c * c1 * c2 - 8.0 * c * c * c3]];
    (f, grad, hess)
}

/// `(E_+, E_-) = ±t√f − t'(f − 3)`, eV.
pub fn band_energies(k: KPoint, lp: &LatticeParams) -> (f64, f64) {
    let g = HoneycombGeometry::default().hopping_sum(k);
    let root = g.norm();
    let shift = -lp.t_prime * (root * root - 3.0);
    (lp.t * root + shift, -lp.t * root + shift)
}

/// Band `s` relative to the second-order expansion about the Dirac point of
/// `valley`, at displacement `k_small` (units `1/a`). The residual is `O(|k|^3)`.
pub fn expansion_check(k_small: KPoint, s: i8, valley: Valley, lp: &LatticeParams) -> Result<f64> {
    let sign = branch(s)?;
    let geom = HoneycombGeometry::default();
    let (e_plus, e_minus) = band_energies(geom.dirac_point(valley) + k_small, lp);
    let exact = if sign > 0.0 { e_plus } else { e_minus };
    Ok(exact - expansion(k_small, sign, valley, lp))
}

/// `s t[(3/2)|k| − (3/8)k² sin3θ] + t'[3 − (9/4)k²]`, with `θ → −θ` at `K'`.
pub fn expansion(k_small: KPoint, s: f64, valley: Valley, lp: &LatticeParams) -> f64 {
    let r = k_small.norm();
    let theta = match valley {
        Valley::K => k_small.theta(),
        Valley::KPrime => -k_small.theta(),
    };
    s * lp.t * (1.5 * r - 0.375 * r * r * (3.0 * theta).sin()) + lp.t_prime * (3.0 - 2.25 * r * r)
}

fn branch(s: i8) -> Result<f64> {
    match s {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::invalid(format!("branch index must be ±1, got {s}"))),
    }
}

/// Locate the zero of `f` nearest `guess` by a coarse grid search in a
/// window of half-width `radius` followed by Newton iteration on `∇f`.
pub fn find_dirac_point(guess: KPoint, radius: f64) -> Result<KPoint> {
    let steps = 40;
    let mut best = guess;
    let mut best_f = f64::INFINITY;
    for i in 0..=steps {
        for j in 0..=steps {
            let k = KPoint::new(
                guess.k1 + radius * (2.0 * i as f64 / steps as f64 - 1.0),
                guess.k2 + radius * (2.0 * j as f64 / steps as f64 - 1.0),
            );
            let f = structure_factor_cosine(k).0;
            if f < best_f {
                best_f = f;
                best = k;
            }
        }
    }
    let mut k = best;
    for _ in 0..50 {
        let (_, g, h) = structure_factor_cosine(k);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::numerical("singular Hessian while locating Dirac point"));
        }
        let d1 = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let d2 = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
        k = KPoint::new(k.k1 - d1, k.k2 - d2);
        if d1.hypot(d2) < 1e-15 {
            return Ok(k);
        }
    }
    if structure_factor_cosine(k).1.iter().all(|g| g.abs() < 1e-13) {
        Ok(k)
    } else {
        Err(Error::numerical("Newton iteration for the Dirac point did not converge"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandRow {
    pub k: KPoint,
    pub e_plus: f64,
    pub e_minus: f64,
}

pub fn scan_bands(path: &[KPoint], lp: &LatticeParams) -> Vec<BandRow> {
    path.par_iter()
        .map(|&k| {
            let (e_plus, e_minus) = band_energies(k, lp);
            BandRow { k, e_plus, e_minus }
        })
        .collect()
}

/// Straight segments through `corners`, `per_segment` points each, ending
/// exactly on the last corner.
pub fn polyline(corners: &[KPoint], per_segment: usize) -> Vec<KPoint> {
    let mut out = Vec::new();
    for pair in corners.windows(2) {
        for i in 0..per_segment {
            let t = i as f64 / per_segment as f64;
            out.push(KPoint::new(
                pair[0].k1 + t * (pair[1].k1 - pair[0].k1),
                pair[0].k2 + t * (pair[1].k2 - pair[0].k2),
            ));
        }
    }
    if let Some(last) = corners.last() {
        out.push(*last);
    }
    out
}

/// `Γ → K → M → Γ`.
pub fn high_symmetry_path(per_segment: usize) -> Vec<KPoint> {
    let g = HoneycombGeometry::default();
    polyline(&[KPoint::new(0.0, 0.0), g.k, g.m_point(), KPoint::new(0.0, 0.0)], per_segment)
}
