//! Conserved charge and current densities of Landau-gauge states.
//!
//! For `ψ = exp(i k x2) Φ(q)`, `q = x1 − k`, in units `eB = v_F = 1`:
//!
//! `j0 = Φ†Φ`, `j1 = Im(Φ†Φ')/z + Φ†σ1Φ`, `j2 = −q Φ†Φ/z + Φ†σ2Φ`.

use num_complex::Complex64;
use serde::Serialize;

use super::states::SpinorState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurrentSample {
    pub q: f64,
    pub j0: f64,
    pub j1: f64,
    pub j2: f64,
}

/// `n` equally spaced points covering `[center − half_width, center + half_width]`.
pub fn uniform_grid(center: f64, half_width: f64, n: usize) -> Result<Vec<f64>> {
    if n < 3 || !(half_width > 0.0) {
        return Err(Error::invalid("grid needs at least 3 points and a positive width"));
    }
    let h = 2.0 * half_width / (n - 1) as f64;
    Ok((0..n).map(|i| center - half_width + h * i as f64).collect())
}

fn grid_spacing(grid: &[f64], center: f64) -> Result<f64> {
    if grid.len() < 3 {
        return Err(Error::invalid("grid needs at least 3 points"));
    }
    let h = grid[1] - grid[0];
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if !(h > 0.0) || !uniform {
        return Err(Error::invalid("grid must be uniform and increasing"));
    }
    if grid[0] > center - 8.0 || grid[grid.len() - 1] < center + 8.0 {
        return Err(Error::invalid("grid must span the orbit center ± 8 l_B"));
    }
    Ok(h)
}

/// Superposition `Σ_a c_a exp(−i E_a t) ψ_a` at a common `k`.
#[derive(Debug, Clone)]
pub struct Superposition {
    pub terms: Vec<(Complex64, SpinorState)>,
}

impl Superposition {
    pub fn new(terms: Vec<(Complex64, SpinorState)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::invalid("empty superposition"))?;
        let (k, z) = (first.1.k, first.1.z);
        if terms.iter().any(|(_, s)| s.k != k || s.z != z) {
            return Err(Error::invalid("superposed states must share k and z"));
        }
        Ok(Self { terms })
    }

    pub fn stationary(state: SpinorState) -> Self {
        Self { terms: vec![(Complex64::new(1.0, 0.0), state)] }
    }

    fn z(&self) -> f64 {
        self.terms[0].1.z
    }

    pub fn center(&self) -> f64 {
        self.terms[0].1.center
    }

    /// `Φ`, `Φ'` and `∂_t Φ` at `t = 0`.
    fn eval(&self, q: f64) -> [[Complex64; 2]; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let mut out = [[zero; 2]; 3];
        for (c, st) in &self.terms {
            let (v, d) = st.eval_with_derivative(q);
            let dt = Complex64::new(0.0, -st.energy) * c;
            for spin in 0..2 {
                out[0][spin] += c * v[spin];
                out[1][spin] += c * d[spin];
                out[2][spin] += dt * v[spin];
            }
        }
        out
    }

    pub fn sample(&self, q: f64) -> CurrentSample {
        let [phi, dphi, _] = self.eval(q);
        densities(q, &phi, &dphi, self.z())
    }

    /// `∂_t j0 = 2 Re(Φ† ∂_t Φ)` at `t = 0`.
    pub fn density_rate(&self, q: f64) -> f64 {
        let [phi, _, dt] = self.eval(q);
        2.0 * (phi[0].conj() * dt[0] + phi[1].conj() * dt[1]).re
    }
}

fn densities(q: f64, phi: &[Complex64; 2], dphi: &[Complex64; 2], z: f64) -> CurrentSample {
    let j0 = phi[0].norm_sqr() + phi[1].norm_sqr();
    let im_grad = (phi[0].conj() * dphi[0] + phi[1].conj() * dphi[1]).im;
    let cross = phi[0].conj() * phi[1];
    // Φ†σ1Φ = 2 Re(u* l), Φ†σ2Φ = 2 Im(u* l)
    let s1 = 2.0 * cross.re;
    let s2 = 2.0 * cross.im;
    CurrentSample { q, j0, j1: im_grad / z + s1, j2: -q * j0 / z + s2 }
}

/// Densities of a stationary state on `grid` (`q` relative to its center).
pub fn current_density(state: &SpinorState, grid: &[f64]) -> Result<Vec<CurrentSample>> {
    grid_spacing(grid, 0.0)?;
    let sup = Superposition::stationary(state.clone());
    Ok(grid.iter().map(|&q| sup.sample(q)).collect())
}

/// Largest `|∂_t j0 + ∂_1 j1|` on the interior of `grid`, with `∂_1 j1` by
/// second-order central differences. Nothing depends on `x2`.
pub fn continuity_residual(psi: &Superposition, grid: &[f64]) -> Result<f64> {
    let h = grid_spacing(grid, 0.0)?;
    let samples: Vec<CurrentSample> = grid.iter().map(|&q| psi.sample(q)).collect();
    let mut worst = 0.0f64;
    for i in 1..grid.len() - 1 {
        let div = (samples[i + 1].j1 - samples[i - 1].j1) / (2.0 * h);
        worst = worst.max((psi.density_rate(grid[i]) + div).abs());
    }
    Ok(worst)
}

/// Trapezoid `∫ j0 dq`.
pub fn total_charge(samples: &[CurrentSample]) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].q - w[0].q) * (w[0].j0 + w[1].j0))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::states::{eigenstate, zero_mode_state};

    #[test]
    fn unit_charge() {
        let grid = uniform_grid(0.0, 10.0, 801).unwrap();
        for (n, s) in [(0usize, 1i8), (4, -1), (9, 1)] {
            let st = eigenstate(n, s, 0.2, -2.0).unwrap();
            let q = current_density(&st, &grid).unwrap();
            assert!((total_charge(&q) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mode_density_is_a_gaussian() {
        let grid = uniform_grid(0.0, 9.0, 181).unwrap();
        let st = zero_mode_state(0.0, 3.0).unwrap();
        for smp in current_density(&st, &grid).unwrap() {
            let expect = (-smp.q * smp.q).exp() / std::f64::consts::PI.sqrt();
            assert!((smp.j0 - expect).abs() < 1e-15);
            assert_eq!(smp.j1, 0.0);
        }
    }

    #[test]
    fn stationary_states_are_divergence_free() {
        let grid = uniform_grid(0.0, 9.0, 361).unwrap();
        for n in 0..5 {
            let st = eigenstate(n, 1, 0.0, 1.5).unwrap();
            let r = continuity_residual(&Superposition::stationary(st), &grid).unwrap();
            assert!(r < 1e-13, "n={n} r={r}");
        }
    }

    #[test]
    fn superposition_conserves_charge_at_second_order() {
        let z = 1.5;
        let sup = Superposition::new(vec![
            (Complex64::new(0.8, 0.0), zero_mode_state(0.0, z).unwrap()),
            (Complex64::new(0.3, 0.5), eigenstate(2, -1, 0.0, z).unwrap()),
            (Complex64::new(0.0, 0.2), eigenstate(1, 1, 0.0, z).unwrap()),
        ])
        .unwrap();
        let coarse = continuity_residual(&sup, &uniform_grid(0.0, 9.0, 181).unwrap()).unwrap();
        let fine = continuity_residual(&sup, &uniform_grid(0.0, 9.0, 361).unwrap()).unwrap();
        let ratio = coarse / fine;
        assert!(coarse > 1e-6, "the residual should be a genuine discretization error");
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn grid_preconditions() {
        let st = eigenstate(0, 1, 0.0, 1.0).unwrap();
        assert!(current_density(&st, &uniform_grid(0.0, 5.0, 101).unwrap()).is_err());
        assert!(current_density(&st, &[-9.0, 0.0, 0.5, 9.0]).is_err());
        let other_k = eigenstate(0, 1, 1.0, 1.0).unwrap();
        assert!(Superposition::new(vec![(Complex64::new(1.0, 0.0), st), (Complex64::new(1.0, 0.0), other_k)]).is_err());
    }
}
