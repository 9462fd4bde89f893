use num_complex::Complex64;
use serde::Serialize;

use super::spectrum::{branch_sign, level_energy, root_and_excess, zero_mode_energy, LevelKind};
use crate::error::{Error, Result};
use crate::lattice::Valley;
use crate::oscillator::{hermite_functions_normalized_with_derivative, QuadratureRule};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `c · φ̂_orbital(q)` in spinor slot `spin` (0 upper, 1 lower).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component {
    pub orbital: usize,
    pub spin: usize,
    pub coefficient: Complex64,
}

/// Landau-gauge eigenstate `exp(i k x2) Φ(q)` with `q = x1 − center`,
/// expanded on orthonormal Hermite functions `φ̂_n`. Lengths in `l_B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinorState {
    pub kind: LevelKind,
    pub valley: Valley,
    pub z: f64,
    pub k: f64,
    pub center: f64,
    pub energy: f64,
    /// Normalization `K_{n,s}` of the same state written on the unnormalized
    /// functions `exp(-q²/2) H_n(q)`; `0` once it underflows.
    pub k_norm: f64,
    pub components: Vec<Component>,
}

impl SpinorState {
    fn coefficient(&self, spin: usize) -> Complex64 {
        self.components
            .iter()
            .filter(|c| c.spin == spin)
            .map(|c| c.coefficient)
            .sum()
    }

    pub fn c_upper(&self) -> Complex64 {
        self.coefficient(0)
    }

    pub fn c_lower(&self) -> Complex64 {
        self.coefficient(1)
    }

    pub fn max_orbital(&self) -> usize {
        self.components.iter().map(|c| c.orbital).max().unwrap_or(0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.coefficient.norm_sqr()).sum()
    }

    /// Coefficient ratio lower/upper on the unnormalized Hermite functions,
    /// `(i/2z)[1 − s sqrt(1 + 8z²(n+1))]` for a `K`-valley pair state.
    pub fn paper_ratio(&self) -> Option<Complex64> {
        let n = self.kind.n()?;
        if self.valley != Valley::K {
            return None;
        }
        let ratio = self.c_lower() / self.c_upper();
        // φ_n = sqrt(2^n n! sqrt(pi)) φ̂_n
        Some(ratio * (2.0 * (n as f64 + 1.0)).sqrt())
    }

    /// Coefficient vector in the oscillator ⊗ spinor basis (index `2n + spin`).
    pub fn to_vector(&self, n_max: usize) -> Result<Vec<Complex64>> {
        if self.max_orbital() > n_max {
            return Err(Error::invalid(format!(
                "state needs orbital {} but basis stops at {n_max}",
                self.max_orbital()
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); 2 * (n_max + 1)];
        for c in &self.components {
            v[2 * c.orbital + c.spin] += c.coefficient;
        }
        Ok(v)
    }

    /// `Φ(q)` and `Φ'(q)`, `q` measured from the orbit center.
    pub fn eval_with_derivative(&self, q: f64) -> ([Complex64; 2], [Complex64; 2]) {
        let (phi, dphi) = hermite_functions_normalized_with_derivative(self.max_orbital(), q);
        let mut val = [Complex64::new(0.0, 0.0); 2];
        let mut der = val;
        for c in &self.components {
            val[c.spin] += c.coefficient * phi[c.orbital];
            der[c.spin] += c.coefficient * dphi[c.orbital];
        }
        (val, der)
    }

    pub fn eval(&self, q: f64) -> [Complex64; 2] {
        self.eval_with_derivative(q).0
    }

    /// Exchange of the spinor components: the eigenstate for `eB < 0`.
    pub fn swap_spin(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.components {
            c.spin = 1 - c.spin;
        }
        out
    }

    /// `σ2 ψ`, the partner state in the other valley (energy negated).
    pub fn sigma2_partner(&self) -> Self {
        let mut out = self.swap_spin();
        for c in &mut out.components {
            // σ2 (u, l) = (−i l, i u); after the swap `spin` is the new slot
            c.coefficient *= if c.spin == 0 { -I } else { I };
        }
        out.valley = match self.valley {
            Valley::K => Valley::KPrime,
            Valley::KPrime => Valley::K,
        };
        out.energy = -self.energy;
        out
    }
}

/// Paper normalization `K_{n,s}² = (R + s) / (2^{n+2} (n+1)! sqrt(pi) R)`.
pub fn paper_normalization(n: usize, s: i8, z: f64) -> Result<f64> {
    let sign = branch_sign(s)?;
    let (r, excess) = root_and_excess(n, z);
    let numerator = if sign > 0.0 { r + 1.0 } else { excess };
    let log_denominator = (n as f64 + 2.0) * std::f64::consts::LN_2
        + (1..=n + 1).map(|j| (j as f64).ln()).sum::<f64>()
        + 0.5 * std::f64::consts::PI.ln()
        + r.ln();
    Ok((0.5 * (numerator.ln() - log_denominator)).exp())
}

/// Normalized `K`-valley eigenstate `(α φ̂_{n+1}, β φ̂_n)` with
/// `α = sqrt((R+s)/2R) > 0` and `β = −i s sgn(z) sqrt((R−s)/2R)`.
pub fn eigenstate(n: usize, s: i8, k: f64, z: f64) -> Result<SpinorState> {
    let energy = level_energy(n, s, z)?;
    let sign = branch_sign(s)?;
    let (r, excess) = root_and_excess(n, z);
    let (plus, minus) = if sign > 0.0 { (r + 1.0, excess) } else { (excess, r + 1.0) };
    let alpha = (plus / (2.0 * r)).sqrt();
    let beta = -I * sign * z.signum() * (minus / (2.0 * r)).sqrt();
    Ok(SpinorState {
        kind: LevelKind::Pair { n, s },
        valley: Valley::K,
        z,
        k,
        center: k,
        energy,
        k_norm: paper_normalization(n, s, z)?,
        components: vec![
            Component { orbital: n + 1, spin: 0, coefficient: Complex64::new(alpha, 0.0) },
            Component { orbital: n, spin: 1, coefficient: beta },
        ],
    })
}

/// `(φ̂_0, 0)` at energy `1/(2z)`.
pub fn zero_mode_state(k: f64, z: f64) -> Result<SpinorState> {
    Ok(SpinorState {
        kind: LevelKind::ZeroMode,
        valley: Valley::K,
        z,
        k,
        center: k,
        energy: zero_mode_energy(z)?,
        k_norm: std::f64::consts::PI.powf(-0.25),
        components: vec![Component { orbital: 0, spin: 0, coefficient: Complex64::new(1.0, 0.0) }],
    })
}

pub fn valley_state(valley: Valley, kind: LevelKind, k: f64, z: f64) -> Result<SpinorState> {
    let state = match kind {
        LevelKind::ZeroMode => zero_mode_state(k, z)?,
        LevelKind::Pair { n, s } => eigenstate(n, s, k, z)?,
    };
    Ok(match valley {
        Valley::K => state,
        Valley::KPrime => state.sigma2_partner(),
    })
}

/// `<a|b>` from the coefficients, using orthonormality of `φ̂_n`. States at
/// different `k` are orthogonal in the plane-wave factor and are rejected.
pub fn overlap(a: &SpinorState, b: &SpinorState) -> Result<Complex64> {
    same_k(a, b)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for ca in &a.components {
        for cb in &b.components {
            if ca.orbital == cb.orbital && ca.spin == cb.spin {
                sum += ca.coefficient.conj() * cb.coefficient;
            }
        }
    }
    Ok(sum)
}

/// `∫ Φ_a† Φ_b dq` by Gauss-Hermite quadrature of sufficient order.
pub fn overlap_quadrature(a: &SpinorState, b: &SpinorState) -> Result<Complex64> {
    same_k(a, b)?;
    let order = a.max_orbital() + b.max_orbital() + 2;
    let rule = QuadratureRule::gauss_hermite(order)?;
    // the rule carries exp(-q²); undo the two exp(-q²/2) of the functions
    rule.integrate_complex(|q| {
        let (fa, fb) = (a.eval(q), b.eval(q));
        (fa[0].conj() * fb[0] + fa[1].conj() * fb[1]) * (q * q).exp()
    })
}

fn same_k(a: &SpinorState, b: &SpinorState) -> Result<()> {
    if a.k != b.k {
        return Err(Error::invalid("overlap of states at different k is a delta function"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm, CMatrix};
    use crate::oscillator::build_landau_operator;

    fn residual(state: &SpinorState, n_max: usize, sign_eb: i8) -> f64 {
        let op = build_landau_operator(state.z, n_max, sign_eb).unwrap();
        let v = state.to_vector(n_max).unwrap();
        let lambda = 2.0 * state.z * state.energy;
        let hv = op.matrix.mul_vec(&v);
        let r: Vec<Complex64> = hv.iter().zip(&v).map(|(h, x)| h - x * lambda).collect();
        norm(&r) / lambda.abs().max(1.0)
    }

    #[test]
    fn eigenstates_solve_the_oracle_operator() {
        for z in [0.1, 1.0, 10.0, -1e3] {
            for n in 0..=10 {
                for s in [1, -1] {
                    let st = eigenstate(n, s, 0.3, z).unwrap();
                    assert!(residual(&st, 20, 1) < 1e-12, "z={z} n={n} s={s}");
                    assert!(residual(&st.swap_spin(), 20, -1) < 1e-12);
                    assert!((st.norm_sqr() - 1.0).abs() < 1e-14);
                }
            }
            assert!(residual(&zero_mode_state(0.0, z).unwrap(), 20, 1) < 1e-14);
        }
    }

    #[test]
    fn coefficient_ratio_and_normalization_match_closed_form() {
        for z in [0.3, -2.0, 40.0] {
            for n in 0..6 {
                for s in [1i8, -1] {
                    let st = eigenstate(n, s, 0.0, z).unwrap();
                    let (r, _) = root_and_excess(n, z);
                    let expect = I / (2.0 * z) * (1.0 - s as f64 * r);
                    let got = st.paper_ratio().unwrap();
                    assert!((got - expect).norm() < 1e-12 * expect.norm().max(1.0), "z={z} n={n} s={s}");
                    // α = K sqrt(2^{n+1} (n+1)! sqrt(pi))
                    let fact: f64 = (1..=n + 1).map(|j| j as f64).product();
                    let scale = (2f64.powi(n as i32 + 1) * fact * std::f64::consts::PI.sqrt()).sqrt();
                    assert!((st.k_norm * scale - st.c_upper().re).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn large_z_ratio() {
        for n in 0..5 {
            for s in [1i8, -1] {
                let st = eigenstate(n, s, 0.0, 1e7).unwrap();
                let limit = -I * s as f64 * (2.0 * (n as f64 + 1.0)).sqrt();
                assert!((st.paper_ratio().unwrap() - limit).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn orthonormal_by_quadrature() {
        let z = -3.0;
        let mut states = vec![zero_mode_state(0.5, z).unwrap()];
        for n in 0..=15 {
            for s in [1, -1] {
                states.push(eigenstate(n, s, 0.5, z).unwrap());
            }
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let g = overlap_quadrature(a, b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).norm() < 1e-12, "i={i} j={j} g={g}");
                assert!((overlap(a, b).unwrap() - g).norm() < 1e-12);
            }
        }
        assert!(overlap(&states[0], &eigenstate(0, 1, 0.6, z).unwrap()).is_err());
    }

    #[test]
    fn completeness_on_truncated_block() {
        // zero mode and (n, ±) for n ≤ big span φ̂_0..φ̂_{big+1} up, φ̂_0..φ̂_big down
        let (z, big) = (1.7, 12);
        let dim = 2 * (big + 2);
        let mut proj = CMatrix::zeros(dim, dim);
        let mut states = vec![zero_mode_state(0.0, z).unwrap()];
        for n in 0..=big {
            for s in [1, -1] {
                states.push(eigenstate(n, s, 0.0, z).unwrap());
            }
        }
        for st in &states {
            let v = st.to_vector(big + 1).unwrap();
            for i in 0..dim {
                for j in 0..dim {
                    proj[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        let mut expect = CMatrix::identity(dim);
        expect[(dim - 1, dim - 1)] = Complex64::new(0.0, 0.0);
        assert!(proj.max_abs_diff(&expect) < 1e-10);
    }

    #[test]
    fn second_valley_states() {
        let z = -5.0;
        for n in 0..4 {
            for s in [1i8, -1] {
                let k = eigenstate(n, s, 0.0, z).unwrap();
                let kp = valley_state(Valley::KPrime, k.kind, 0.0, z).unwrap();
                assert_eq!(kp.energy, -k.energy);
                let op = build_landau_operator(z, 12, 1).unwrap();
                let s2 = CMatrix::identity(13).kron(&crate::oscillator::pauli(crate::oscillator::Spin::Y));
                let hk_prime = (&(&s2 * &op.matrix) * &s2).scale_real(-1.0);
                let v = kp.to_vector(12).unwrap();
                let hv = hk_prime.mul_vec(&v);
                let lambda = 2.0 * z * kp.energy;
                let err: f64 = hv.iter().zip(&v).map(|(h, x)| (h - x * lambda).norm()).fold(0.0, f64::max);
                assert!(err < 1e-11);
            }
        }
    }

    #[test]
    fn normalization_survives_high_levels() {
        let k = paper_normalization(400, 1, 2.0).unwrap();
        assert!(k.is_finite() && k >= 0.0);
        assert!(eigenstate(400, -1, 0.0, 2.0).unwrap().norm_sqr().is_finite());
    }
}
