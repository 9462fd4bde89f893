use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landau::{free_dispersion, SpinorState};
use crate::lattice::KPoint;
use crate::linalg::{eigh, eigvalsh, inner, norm, CMatrix};
use crate::oscillator::{
    build_landau_operator, hermite_functions_normalized, interior_eigenpairs, momentum, pauli, position, QuadratureRule,
    Spin,
};
use crate::units::LatticeParams;

/// One factor of `𝔥 = ε q [3p² − q²] [p² + q²]⁻¹ [pσ1 − qσ2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Factor {
    Position,
    /// `4p² − (p² + q²)`.
    Bracket,
    /// `(p² + q²)⁻¹`, diagonal `1/(2n+1)` on the oscillator basis.
    Inverse,
    /// `pσ1 − qσ2`.
    Spinor,
}

impl Factor {
    fn symbol(self) -> &'static str {
        match self {
            Factor::Position => "q",
            Factor::Bracket => "B",
            Factor::Inverse => "I",
            Factor::Spinor => "S",
        }
    }

    /// Bandwidth in the oscillator index.
    fn reach(self) -> usize {
        match self {
            Factor::Position | Factor::Spinor => 1,
            Factor::Bracket => 2,
            Factor::Inverse => 0,
        }
    }
}

/// Left-to-right product order of the four factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FactorOrder([Factor; 4]);

const ALL_FACTORS: [Factor; 4] = [Factor::Position, Factor::Bracket, Factor::Inverse, Factor::Spinor];

impl FactorOrder {
    pub fn new(factors: [Factor; 4]) -> Result<Self> {
        for f in ALL_FACTORS {
            if !factors.contains(&f) {
                return Err(Error::invalid(format!("factor order {factors:?} is not a permutation")));
            }
        }
        Ok(Self(factors))
    }

    /// `q · B · I · S`, as written for the Landau gauge.
    pub fn paper() -> Self {
        Self(ALL_FACTORS)
    }

    /// All 24 permutations, [`FactorOrder::paper`] first.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut seen = [false; 4];
                        idx.iter().for_each(|&i| seen[i] = true);
                        if seen.iter().all(|&s| s) {
                            out.push(Self(idx.map(|i| ALL_FACTORS[i])));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn factors(&self) -> [Factor; 4] {
        self.0
    }

    pub fn label(&self) -> String {
        self.0.iter().map(|f| f.symbol()).collect::<Vec<_>>().join(".")
    }

    fn reach(&self) -> usize {
        self.0.iter().map(|f| f.reach()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationSpec {
    /// `−(a/8) v_F sqrt(eB)` in units of `eps_B`, i.e. `−a / 8 l_B`.
    pub strength: f64,
    pub order: FactorOrder,
}

impl PerturbationSpec {
    pub fn new(strength: f64, order: FactorOrder) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::invalid("perturbation strength must be finite"));
        }
        Ok(Self { strength, order })
    }

    pub fn from_lattice(a_m: f64, l_b_m: f64, order: FactorOrder) -> Result<Self> {
        if !(a_m > 0.0 && l_b_m > 0.0) {
            return Err(Error::invalid("lattice constant and magnetic length must be > 0"));
        }
        Self::new(-a_m / (8.0 * l_b_m), order)
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `−(3/8) t k₂(4k₁² − k²)/k² σ·k` with `k` in units of `1/a`.
fn free_operator(k: KPoint, lp: &LatticeParams) -> Result<CMatrix> {
    let k2 = k.k1 * k.k1 + k.k2 * k.k2;
    if k2 == 0.0 {
        return Err(Error::domain("the free perturbation needs (p²)⁻¹ and is undefined at k = 0"));
    }
    // v_F = (3/2) a t
    let prefactor = -0.25 * 1.5 * lp.t * k.k2 * (4.0 * k.k1 * k.k1 - k2) / k2;
    Ok(&pauli(Spin::X).scale_real(prefactor * k.k1) + &pauli(Spin::Y).scale_real(prefactor * k.k2))
}

/// `−s (3/8) t k² sin 3θ`, with `k` in units of `1/a`.
pub fn free_perturbation_shift(k: KPoint, s: i8, lp: &LatticeParams) -> Result<f64> {
    if s != 1 && s != -1 {
        return Err(Error::invalid(format!("helicity must be ±1, got {s}")));
    }
    if k.norm() == 0.0 {
        return Err(Error::domain("the free perturbation is undefined at k = 0"));
    }
    Ok(-(s as f64) * 0.375 * lp.t * k.norm().powi(2) * (3.0 * k.theta()).sin())
}

/// `|ΔH χ_s − shift χ_s|` for the helicity spinor `χ_s` at `k`.
pub fn free_perturbation_check(k: KPoint, s: i8, lp: &LatticeParams) -> Result<f64> {
    let shift = free_perturbation_shift(k, s, lp)?;
    let op = free_operator(k, lp)?;
    let modes = free_dispersion([k.k1, k.k2], f64::INFINITY, 1.0);
    let chi = modes[if s > 0 { 0 } else { 1 }].helicity_spinor;
    let applied = op.mul_vec(&chi);
    Ok(applied.iter().zip(&chi).map(|(a, x)| (a - x * shift).norm_sqr()).sum::<f64>().sqrt())
}

fn spinor_factor(f: Factor, n_max: usize) -> CMatrix {
    let id = pauli(Spin::Identity);
    let q = position(n_max);
    let p = momentum(n_max);
    match f {
        Factor::Position => q.kron(&id),
        Factor::Bracket => (&(&p * &p).scale_real(3.0) - &(&q * &q)).kron(&id),
        Factor::Inverse => {
            CMatrix::from_fn(n_max + 1, n_max + 1, |i, j| if i == j { c(1.0 / (2.0 * i as f64 + 1.0)) } else { c(0.0) })
                .kron(&id)
        }
        Factor::Spinor => &p.kron(&pauli(Spin::X)) - &q.kron(&pauli(Spin::Y)),
    }
}

/// `𝔥 / ε` on orbitals `0..=n_max`, exact in that block.
fn unit_h(order: FactorOrder, n_max: usize) -> CMatrix {
    // the truncated p² is wrong only in its last diagonal entry
    let big = n_max + order.reach() + 2;
    let mut product = CMatrix::identity(2 * (big + 1));
    for f in order.factors() {
        product = &product * &spinor_factor(f, big);
    }
    product.leading_block(2 * (n_max + 1))
}

/// `ΔH = 𝔥 + 𝔥†` on orbitals `0..=n_max`.
pub fn perturbation_matrix(spec: &PerturbationSpec, n_max: usize) -> CMatrix {
    let h = unit_h(spec.order, n_max).scale_real(spec.strength);
    &h + &h.adjoint()
}

/// `𝔥 ψ` as a coefficient vector (index `2n + spin`) on orbitals up to
/// `max_orbital + 4`, which holds it exactly.
pub fn apply_h(spec: &PerturbationSpec, state: &SpinorState) -> Result<Vec<Complex64>> {
    let n_max = state.max_orbital() + spec.order.reach();
    let h = unit_h(spec.order, n_max).scale_real(spec.strength);
    Ok(h.mul_vec(&state.to_vector(n_max)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixElement {
    /// `<bra|ΔH|ket>` by Gauss-Hermite quadrature.
    pub value: Complex64,
    /// The same element from the coefficient vectors.
    pub basis_value: Complex64,
    /// `max(|ΔH ket|, |ε|)`, the size the element is measured against.
    pub natural_scale: f64,
    pub quadrature_order: usize,
}

fn eval_vector(v: &[Complex64], q: f64) -> [Complex64; 2] {
    let phi = hermite_functions_normalized(v.len() / 2 - 1, q);
    let mut out = [c(0.0); 2];
    for (i, x) in v.iter().enumerate() {
        out[i % 2] += x * phi[i / 2];
    }
    out
}

fn quadrature_element(bra: &[Complex64], ket: &[Complex64], order: usize) -> Result<Complex64> {
    let rule = QuadratureRule::gauss_hermite(order)?;
    rule.integrate_complex(|q| {
        let (a, b) = (eval_vector(bra, q), eval_vector(ket, q));
        // the rule carries exp(−q²); the Hermite functions carry it too
        (a[0].conj() * b[0] + a[1].conj() * b[1]) * (q * q).exp()
    })
}

/// `<bra|ΔH|ket>`. Both states must share `k`.
pub fn landau_matrix_element(bra: &SpinorState, ket: &SpinorState, spec: &PerturbationSpec) -> Result<MatrixElement> {
    if bra.k != ket.k || bra.z != ket.z {
        return Err(Error::invalid("matrix elements need states at the same k and z"));
    }
    let top = bra.max_orbital().max(ket.max_orbital());
    let n_max = top + spec.order.reach();
    let applied = perturbation_matrix(spec, n_max).mul_vec(&ket.to_vector(n_max)?);
    let bra_vec = bra.to_vector(n_max)?;
    let basis_value = inner(&bra_vec, &applied);
    let natural_scale = norm(&applied).max(spec.strength.abs());

    let order = 2 * (top + 3);
    let coarse = quadrature_element(&bra_vec, &applied, order)?;
    let fine = quadrature_element(&bra_vec, &applied, 2 * order)?;
    if (coarse - fine).norm() > 1e-12 * natural_scale {
        return Err(Error::numerical(format!(
            "quadrature of order {order} is under-resolved: {coarse} vs {fine}"
        )));
    }
    Ok(MatrixElement { value: fine, basis_value, natural_scale, quadrature_order: 2 * order })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftSample {
    pub epsilon: f64,
    /// Largest eigenvalue change among the converged levels, in `eps_B`.
    pub max_shift: f64,
}

/// Eigenvalue changes of `H + ε ΔH/|ε|` against `H` from dense
/// diagonalization on orbitals `0..=n_max`, one sample per `ε`.
pub fn second_order_shifts(z: f64, order: FactorOrder, n_max: usize, epsilons: &[f64]) -> Result<Vec<ShiftSample>> {
    let op = build_landau_operator(z, n_max, 1)?;
    let unperturbed = eigh(&op.matrix)?;
    let levels = interior_eigenpairs(op.basis, &unperturbed, 2, 1e-12);
    if levels.is_empty() {
        return Err(Error::numerical("no converged levels in the truncated basis"));
    }
    let unit = perturbation_matrix(&PerturbationSpec::new(1.0, order)?, n_max);
    epsilons
        .iter()
        .map(|&epsilon| {
            // the oracle matrix is 2zH
            let total = &op.matrix + &unit.scale_real(2.0 * z * epsilon);
            let values = eigvalsh(&total)?;
            let max_shift = levels
                .iter()
                .map(|&j| ((values[j] - unperturbed.values[j]) / (2.0 * z)).abs())
                .fold(0.0, f64::max);
            Ok(ShiftSample { epsilon, max_shift })
        })
        .collect()
}

/// Least-squares slope of `log max_shift` against `log ε`.
pub fn fit_exponent(samples: &[ShiftSample]) -> Result<f64> {
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.epsilon > 0.0 && s.max_shift > 0.0)
        .map(|s| (s.epsilon.ln(), s.max_shift.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::numerical("need two positive samples to fit an exponent"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::{eigenstate, level_energy, zero_mode_state};
    use crate::lattice::{expansion, Valley};
    use crate::oscillator::number_operator;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lattice() -> LatticeParams {
        LatticeParams::new(1.0, 2.8, 0.0).unwrap()
    }

    #[test]
    fn orderings_are_all_permutations() {
        let all = FactorOrder::all();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], FactorOrder::paper());
        let labels: std::collections::HashSet<String> = all.iter().map(|o| o.label()).collect();
        assert_eq!(labels.len(), 24);
        assert!(FactorOrder::new([Factor::Position; 4]).is_err());
    }

    #[test]
    fn free_shift_examples() {
        let lp = lattice();
        let along_x = KPoint::polar(0.1, 0.0);
        assert!(free_perturbation_shift(along_x, 1, &lp).unwrap().abs() < 1e-18);
        let k = 0.05;
        let got = free_perturbation_shift(KPoint::polar(k, std::f64::consts::PI / 6.0), 1, &lp).unwrap();
        assert!((got + 0.375 * lp.t * k * k).abs() < 1e-15);
        assert!(free_perturbation_check(KPoint::new(0.0, 0.0), 1, &lp).is_err());
    }

    #[test]
    fn free_shift_matches_lattice_quadratic_term() {
        let lp = lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let k = KPoint::polar(rng.gen_range(1e-3..0.2), rng.gen_range(-3.2..3.2));
            let s: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
            assert!(free_perturbation_check(k, s, &lp).unwrap() < 1e-14);
            let quadratic = expansion(k, s as f64, Valley::K, &lp) - s as f64 * lp.t * 1.5 * k.norm();
            let shift = free_perturbation_shift(k, s, &lp).unwrap();
            assert!((quadratic - shift).abs() < 1e-14, "k={k:?} s={s}");
        }
    }

    #[test]
    fn padding_makes_blocks_exact() {
        for order in FactorOrder::all() {
            let small = unit_h(order, 8);
            let big = unit_h(order, 14).leading_block(small.rows());
            assert!(small.max_abs_diff(&big) < 1e-12, "{}", order.label());
        }
    }

    #[test]
    fn spinor_factor_acts_as_energy_minus_kinetic() {
        // (pσ1 − qσ2)ψ = (E − (p² + q²)/2z)ψ
        for z in [-1e3, -1.3, 0.4] {
            for (n, s) in [(0, 1), (3, -1), (7, 1)] {
                let st = eigenstate(n, s, 0.0, z).unwrap();
                let n_max = n + 3;
                let v = st.to_vector(n_max).unwrap();
                let lhs = spinor_factor(Factor::Spinor, n_max).mul_vec(&v);
                let kin = number_operator(n_max).kron(&pauli(Spin::Identity)).mul_vec(&v);
                let e = level_energy(n, s, z).unwrap();
                let err: f64 =
                    lhs.iter().zip(&v).zip(&kin).map(|((l, x), k)| (l - (x * e - k / (2.0 * z))).norm()).sum();
                assert!(err < 1e-10 * (1.0 + e.abs()), "z={z} n={n} s={s} err={err}");
            }
        }
    }

    #[test]
    fn zero_mode_is_annihilated() {
        let psi0 = zero_mode_state(0.0, -50.0).unwrap();
        let spec = PerturbationSpec::new(-0.3, FactorOrder::paper()).unwrap();
        let hv = apply_h(&spec, &psi0).unwrap();
        assert!(hv.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn diagonal_elements_vanish_for_every_order() {
        let z = -1e3;
        for order in FactorOrder::all() {
            let spec = PerturbationSpec::new(1.0, order).unwrap();
            for n in [0, 4, 10] {
                for s in [1, -1] {
                    let st = eigenstate(n, s, 0.3, z).unwrap();
                    let me = landau_matrix_element(&st, &st, &spec).unwrap();
                    assert!(me.value.norm() < 1e-12 * me.natural_scale, "{} n={n} s={s}", order.label());
                    assert!(me.basis_value.norm() < 1e-12 * me.natural_scale);
                }
            }
        }
    }

    #[test]
    fn integrand_is_odd() {
        let spec = PerturbationSpec::new(1.0, FactorOrder::paper()).unwrap();
        let st = eigenstate(3, -1, 0.0, 2.0).unwrap();
        let n_max = st.max_orbital() + 4;
        let ket = perturbation_matrix(&spec, n_max).mul_vec(&st.to_vector(n_max).unwrap());
        let bra = st.to_vector(n_max).unwrap();
        for q in [0.1, 0.7, 1.9, 3.3] {
            let f = |q: f64| {
                let (a, b) = (eval_vector(&bra, q), eval_vector(&ket, q));
                a[0].conj() * b[0] + a[1].conj() * b[1]
            };
            assert!((f(q) + f(-q)).norm() < 1e-13);
        }
    }

    #[test]
    fn off_diagonal_elements_agree_and_do_not_vanish() {
        let spec = PerturbationSpec::new(1.0, FactorOrder::paper()).unwrap();
        let a = eigenstate(2, 1, 0.0, 0.8).unwrap();
        let b = eigenstate(3, -1, 0.0, 0.8).unwrap();
        let ab = landau_matrix_element(&a, &b, &spec).unwrap();
        let ba = landau_matrix_element(&b, &a, &spec).unwrap();
        assert!(ab.value.norm() > 1e-3);
        assert!((ab.value - ab.basis_value).norm() < 1e-12 * ab.natural_scale);
        assert!((ab.value - ba.value.conj()).norm() < 1e-12 * ab.natural_scale);
        assert!(landau_matrix_element(&a, &eigenstate(3, -1, 1.0, 0.8).unwrap(), &spec).is_err());
    }

    #[test]
    fn perturbation_is_hermitian_over_eigenstates() {
        let spec = PerturbationSpec::new(1.0, FactorOrder::all()[13]).unwrap();
        let z = 1.7;
        let states: Vec<SpinorState> =
            (0..=6).flat_map(|n| [1, -1].map(|s| eigenstate(n, s, 0.0, z).unwrap())).collect();
        for a in &states {
            for b in &states {
                let ab = landau_matrix_element(a, b, &spec).unwrap().value;
                let ba = landau_matrix_element(b, a, &spec).unwrap().value;
                assert!((ab - ba.conj()).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn shifts_are_second_order() {
        for order in [FactorOrder::paper(), FactorOrder::all()[17]] {
            let samples = second_order_shifts(0.37, order, 30, &[1e-3, 1e-4, 1e-5]).unwrap();
            let p = fit_exponent(&samples).unwrap();
            assert!((p - 2.0).abs() < 0.1, "{} exponent {p} {samples:?}", order.label());
        }
    }

    proptest! {
        #[test]
        fn free_residual_is_roundoff(r in 1e-4f64..0.5, theta in -3.2f64..3.2, up in any::<bool>()) {
            let s = if up { 1 } else { -1 };
            prop_assert!(free_perturbation_check(KPoint::polar(r, theta), s, &lattice()).unwrap() < 1e-14);
        }
    }
}
