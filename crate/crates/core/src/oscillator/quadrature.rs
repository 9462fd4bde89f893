use num_complex::Complex64;

use super::hermite::normalized_hermite_polys;
use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;

/// Gauss-Hermite rule for the weight `exp(-q^2)`.
///
/// [`QuadratureRule::integrate`] evaluates `Σ w_i f(q_i) ≈ ∫ exp(-q^2) f(q) dq`:
/// the Gaussian lives in the weights and `f` is the remaining factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `order`-point rule, exact for polynomials of degree `<= 2 order - 1`.
    ///
    /// Nodes are the eigenvalues of the Jacobi matrix (Golub-Welsch), polished
    /// by Newton steps on the orthonormal recurrence; weights come from the
    /// Christoffel function `1 / Σ_k h_k(q_i)^2`.
    pub fn gauss_hermite(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("quadrature order must be >= 1"));
        }
        let diag = vec![0.0; order];
        let off: Vec<f64> = (1..order).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let (mut nodes, _) = tridiagonal_eigen(&diag, &off)?;

        let n = order;
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let h = normalized_hermite_polys(n, *x);
                let deriv = (2.0 * n as f64).sqrt() * h[n - 1];
                if deriv == 0.0 {
                    break;
                }
                let step = h[n] / deriv;
                *x -= step;
                if step.abs() < 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
        }
        // exact symmetry of the rule
        for i in 0..n / 2 {
            let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -m;
            nodes[n - 1 - i] = m;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let weights = nodes
            .iter()
            .map(|&x| {
                let h = normalized_hermite_polys(n - 1, x);
                1.0 / h.iter().map(|v| v * v).sum::<f64>()
            })
            .collect();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `Σ w_i f(q_i)`; the weights already carry `exp(-q^2)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::numerical(format!("integrand is not finite at node {x}")));
            }
            sum += w * v;
        }
        Ok(sum)
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::numerical(format!("integrand is not finite at node {x}")));
            }
            sum += v * w;
        }
        Ok(sum)
    }
}
