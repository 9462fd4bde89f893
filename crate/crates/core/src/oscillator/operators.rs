use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianEigen};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Truncated annihilation operator on `n = 0..=n_max`: `a|n> = sqrt(n)|n-1>`.
pub fn annihilation(n_max: usize) -> CMatrix {
    let mut a = CMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = re((n as f64).sqrt());
    }
    a
}

pub fn creation(n_max: usize) -> CMatrix {
    annihilation(n_max).adjoint()
}

/// `q = (a + a†) / sqrt 2`.
pub fn position(n_max: usize) -> CMatrix {
    let a = annihilation(n_max);
    (&a + &a.adjoint()).scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

/// `p = (a - a†) / (i sqrt 2)`.
pub fn momentum(n_max: usize) -> CMatrix {
    let a = annihilation(n_max);
    (&a - &a.adjoint()).scale(-I * std::f64::consts::FRAC_1_SQRT_2)
}

/// Exact `p^2 + q^2 = 2 a†a + 1`, diagonal in the number basis.
pub fn number_operator(n_max: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n_max + 1, n_max + 1);
    for n in 0..=n_max {
        m[(n, n)] = re(2.0 * n as f64 + 1.0);
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Identity,
    X,
    Y,
    Z,
}

/// Pauli matrices (and the 2x2 identity).
pub fn pauli(which: Spin) -> CMatrix {
    let o = re(0.0);
    let l = re(1.0);
    match which {
        Spin::Identity => CMatrix::from_2x2([[l, o], [o, l]]),
        Spin::X => CMatrix::from_2x2([[o, l], [l, o]]),
        Spin::Y => CMatrix::from_2x2([[o, -I], [I, o]]),
        Spin::Z => CMatrix::from_2x2([[l, o], [o, -l]]),
    }
}

/// Which space an [`OperatorMatrix`] acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    /// Oscillator states `n = 0..=n_max`.
    Scalar { n_max: usize },
    /// Oscillator ⊗ pseudospin, index `2n + c` with `c = 0` upper, `1` lower.
    Spinor { n_max: usize },
}

impl BasisTag {
    pub fn dim(&self) -> usize {
        match *self {
            BasisTag::Scalar { n_max } => n_max + 1,
            BasisTag::Spinor { n_max } => 2 * (n_max + 1),
        }
    }

    pub fn n_max(&self) -> usize {
        match *self {
            BasisTag::Scalar { n_max } | BasisTag::Spinor { n_max } => n_max,
        }
    }

    /// Oscillator quantum number of a basis index.
    pub fn orbital(&self, index: usize) -> usize {
        match self {
            BasisTag::Scalar { .. } => index,
            BasisTag::Spinor { .. } => index / 2,
        }
    }
}

/// Dense operator on a truncated oscillator (or oscillator ⊗ spinor) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub basis: BasisTag,
    pub matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(basis: BasisTag, matrix: CMatrix) -> Result<Self> {
        if matrix.rows() != basis.dim() || matrix.cols() != basis.dim() {
            return Err(Error::invalid(format!(
                "matrix is {}x{} but basis has dimension {}",
                matrix.rows(),
                matrix.cols(),
                basis.dim()
            )));
        }
        Ok(Self { basis, matrix })
    }

    /// Lift `orbital ⊗ spin` into the spinor basis.
    pub fn spinor(orbital: &CMatrix, spin: &CMatrix) -> Self {
        let n_max = orbital.rows() - 1;
        Self { basis: BasisTag::Spinor { n_max }, matrix: orbital.kron(spin) }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.hermiticity_error() <= tol
    }

    /// Largest entrywise deviation from `other` over rows and columns whose
    /// oscillator index is below `n_max + 1 - edge_rows`.
    pub fn interior_diff(&self, other: &CMatrix, edge_rows: usize) -> f64 {
        let cut = self.basis.n_max() + 1 - edge_rows.min(self.basis.n_max() + 1);
        let mut err = 0.0f64;
        for i in 0..self.dim() {
            if self.basis.orbital(i) >= cut {
                continue;
            }
            for j in 0..self.dim() {
                if self.basis.orbital(j) >= cut {
                    continue;
                }
                err = err.max((self.matrix[(i, j)] - other[(i, j)]).norm());
            }
        }
        err
    }
}

/// Exchange of the upper and lower spinor components.
pub fn spin_swap(n_max: usize) -> CMatrix {
    CMatrix::identity(n_max + 1).kron(&pauli(Spin::X))
}

/// `2mH / |eB|` for the Landau problem in the oscillator ⊗ spinor basis,
///
/// `(p^2 + q^2) + 2z (p σ1 - q σ2)` for `eB > 0`, with `q = (a + a†)/√2`
/// and `p = (a - a†)/(i√2)` truncated at `n_max`. Both quadratic terms are
/// formed as products of truncated matrices, so the top two oscillator rows
/// carry truncation artifacts. For `eB < 0` the spinor components are
/// exchanged.
pub fn build_landau_operator(z: f64, n_max: usize, sign_eb: i8) -> Result<OperatorMatrix> {
    if n_max < 2 {
        return Err(Error::invalid("landau operator needs n_max >= 2"));
    }
    if !z.is_finite() {
        return Err(Error::invalid("z must be finite for the oscillator matrix"));
    }
    let q = position(n_max);
    let p = momentum(n_max);
    let kinetic = &(&p * &p) + &(&q * &q);
    let one = pauli(Spin::Identity);
    let coupling = &p.kron(&pauli(Spin::X)) - &q.kron(&pauli(Spin::Y));
    let m = &kinetic.kron(&one) + &coupling.scale_real(2.0 * z);
    let m = match sign_eb {
        1 => m,
        -1 => {
            let sw = spin_swap(n_max);
            &(&sw * &m) * &sw
        }
        other => return Err(Error::invalid(format!("sign of eB must be ±1, got {other}"))),
    };
    OperatorMatrix::new(BasisTag::Spinor { n_max }, m)
}

/// Covariant momenta `P1 = Π1 + θσ1`, `P2 = Π2 + θσ2` with the kinetic
/// momenta `Π1 = sqrt(eB) p`, `Π2 = -sqrt(eB) q` of the Landau gauge.
/// Their commutator is `i eB + 2i θ^2 σ3` away from the truncation edge.
pub fn covariant_momenta(theta: f64, e_b: f64, n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let root = e_b.max(0.0).sqrt();
    let one = pauli(Spin::Identity);
    let id = CMatrix::identity(n_max + 1);
    let p1 = &momentum(n_max).scale_real(root).kron(&one) + &id.kron(&pauli(Spin::X)).scale_real(theta);
    let p2 = &position(n_max).scale_real(-root).kron(&one) + &id.kron(&pauli(Spin::Y)).scale_real(theta);
    let basis = BasisTag::Spinor { n_max };
    (OperatorMatrix { basis, matrix: p1 }, OperatorMatrix { basis, matrix: p2 })
}

/// Indices of eigenvectors whose weight on the top `edge_rows` oscillator
/// levels is below `tol`, i.e. the eigenpairs unaffected by truncation.
pub fn interior_eigenpairs(basis: BasisTag, eig: &HermitianEigen, edge_rows: usize, tol: f64) -> Vec<usize> {
    let cut = basis.n_max() + 1 - edge_rows.min(basis.n_max() + 1);
    (0..eig.values.len())
        .filter(|&j| {
            let w: f64 = (0..basis.dim())
                .filter(|&i| basis.orbital(i) >= cut)
                .map(|i| eig.vectors[(i, j)].norm_sqr())
                .sum();
            w < tol
        })
        .collect()
}
