//! Dense complex matrices and a Hermitian eigensolver.
//!
//! The solver reduces a Hermitian matrix to real symmetric tridiagonal form
//! with Householder reflections, then diagonalizes the tridiagonal matrix
//! with the implicit QL algorithm. Sizes up to a few thousand are fine.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// 2x2 matrix from rows.
    pub fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        Self::from_fn(2, 2, |i, j| m[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Top-left `n x n` block.
    pub fn leading_block(&self, n: usize) -> Self {
        assert!(n <= self.rows && n <= self.cols);
        Self::from_fn(n, n, |i, j| self[(i, j)])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        assert!(self.is_square());
        let mut err = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the normalized eigenvector of `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|r| self.vectors[(r, i)]).collect()
    }
}

struct Reflector {
    start: usize,
    v: Vec<Complex64>,
    beta: f64,
}

impl Reflector {
    /// x <- (I - beta v v^H) x on rows `start..`.
    fn apply(&self, x: &mut [Complex64]) {
        let tail = &mut x[self.start..];
        let s: Complex64 = self.v.iter().zip(tail.iter()).map(|(v, x)| v.conj() * x).sum();
        let s = s * self.beta;
        for (xi, vi) in tail.iter_mut().zip(&self.v) {
            *xi -= vi * s;
        }
    }
}

/// Householder reduction of a Hermitian matrix to a real symmetric
/// tridiagonal matrix. Returns `(diag, offdiag, reflectors, phases)` with
/// `A = Q D T D^H Q^H`, `Q` the product of the reflectors and `D = diag(phases)`.
fn tridiagonalize(a: &CMatrix) -> (Vec<f64>, Vec<f64>, Vec<Reflector>, Vec<Complex64>) {
    let n = a.rows();
    let mut m = a.clone();
    let mut reflectors = Vec::new();
    let mut offdiag_c = vec![ZERO; n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| m[(i, k)]).collect();
        let sigma = norm(&x);
        let tail_norm = norm(&x[1..]);
        if tail_norm == 0.0 {
            offdiag_c[k] = x[0];
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * sigma;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;

        // p = beta A v on the trailing block
        let s = k + 1;
        let len = n - s;
        let mut p = vec![ZERO; len];
        for i in 0..len {
            let row = &m.row(s + i)[s..];
            p[i] = row.iter().zip(&v).map(|(a, b)| a * b).sum::<Complex64>() * beta;
        }
        let kk = 0.5 * beta * inner(&v, &p).re;
        let q: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk).collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * q[j].conj() + q[i] * v[j].conj();
                m[(s + i, s + j)] -= upd;
            }
        }
        offdiag_c[k] = alpha;
        for i in s..n {
            m[(i, k)] = ZERO;
            m[(k, i)] = ZERO;
        }
        reflectors.push(Reflector { start: s, v, beta });
    }
    if n >= 2 {
        offdiag_c[n - 2] = m[(n - 1, n - 2)];
    }

    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut phases = vec![ONE; n];
    let mut offdiag = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        let c = offdiag_c[k];
        let r = c.norm();
        offdiag[k] = r;
        phases[k + 1] = if r == 0.0 { phases[k] } else { phases[k] * (c / r) };
    }
    (diag, offdiag, reflectors, phases)
}

/// Implicit QL on a symmetric tridiagonal matrix. `d` is the diagonal,
/// `e[i]` couples `i` and `i+1`. On return `d` holds the eigenvalues
/// (unsorted) and, when given, column `i` of `z` (row-major `n x n`,
/// initialized by the caller) is rotated into the eigenvector of `d[i]`.
pub fn tridiagonal_ql(d: &mut [f64], offdiag: &[f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    assert_eq!(offdiag.len(), n - 1);
    let mut e = offdiag.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::numerical("QL iteration did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Eigenvalues and eigenvectors of a real symmetric tridiagonal matrix,
/// eigenvalues ascending. Eigenvector `i` is column `i` of the returned
/// row-major matrix.
pub fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut d, offdiag, Some(&mut z))?;
    let order = sorted_order(&d);
    let values = order.iter().map(|&i| d[i]).collect();
    let mut zs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            zs[k * n + new] = z[k * n + old];
        }
    }
    Ok((values, zs))
}

fn check_hermitian(a: &CMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::invalid("matrix is not square"));
    }
    let scale = a.max_abs().max(1.0);
    let err = a.hermiticity_error();
    if err > 1e-10 * scale {
        return Err(Error::invalid(format!("matrix is not Hermitian (error {err:e})")));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(a: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let (mut d, e, _, _) = tridiagonalize(a);
    tridiagonal_ql(&mut d, &e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn eigh(a: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(a)?;
    let n = a.rows();
    let (d, e, reflectors, phases) = tridiagonalize(a);
    let (values, z) = tridiagonal_eigen(&d, &e)?;
    let mut vectors = CMatrix::zeros(n, n);
    let mut col = vec![ZERO; n];
    for j in 0..n {
        for k in 0..n {
            col[k] = phases[k] * z[k * n + j];
        }
        for r in reflectors.iter().rev() {
            r.apply(&mut col);
        }
        for k in 0..n {
            vectors[(k, j)] = col[k];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        // small LCG, deterministic
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(next(), 0.0);
            for j in 0..i {
                let z = c(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn two_by_two_pauli_like() {
        // sigma_2 has eigenvalues -1, 1
        let s2 = CMatrix::from_2x2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]);
        let v = eigvalsh(&s2).unwrap();
        assert!((v[0] + 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for (n, seed) in [(1, 1), (2, 2), (3, 7), (17, 11), (60, 5)] {
            let a = random_hermitian(n, seed);
            let eig = eigh(&a).unwrap();
            for j in 0..n {
                let v = eig.vector(j);
                let av = a.mul_vec(&v);
                let resid: f64 = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - y * eig.values[j]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(resid < 1e-12, "n={n} j={j} resid={resid}");
                assert!((norm(&v) - 1.0).abs() < 1e-12);
            }
            // orthonormal columns
            let g = &eig.vectors.adjoint() * &eig.vectors;
            assert!(g.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
            // sorted and matches eigenvalue-only path
            let vals = eigvalsh(&a).unwrap();
            for (x, y) in vals.iter().zip(&eig.values) {
                assert!((x - y).abs() < 1e-12);
            }
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn trace_and_frobenius_invariants() {
        let a = random_hermitian(40, 99);
        let vals = eigvalsh(&a).unwrap();
        let trace: f64 = (0..40).map(|i| a[(i, i)].re).sum();
        let frob: f64 = a.data.iter().map(|z| z.norm_sqr()).sum();
        assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-12);
        assert!((vals.iter().map(|x| x * x).sum::<f64>() - frob).abs() < 1e-11);
    }

    #[test]
    fn already_diagonal_and_degenerate() {
        let mut a = CMatrix::zeros(5, 5);
        for (i, x) in [3.0, 1.0, 1.0, -2.0, 0.0].iter().enumerate() {
            a[(i, i)] = c(*x, 0.0);
        }
        let eig = eigh(&a).unwrap();
        assert_eq!(eig.values, vec![-2.0, 0.0, 1.0, 1.0, 3.0]);
    }

    #[test]
    fn tridiagonal_free_particle_chain() {
        // -1 hopping on an open chain: eigenvalues -2 cos(k pi / (n+1))
        let n = 30;
        let (vals, _) = tridiagonal_eigen(&vec![0.0; n], &vec![-1.0; n - 1]).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| -2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(f64::total_cmp);
        for (a, b) in vals.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_2x2([[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]]);
        assert!(eigvalsh(&m).is_err());
    }
}
