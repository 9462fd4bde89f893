use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(q)` by the three-term recurrence.
pub fn hermite(n: usize, q: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * q * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unnormalized Hermite function `phi_n(q) = exp(-q^2/2) H_n(q)`.
pub fn hermite_function(n: usize, q: f64) -> f64 {
    (-0.5 * q * q).exp() * hermite(n, q)
}

/// Derivative of `phi_n` from `H_n' = 2n H_{n-1}`.
pub fn hermite_function_derivative(n: usize, q: f64) -> f64 {
    let lower = if n == 0 { 0.0 } else { 2.0 * n as f64 * hermite_function(n - 1, q) };
    lower - q * hermite_function(n, q)
}

/// Orthonormal Hermite polynomials `h_0..=h_nmax` at `q`, normalized so that
/// `∫ h_m h_n exp(-q^2) dq = δ_mn`.
pub fn normalized_hermite_polys(n_max: usize, q: f64) -> Vec<f64> {
    normalized_recurrence(n_max, q, PI.powf(-0.25))
}

/// Orthonormal Hermite functions `phî_n = exp(-q^2/2) H_n / sqrt(2^n n! sqrt(pi))`
/// for `n = 0..=n_max`, from the normalized recurrence (no factorials).
pub fn hermite_functions_normalized(n_max: usize, q: f64) -> Vec<f64> {
    normalized_recurrence(n_max, q, PI.powf(-0.25) * (-0.5 * q * q).exp())
}

/// Orthonormal Hermite functions and their first derivatives up to `n_max`,
/// with `phî_n' = (sqrt(n) phî_{n-1} - sqrt(n+1) phî_{n+1}) / sqrt 2`.
pub fn hermite_functions_normalized_with_derivative(n_max: usize, q: f64) -> (Vec<f64>, Vec<f64>) {
    let f = hermite_functions_normalized(n_max + 1, q);
    let d = (0..=n_max)
        .map(|n| {
            let down = if n == 0 { 0.0 } else { (n as f64).sqrt() * f[n - 1] };
            (down - ((n + 1) as f64).sqrt() * f[n + 1]) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    (f[..=n_max].to_vec(), d)
}

fn normalized_recurrence(n_max: usize, q: f64, start: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(start);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * q * start);
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * q * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Residuals of the ladder identities of the unnormalized Hermite functions,
///
/// `r1 = phi_n' + q phi_n - 2n phi_{n-1}` and `r2 = phi_n' - q phi_n + phi_{n+1}`.
///
/// `r1` is reported as 0 for `n = 0` where it reads `phi_0' + q phi_0`.
pub fn recurrence_check(n: usize, q: f64) -> (f64, f64) {
    let d = hermite_function_derivative(n, q);
    let phi = hermite_function(n, q);
    let r1 = if n == 0 {
        d + q * phi
    } else {
        d + q * phi - 2.0 * n as f64 * hermite_function(n - 1, q)
    };
    let r2 = d - q * phi + hermite_function(n + 1, q);
    (r1, r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `exp(-q^2/2) H_n(q)`.
    Physicists,
    /// `phî_n`, unit L2 norm.
    Orthonormal,
}

/// Truncated Hermite-function basis `n = 0..=n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    pub n_max: usize,
    pub normalization: Normalization,
}

impl HermiteBasis {
    pub fn new(n_max: usize, normalization: Normalization) -> Self {
        assert!(n_max >= 1, "basis needs n_max >= 1");
        Self { n_max, normalization }
    }

    pub fn len(&self) -> usize {
        self.n_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All basis functions at `q`.
    pub fn eval(&self, q: f64) -> Vec<f64> {
        match self.normalization {
            Normalization::Orthonormal => hermite_functions_normalized(self.n_max, q),
            Normalization::Physicists => (0..=self.n_max).map(|n| hermite_function(n, q)).collect(),
        }
    }
}
