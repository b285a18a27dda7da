//! Elementary symmetric polynomials, their translation formulas, and the
//! `Q`-polynomials built from shift constants and the `a_k`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::arith::binomial;
use crate::coeffs::CoefficientTable;
use crate::{Error, Result};

/// Scalars the identities are evaluated over: `f64`, and `i128` for exact checks.
pub trait Coef: Copy + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
}

impl Coef for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
}

impl Coef for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_u64(v: u64) -> Self {
        v as i128
    }
}

fn pow<T: Coef>(x: T, n: usize) -> T {
    (0..n).fold(T::one(), |acc, _| acc * x)
}

fn binom<T: Coef>(n: usize, k: usize) -> T {
    T::from_u64(binomial(n, k))
}

/// `[e_0, ..., e_n]` with `Π (X + v_i) = Σ_k e_k X^{n-k}`.
pub fn elem_sym<T: Coef>(values: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); values.len() + 1];
    e[0] = T::one();
    for (i, &v) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = e[k] + v * e[k - 1];
        }
    }
    e
}

/// `e_k({y + C_i})` from `mu = elem_sym(C)`: `Σ_{j=0}^{k} C(n-j, k-j) μ_j y^{k-j}`.
pub fn tau_from_mu<T: Coef>(mu: &[T], y: T, k: usize, n: usize) -> Result<T> {
    if k > n {
        return Err(Error::Domain("tau_from_mu needs k <= n"));
    }
    if mu.len() != n + 1 {
        return Err(Error::Domain("mu must have n + 1 entries"));
    }
    let mut acc = T::zero();
    for (j, &m) in mu.iter().enumerate().take(k + 1) {
        acc = acc + binom::<T>(n - j, k - j) * m * pow(y, k - j);
    }
    Ok(acc)
}

/// Coefficients after translating every variable by `z`:
/// `τ_k ↦ Σ_{i=0}^{k} C(n-1-k+i, i) τ_{k-i} z^i`, where `tau` holds `τ_0..τ_{n-1}`.
pub fn tau_shift<T: Coef>(tau: &[T], z: T, n_minus_1: usize) -> Result<Vec<T>> {
    if tau.len() != n_minus_1 + 1 {
        return Err(Error::Domain("tau must have n_minus_1 + 1 entries"));
    }
    Ok((0..=n_minus_1)
        .map(|k| {
            let mut acc = T::zero();
            let mut zi = T::one();
            for i in 0..=k {
                acc = acc + binom::<T>(n_minus_1 - k + i, i) * tau[k - i] * zi;
                zi = zi * z;
            }
            acc
        })
        .collect())
}

/// Both sides of the subset identity
///
/// `Σ_{|S|=j} Σ_{k=1}^{j} e_{j-k}(S) = Σ_{k=1}^{j} C(n-1-j+k, k) e_{j-k}(y)`
///
/// where `y` has `n - 1` entries and `S` runs over its `j`-subsets.
pub fn prop3_both_sides<T: Coef>(y: &[T], j: usize) -> Result<(T, T)> {
    let n1 = y.len();
    if j == 0 || j > n1 {
        return Err(Error::Domain("prop3 needs 1 <= j <= n - 1"));
    }
    if n1 > 24 {
        return Err(Error::Domain("subset enumeration limited to 24 values"));
    }
    let mut lhs = T::zero();
    let mut subset = Vec::with_capacity(j);
    for mask in 0u32..1 << n1 {
        if mask.count_ones() as usize != j {
            continue;
        }
        subset.clear();
        subset.extend((0..n1).filter(|i| mask >> i & 1 == 1).map(|i| y[i]));
        let e = elem_sym(&subset);
        for k in 1..=j {
            lhs = lhs + e[j - k];
        }
    }
    let e = elem_sym(y);
    let mut rhs = T::zero();
    for k in 1..=j {
        rhs = rhs + binom::<T>(n1 - j + k, k) * e[j - k];
    }
    Ok((lhs, rhs))
}

/// Dense univariate polynomial, ascending coefficients, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
    }

    /// `h`-th derivative.
    pub fn derivative(&self, h: usize) -> Self {
        if h >= self.coeffs.len() {
            return Self::zero();
        }
        let c = self.coeffs[h..]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * falling(i + h, h))
            .collect();
        Self::new(c)
    }
}

/// `n (n-1) ... (n-h+1)` in floating point.
fn falling(n: usize, h: usize) -> f64 {
    (0..h).fold(1.0, |acc, i| acc * (n - i) as f64)
}

/// `Q^{(h)}(y)`; zero once `h` exceeds the degree.
pub fn poly_deriv_eval(p: &Polynomial, h: usize, y: f64) -> f64 {
    p.derivative(h).eval(y)
}

/// `Q_{n-1}(Y) = Σ_{j=0}^{n-1} μ_j Σ_{t=0}^{n-1-j} C(n-1-j, t) a_t Y^{n-1-j-t}`.
pub fn build_q(mu: &[f64], a: &CoefficientTable, n_minus_1: usize) -> Result<Polynomial> {
    if mu.len() != n_minus_1 + 1 {
        return Err(Error::Domain("mu must have n_minus_1 + 1 entries"));
    }
    if (a.k_max() as usize) < n_minus_1 {
        return Err(Error::Domain("coefficient table shorter than n_minus_1"));
    }
    let mut c = vec![0.0; n_minus_1 + 1];
    for (j, &m) in mu.iter().enumerate() {
        let d = n_minus_1 - j;
        for t in 0..=d {
            c[d - t] += m * binomial(d, t) as f64 * a.get(t as u32);
        }
    }
    Ok(Polynomial::new(c))
}

/// Shift constants `C_i = φ(m_i) A_{h_i,m_i}` together with the class each came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSet {
    values: Vec<f64>,
    sources: Vec<(u64, u64)>,
}

impl ShiftSet {
    /// `sources[i] = (h_i, m_i)`.
    pub fn new(values: Vec<f64>, sources: Vec<(u64, u64)>) -> Result<Self> {
        if values.len() != sources.len() {
            return Err(Error::Domain("one source per shift constant"));
        }
        Ok(Self { values, sources })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sources(&self) -> &[(u64, u64)] {
        &self.sources
    }

    /// `μ_0..μ_n`.
    pub fn mu(&self) -> Vec<f64> {
        elem_sym(&self.values)
    }

    /// `y_i = Y + C_i`.
    pub fn shifted(&self, y: f64) -> Vec<f64> {
        self.values.iter().map(|c| y + c).collect()
    }
}
