//! The coefficient sequence `a_k` with exponential generating function
//! `e^{-γz}/Γ(1+z) = exp(Σ_{m≥2} (-1)^{m-1} ζ(m) z^m / m)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use twofloat::TwoFloat;

use crate::arith::{binomial, binomial_f64, factorial, powi};
use crate::special::ConstantsCache;
use crate::sum::Neumaier;
use crate::{Error, Result};

/// Largest supported index.
pub const K_MAX: u32 = 30;

const EPS: f64 = f64::EPSILON;
/// Unit roundoff of the double-double working precision, with some slack.
const WIDE_EPS: f64 = 1e-31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// `a_k = (-1)^{k-1}(k-1)!ζ(k) + Σ_{i=1}^{k-3} (-1)^i C(k-1,i) i! ζ(i+1) a_{k-1-i}`.
    Recurrence,
    /// Power-series exponentiation of the log-series, then `a_k = k! g_k`.
    GammaSeries,
    /// `a_k = Σ_j B_{k,j}(x_1, x_2, ...)`, `x_1 = 0`, `x_m = (-1)^{m-1}(m-1)!ζ(m)`.
    Bell,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Recurrence, Method::GammaSeries, Method::Bell];

    pub fn name(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::GammaSeries => "gamma_series",
            Method::Bell => "bell",
        }
    }
}

/// `a_0..=a_{k_max}` from one method, with a first-order error bound per entry.
///
/// All three methods cancel heavily: `a_20 ≈ 1.3·10^8` is assembled from
/// terms near `19! ζ(20) ≈ 1.2·10^17`, so they run in double-double on
/// double-double zeta values. The bound covers the input error of
/// the zeta values, the working precision, and the final rounding to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    method: Method,
    wide: Vec<TwoFloat>,
    values: Vec<f64>,
    errors: Vec<f64>,
}

impl CoefficientTable {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn k_max(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn errors(&self) -> &[f64] {
        &self.errors
    }

    pub fn get(&self, k: u32) -> f64 {
        self.values[k as usize]
    }

    /// `a_k` in the double-double working precision.
    pub fn get_wide(&self, k: u32) -> TwoFloat {
        self.wide[k as usize]
    }

    pub fn error(&self, k: u32) -> f64 {
        self.errors[k as usize]
    }
}

pub fn ak_table(k_max: u32, method: Method, cache: &ConstantsCache) -> Result<CoefficientTable> {
    if k_max > K_MAX {
        return Err(Error::Domain("k_max above 30 exceeds binary64 headroom"));
    }
    if k_max > cache.s_max() {
        return Err(Error::Domain("k_max exceeds the zeta values in the constants cache"));
    }
    let inputs = Inputs::new(k_max, cache);
    let (wide, mut errors) = match method {
        Method::Recurrence => by_recurrence(k_max, &inputs),
        Method::GammaSeries => by_series(k_max, &inputs),
        Method::Bell => by_bell(k_max, &inputs),
    };
    let values: Vec<f64> = wide.iter().map(|w| w.hi()).collect();
    for (e, v) in errors.iter_mut().zip(&values) {
        *e += EPS / 2.0 * v.abs();
    }
    Ok(CoefficientTable {
        method,
        wide,
        values,
        errors,
    })
}

fn sign(e: u32) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn wide_factorial(n: u32) -> TwoFloat {
    (1..=n).fold(TwoFloat::from(1.0), |acc, k| acc * k as f64)
}

fn wide_binomial(n: u32, k: u32) -> TwoFloat {
    TwoFloat::from(binomial(n as usize, k as usize))
}

fn magnitude(v: TwoFloat) -> f64 {
    v.hi().abs()
}

/// Zeta values in working precision, their magnitudes and absolute input errors.
struct Inputs {
    zeta: Vec<TwoFloat>,
    dzeta: Vec<f64>,
}

impl Inputs {
    fn new(k_max: u32, cache: &ConstantsCache) -> Self {
        let n = k_max as usize + 2;
        let mut zeta = vec![TwoFloat::from(0.0); n];
        let mut dzeta = vec![0.0; n];
        for s in 2..n as u32 {
            if s <= cache.s_max() {
                zeta[s as usize] = cache.zeta_wide(s);
                dzeta[s as usize] = 1e-22 * cache.zeta_tail(s);
            }
        }
        Self { zeta, dzeta }
    }
}

fn by_recurrence(k_max: u32, inp: &Inputs) -> (Vec<TwoFloat>, Vec<f64>) {
    let n = k_max as usize + 1;
    let mut a = vec![TwoFloat::from(0.0); n];
    let mut err = vec![0.0; n];
    a[0] = TwoFloat::from(1.0);
    if n > 2 {
        a[2] = -inp.zeta[2];
        err[2] = inp.dzeta[2];
    }
    if n > 3 {
        a[3] = inp.zeta[3] * 2.0;
        err[3] = 2.0 * inp.dzeta[3];
    }
    for k in 4..=k_max {
        let f = wide_factorial(k - 1);
        let lead = f * inp.zeta[k as usize] * sign(k - 1);
        let mut acc = lead;
        let mut mag = magnitude(lead);
        let mut e = f.hi() * inp.dzeta[k as usize];
        for i in 1..=k - 3 {
            let w = wide_binomial(k - 1, i) * wide_factorial(i);
            let c = w * inp.zeta[(i + 1) as usize] * sign(i);
            let j = (k - 1 - i) as usize;
            let t = c * a[j];
            acc += t;
            mag += magnitude(t);
            e += magnitude(c) * err[j] + w.hi() * inp.dzeta[(i + 1) as usize] * magnitude(a[j]);
        }
        a[k as usize] = acc;
        err[k as usize] = e + WIDE_EPS * mag;
    }
    (a, err)
}

fn by_series(k_max: u32, inp: &Inputs) -> (Vec<TwoFloat>, Vec<f64>) {
    let n = k_max as usize + 1;
    // j f_j with f = Σ_{j≥2} (-1)^{j-1} ζ(j) z^j / j
    let jf: Vec<TwoFloat> = (0..n)
        .map(|j| if j < 2 { TwoFloat::from(0.0) } else { inp.zeta[j] * sign(j as u32 - 1) })
        .collect();
    let mut g = vec![TwoFloat::from(0.0); n];
    let mut gerr = vec![0.0; n];
    g[0] = TwoFloat::from(1.0);
    for m in 1..n {
        let mut acc = TwoFloat::from(0.0);
        let mut mag = 0.0;
        let mut e = 0.0;
        for j in 2..=m {
            let t = jf[j] * g[m - j];
            acc += t;
            mag += magnitude(t);
            e += magnitude(jf[j]) * gerr[m - j] + inp.dzeta[j] * magnitude(g[m - j]);
        }
        g[m] = acc / m as f64;
        gerr[m] = (e + WIDE_EPS * mag) / m as f64;
    }
    let mut a = vec![TwoFloat::from(0.0); n];
    let mut err = vec![0.0; n];
    for k in 0..n {
        let f = wide_factorial(k as u32);
        a[k] = g[k] * f;
        err[k] = gerr[k] * f.hi() + WIDE_EPS * magnitude(a[k]);
    }
    (a, err)
}

/// `x_1..=x_{k_max}` for the Bell-polynomial formula, `x[0] = x_1 = 0`.
pub fn bell_arguments(k_max: u32, cache: &ConstantsCache) -> Vec<f64> {
    (1..=k_max)
        .map(|m| if m == 1 { 0.0 } else { sign(m - 1) * factorial(m - 1) * cache.zeta(m) })
        .collect()
}

/// Table `B[k][j]`, `0 <= j <= k <= k_max`, over any scalar; `x[0]` is `x_1`.
fn bell_table<T>(k_max: usize, x: &[T], zero: T, one: T) -> Vec<Vec<T>>
where
    T: Copy + core::ops::Add<Output = T> + core::ops::Mul<Output = T> + From<f64>,
{
    let mut b = vec![vec![zero; k_max + 1]; k_max + 1];
    b[0][0] = one;
    for k in 1..=k_max {
        for j in 1..=k {
            let mut acc = zero;
            for i in 1..=k - j + 1 {
                acc = acc + T::from(binomial(k - 1, i - 1) as f64) * x[i - 1] * b[k - i][j - 1];
            }
            b[k][j] = acc;
        }
    }
    b
}

/// Partial Bell polynomial `B_{k,j}(x_1, ..., x_{k-j+1})`, `x[0] = x_1`.
pub fn bell_partial(k: u32, j: u32, x: &[f64]) -> Result<f64> {
    if j > k {
        return Err(Error::Domain("bell_partial needs j <= k"));
    }
    if j == 0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let need = (k - j + 1) as usize;
    if x.len() < need {
        return Err(Error::Domain("bell_partial needs at least k - j + 1 arguments"));
    }
    if k as usize >= crate::arith::BINOMIAL_ROWS {
        return Err(Error::Domain("bell_partial supports k < 64"));
    }
    let mut padded: Vec<TwoFloat> = x[..need].iter().map(|&v| TwoFloat::from(v)).collect();
    padded.resize(k as usize, TwoFloat::from(0.0));
    let b = bell_table(k as usize, &padded, TwoFloat::from(0.0), TwoFloat::from(1.0));
    Ok(b[k as usize][j as usize].hi())
}

fn by_bell(k_max: u32, inp: &Inputs) -> (Vec<TwoFloat>, Vec<f64>) {
    let k = k_max as usize;
    let mut x = vec![TwoFloat::from(0.0); k];
    let mut dx = vec![0.0; k];
    for m in 2..=k {
        let f = wide_factorial(m as u32 - 1);
        x[m - 1] = f * inp.zeta[m] * sign(m as u32 - 1);
        dx[m - 1] = f.hi() * inp.dzeta[m];
    }
    let b = bell_table(k, &x, TwoFloat::from(0.0), TwoFloat::from(1.0));
    // first-order sensitivity: D_{k,j} = Σ_i C(k-1,i-1) (dx_i |B_{k-i,j-1}| + |x_i| D_{k-i,j-1})
    let absx: Vec<f64> = x.iter().map(|v| magnitude(*v)).collect();
    let babs = bell_table(k, &absx, 0.0, 1.0);
    let mut d = vec![vec![0.0; k + 1]; k + 1];
    for n in 1..=k {
        for j in 1..=n {
            let mut acc = 0.0;
            for i in 1..=n - j + 1 {
                acc += binomial(n - 1, i - 1) as f64 * (dx[i - 1] * babs[n - i][j - 1] + absx[i - 1] * d[n - i][j - 1]);
            }
            d[n][j] = acc;
        }
    }
    let mut a = vec![TwoFloat::from(0.0); k + 1];
    let mut err = vec![0.0; k + 1];
    a[0] = TwoFloat::from(1.0);
    for n in 1..=k {
        a[n] = (1..=n).fold(TwoFloat::from(0.0), |acc, j| acc + b[n][j]);
        let mag: f64 = (1..=n).map(|j| babs[n][j]).sum();
        let sens: f64 = (1..=n).map(|j| d[n][j]).sum();
        err[n] = sens + (n as f64 + 1.0) * WIDE_EPS * mag;
    }
    (a, err)
}

/// `Σ_{r=1}^{k} C(k,r) a_{k-r} (-1)^r r! ζ(r+1)`.
///
/// Equals `a_{k+1}`: multiplying the generating-function ODE
/// `A'(z) = A(z) Σ_{m≥2} (-1)^{m-1} ζ(m) z^{m-1}` through by `k!` and reading
/// off `z^k` gives exactly this convolution.
pub fn ak_convolution_rhs(k: u32, a: &CoefficientTable, cache: &ConstantsCache) -> Result<f64> {
    if k > a.k_max() || k + 1 > cache.s_max() {
        return Err(Error::Domain("coefficient table or constants cache too short"));
    }
    let mut acc = TwoFloat::from(0.0);
    for r in 1..=k {
        let w = wide_binomial(k, r) * wide_factorial(r) * sign(r);
        acc += w * cache.zeta_wide(r + 1) * a.get_wide(k - r);
    }
    Ok(acc.hi())
}

/// Right side of the coefficient identity
///
/// `Σ_{r=1}^{k} C(k,r) a_{k-r} I_r - Σ_{r=1}^{k} C(k,r) a_{k-r} (-log 2)^{r+1} + (-1)^k Li_{k+1}(1/2)`
///
/// with `I_r` supplied by the caller.
pub fn ak_closed_loop_rhs<F>(k: u32, a: &CoefficientTable, cache: &ConstantsCache, integral: F) -> Result<f64>
where
    F: Fn(u32) -> Result<f64>,
{
    if k > a.k_max() || k + 1 > cache.s_max() {
        return Err(Error::Domain("coefficient table or constants cache too short"));
    }
    let mut acc = Neumaier::new();
    for r in 1..=k {
        let w = binomial_f64(k as usize, r as usize) * a.get(k - r);
        acc.add(w * integral(r)?);
        acc.add(-w * powi(-LN_2, r + 1));
    }
    acc.add(sign(k) * cache.li_half(k + 1));
    Ok(acc.value())
}
