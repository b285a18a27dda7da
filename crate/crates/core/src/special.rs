//! Integer zeta values, Euler's constant, `Li_s(1/2)` and the integrals
//! `∫_0^{1/2} log^m(1-t)/t dt`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::arith::{binomial_f64, factorial, powi};
use crate::quad::{self, Integral};
use crate::sum::Neumaier;
use twofloat::TwoFloat;
use crate::{Error, Result};

/// `B_2, B_4, ..., B_16` as exact fractions.
pub const BERNOULLI_EVEN: [(i64, i64); 8] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
];

/// Number of explicit terms before the Euler–Maclaurin tail.
const EM_TERMS: u32 = 20;

/// `ζ(s) - 1 = Σ_{n≥2} n^{-s}` for integer `s >= 2` in double-double, by
/// Euler–Maclaurin with `N = 20` and corrections through `B_16`. The
/// truncation error is below `10^{-22}` relative for every `s`.
pub fn zeta_tail_wide(s: u32) -> Result<TwoFloat> {
    if s < 2 {
        return Err(Error::Domain("zeta needs s >= 2"));
    }
    // only TwoFloat / f64 divisions: TwoFloat / TwoFloat and recip lose half the digits
    let inv_n = TwoFloat::from(1.0) / EM_TERMS as f64;
    let mut terms: Vec<TwoFloat> = Vec::with_capacity(EM_TERMS as usize + 10);
    let mut rising = TwoFloat::from(s as f64); // s (s+1) ... (s+2j-2)
    let mut fact = 2.0; // (2j)!, exact in f64 through 16!
    for (j, &(num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let jj = j as u32 + 1;
        let b = TwoFloat::from(num as f64) / den as f64 / fact;
        terms.push(b * rising * inv_n.powi((s + 2 * jj - 1) as i32));
        rising = rising * (s + 2 * jj - 1) as f64 * (s + 2 * jj) as f64;
        fact *= ((2 * jj + 1) * (2 * jj + 2)) as f64;
    }
    terms.reverse();
    terms.push(inv_n.powi(s as i32) / 2.0);
    terms.push(inv_n.powi(s as i32 - 1) / (s as f64 - 1.0));
    for k in (2..EM_TERMS).rev() {
        terms.push((TwoFloat::from(1.0) / k as f64).powi(s as i32));
    }
    // smallest terms first
    Ok(terms.into_iter().fold(TwoFloat::from(0.0), |acc, t| acc + t))
}

/// `ζ(s) - 1` rounded to `f64`, see [`zeta_tail_wide`].
pub fn zeta_tail(s: u32) -> Result<f64> {
    zeta_tail_wide(s).map(|t| t.hi())
}

/// `ζ(s)` for integer `s >= 2`, see [`zeta_tail`].
pub fn zeta_int(s: u32) -> Result<f64> {
    zeta_tail(s).map(|t| 1.0 + t)
}

/// Euler–Mascheroni constant from `H_N - log N` with Euler–Maclaurin
/// corrections (`N = 20`, through `B_16`).
pub fn euler_gamma() -> f64 {
    let n = EM_TERMS as f64;
    let mut acc = Neumaier::new();
    for (j, &(num, den)) in BERNOULLI_EVEN.iter().enumerate().rev() {
        let k = j as u32 + 1;
        acc.add(num as f64 / den as f64 / (2 * k) as f64 / powi(n, 2 * k));
    }
    acc.add(-0.5 / n);
    acc.add(-libm::log(n));
    for k in (1..=EM_TERMS).rev() {
        acc.add(1.0 / k as f64);
    }
    acc.value()
}

/// Number of series terms used for `Li_s(1/2)`; the dropped tail is below `2^-60`.
pub const LI_HALF_TERMS: u32 = 60;

/// `Li_s(1/2) = Σ_{k≥1} 2^{-k} / k^s` for `s >= 1`.
pub fn li_half(s: u32) -> Result<f64> {
    if s < 1 {
        return Err(Error::Domain("li_half needs s >= 1"));
    }
    let mut acc = Neumaier::new();
    for k in (1..=LI_HALF_TERMS).rev() {
        acc.add(libm::pow(0.5, k as f64) / libm::pow(k as f64, s as f64));
    }
    Ok(acc.value())
}

/// Frozen special values for the rest of the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsCache {
    zeta: Vec<f64>,
    zeta_tail: Vec<TwoFloat>,
    li_half: Vec<f64>,
    gamma: f64,
}

impl ConstantsCache {
    pub const DEFAULT_MAX: u32 = 40;

    pub fn new(s_max: u32) -> Self {
        let s_max = s_max.max(2);
        let mut zeta = vec![f64::NAN; s_max as usize + 1];
        let mut tail = vec![TwoFloat::from(f64::NAN); s_max as usize + 1];
        let mut li = vec![f64::NAN; s_max as usize + 1];
        for s in 1..=s_max {
            if s >= 2 {
                tail[s as usize] = zeta_tail_wide(s).expect("s >= 2");
                zeta[s as usize] = (tail[s as usize] + 1.0).hi();
            }
            li[s as usize] = li_half(s).expect("s >= 1");
        }
        Self {
            zeta,
            zeta_tail: tail,
            li_half: li,
            gamma: euler_gamma(),
        }
    }

    pub fn s_max(&self) -> u32 {
        (self.zeta.len() - 1) as u32
    }

    /// `ζ(s)`, `2 <= s <= s_max`.
    pub fn zeta(&self, s: u32) -> f64 {
        assert!((2..=self.s_max()).contains(&s), "zeta({s}) outside the cache");
        self.zeta[s as usize]
    }

    /// `ζ(s) - 1`, `2 <= s <= s_max`.
    pub fn zeta_tail(&self, s: u32) -> f64 {
        assert!((2..=self.s_max()).contains(&s), "zeta({s}) outside the cache");
        self.zeta_tail[s as usize].hi()
    }

    /// `ζ(s)` in double-double.
    pub fn zeta_wide(&self, s: u32) -> TwoFloat {
        assert!((2..=self.s_max()).contains(&s), "zeta({s}) outside the cache");
        self.zeta_tail[s as usize] + 1.0
    }

    /// `Li_s(1/2)`, `1 <= s <= s_max`.
    pub fn li_half(&self, s: u32) -> f64 {
        assert!((1..=self.s_max()).contains(&s), "Li_{s}(1/2) outside the cache");
        self.li_half[s as usize]
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for ConstantsCache {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX)
    }
}

fn check_integral_order(m: u32, cache: &ConstantsCache) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("the m = 0 integral diverges at t = 0"));
    }
    if m + 1 > cache.s_max() {
        return Err(Error::Domain("integral order exceeds the constants cache"));
    }
    Ok(())
}

/// Closed form for `∫_0^{1/2} log^m(1-t)/t dt`, evaluated term for term as
///
/// `(-log 2)^{m+1} + (-1)^m m! ζ(m+1) + (-1)^{m-1} Σ_{s=1}^{m} C(m,s) (log 2)^{m-s} Li_{s+1}(1/2)`.
///
/// This matches the integral only for `m = 1`; see
/// [`mertens_integral_closed_falling`] for the form that holds for all `m`.
pub fn mertens_integral_closed(m: u32, cache: &ConstantsCache) -> Result<f64> {
    check_integral_order(m, cache)?;
    closed_form(m, cache, |s| binomial_f64(m as usize, s as usize))
}

/// `∫_0^{1/2} log^m(1-t)/t dt` written with falling factorials:
///
/// `(-log 2)^{m+1} + (-1)^m m! ζ(m+1) + (-1)^{m-1} Σ_{s=1}^{m} m!/(m-s)! (log 2)^{m-s} Li_{s+1}(1/2)`.
///
/// Follows from `∫_0^z log^m(u)/(1-u) du = Σ_j (-1)^j m!/(m-j)! log^{m-j}(z) Li_{j+1}(z)`
/// at `z = 1/2` together with `∫_0^1 log^m(1-t)/t dt = (-1)^m m! ζ(m+1)`.
pub fn mertens_integral_closed_falling(m: u32, cache: &ConstantsCache) -> Result<f64> {
    check_integral_order(m, cache)?;
    closed_form(m, cache, |s| binomial_f64(m as usize, s as usize) * factorial(s))
}

fn closed_form(m: u32, cache: &ConstantsCache, coef: impl Fn(u32) -> f64) -> Result<f64> {
    let sign = |e: u32| if e % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = Neumaier::new();
    acc.add(powi(-LN_2, m + 1));
    acc.add(sign(m) * factorial(m) * cache.zeta(m + 1));
    for s in 1..=m {
        acc.add(sign(m - 1) * coef(s) * powi(LN_2, m - s) * cache.li_half(s + 1));
    }
    Ok(acc.value())
}

/// Split point between the series and the adaptive part of the quadrature.
const SERIES_CUTOFF: f64 = 1e-3;
const SERIES_TERMS: usize = 16;

/// Independent numerical value of `∫_0^{1/2} log^m(1-t)/t dt`: power series
/// on `[0, 10^-3]` (the integrand behaves like `(-t)^{m-1}` there), adaptive
/// Gauss–Kronrod on the rest.
pub fn mertens_integral_quadrature(m: u32) -> Result<Integral> {
    if m == 0 {
        return Err(Error::Domain("the m = 0 integral diverges at t = 0"));
    }
    // log(1-t) = -t u(t), u(t) = Σ t^j/(j+1); integrand = (-1)^m t^{m-1} u(t)^m
    let base: Vec<f64> = (0..SERIES_TERMS).map(|j| 1.0 / (j + 1) as f64).collect();
    let mut power = vec![0.0; SERIES_TERMS];
    power[0] = 1.0;
    for _ in 0..m {
        let mut next = vec![0.0; SERIES_TERMS];
        for (i, &a) in power.iter().enumerate() {
            for (j, &b) in base.iter().enumerate().take(SERIES_TERMS - i) {
                next[i + j] += a * b;
            }
        }
        power = next;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mut head = Neumaier::new();
    for (j, &c) in power.iter().enumerate().rev() {
        let e = m + j as u32;
        head.add(sign * c * powi(SERIES_CUTOFF, e) / e as f64);
    }
    let body = quad::integrate(
        |t| powi(libm::log1p(-t), m) / t,
        SERIES_CUTOFF,
        0.5,
        1e-14,
        4096,
    );
    Ok(Integral {
        value: head.value() + body.value,
        error: body.error,
        panels: body.panels,
    })
}
