//! Empirical Mertens constants `A_{h,m}` for primes in a residue class, and
//! the residuals of `Σ_{p≤x, p≡h} 1/p = loglog x/φ(m) + A_{h,m} + O(1/log x)`.

use alloc::vec::Vec;

use crate::arith::{gcd, totient};
use crate::multisum::MIN_PREDICTION_X;
use crate::primes::{logk_recip_sum_ap, PrefixSource, PrimeTable};
use crate::sum::Neumaier;
use crate::{Error, Result};

/// Smallest accepted calibration point.
pub const MIN_X_REF: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensConstant {
    pub m: u64,
    pub h: u64,
    pub value: f64,
    pub x_ref: u64,
    /// `|value(x_ref) - value(x_ref / 10)|`.
    pub uncertainty: f64,
}

impl MertensConstant {
    /// `φ(m) A_{h,m}`.
    pub fn shift(&self) -> f64 {
        totient(self.m) as f64 * self.value
    }

    pub fn matches(&self, h: u64, m: u64) -> bool {
        m == self.m && h % m == self.h
    }
}

fn loglog(x: u64) -> f64 {
    libm::log(libm::log(x as f64))
}

fn raw_constant<S: PrefixSource + ?Sized>(src: &S, m: u64, h: u64, x: u64) -> Result<f64> {
    let s = logk_recip_sum_ap(src, x, 0, m, h)?;
    Ok(s - loglog(x) / totient(m) as f64)
}

/// `A_{h,m} ≈ Σ_{p≤x_ref, p≡h} 1/p - loglog(x_ref)/φ(m)`.
pub fn estimate_mertens_constant<S: PrefixSource + ?Sized>(src: &S, m: u64, h: u64, x_ref: u64) -> Result<MertensConstant> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let h = h % m;
    if gcd(h, m) != 1 {
        return Err(Error::NotCoprime { residue: h, modulus: m });
    }
    if x_ref < MIN_X_REF {
        return Err(Error::PrecisionWarning {
            x_ref,
            min: MIN_X_REF,
        });
    }
    src.table().check(x_ref)?;
    let value = raw_constant(src, m, h, x_ref)?;
    let previous = raw_constant(src, m, h, x_ref / 10)?;
    Ok(MertensConstant {
        m,
        h,
        value,
        x_ref,
        uncertainty: (value - previous).abs(),
    })
}

/// Constants for every unit residue modulo `m`, ascending in `h`.
pub fn estimate_all_residues<S: PrefixSource + ?Sized>(src: &S, m: u64, x_ref: u64) -> Result<Vec<MertensConstant>> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    (0..m)
        .filter(|&h| gcd(h, m) == 1)
        .map(|h| estimate_mertens_constant(src, m, h, x_ref))
        .collect()
}

/// `|Σ_h A_{h,m} - (A - Σ_{p|m} 1/p)|` over a complete set of unit residues.
pub fn residue_sum_check(constants: &[MertensConstant], a_classical: f64) -> Result<f64> {
    let first = constants
        .first()
        .ok_or(Error::Domain("residue_sum_check needs at least one constant"))?;
    let m = first.m;
    if constants.iter().any(|c| c.m != m || c.x_ref != first.x_ref) {
        return Err(Error::Domain("constants must share modulus and calibration point"));
    }
    let mut seen: Vec<u64> = constants.iter().map(|c| c.h % m).collect();
    seen.sort_unstable();
    seen.dedup();
    let units = (0..m).filter(|&h| gcd(h, m) == 1).count();
    if seen.len() != constants.len() || seen.len() != units {
        return Err(Error::Domain("constants must cover every unit residue exactly once"));
    }
    let mut acc: Neumaier = constants.iter().map(|c| c.value).collect();
    for (p, _) in crate::arith::factorize(m) {
        acc.add(1.0 / p as f64);
    }
    acc.add(-a_classical);
    Ok(acc.value().abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm11Residual {
    pub x: u64,
    pub residual: f64,
    /// `residual · log x`.
    pub scaled: f64,
}

/// Residuals of the single-class expansion on `grid`.
pub fn thm11_residuals<S: PrefixSource + ?Sized>(src: &S, constant: &MertensConstant, grid: &[u64]) -> Result<Vec<Thm11Residual>> {
    let phi = totient(constant.m) as f64;
    grid.iter()
        .map(|&x| {
            if x < MIN_PREDICTION_X {
                return Err(Error::TooSmallForPrediction(x));
            }
            let s = logk_recip_sum_ap(src, x, 0, constant.m, constant.h)?;
            let residual = s - (loglog(x) / phi + constant.value);
            Ok(Thm11Residual {
                x,
                residual,
                scaled: residual * libm::log(x as f64),
            })
        })
        .collect()
}

/// `γ + Σ_{p≤P} (log(1 - 1/p) + 1/p)` with the tail past `P` estimated as
/// `-1/(2 P log P)`; returns the value and the size of that tail estimate.
///
/// The neglected terms are `-1/(2p²) - 1/(3p³) - ...`, so the tail is negative
/// and bounded in magnitude by roughly twice the estimate.
pub fn classical_constant_oracle(table: &PrimeTable, gamma: f64) -> (f64, f64) {
    let mut acc = Neumaier::new();
    for &p in table.primes().iter().rev() {
        let inv = 1.0 / p as f64;
        acc.add(libm::log1p(-inv) + inv);
    }
    let big_p = table.limit() as f64;
    let tail = -1.0 / (2.0 * big_p * libm::log(big_p));
    acc.add(tail);
    acc.add(gamma);
    (acc.value(), tail.abs())
}
