//! Verification runs: empirical sums against predictions on a grid, decade
//! maxima of the scaled residuals and the trend test applied to them.

use std::sync::Arc;

use mapl_core::characters::enumerate_characters;
use mapl_core::coeffs::CoefficientTable;
use mapl_core::mertens::{estimate_mertens_constant, MertensConstant};
use mapl_core::multisum::{check_grid, comparison_row, APSpec, ComparisonRow, Progression, Theorem};
use mapl_core::Complex64;
use mapl_core::primes::{prime_weight, walk_twisted_sums, PrefixSource, PrimeTable};
use rayon::prelude::*;

use crate::shared::SharedPrefixCache;
use crate::Result;

/// Smallest `d` with `10^d >= x`, so decade `d` is `(10^(d-1), 10^d]`.
pub fn decade_of(x: u64) -> u32 {
    let mut d = 0;
    let mut p = 1u64;
    while p < x {
        p = p.saturating_mul(10);
        d += 1;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecadeMax {
    pub decade: u32,
    /// Where the maximum was attained.
    pub x: u64,
    pub value: f64,
}

/// Per-decade maximum of `|v|`, ascending by decade. Points must be ascending in `x`.
pub fn decade_maxima<I: IntoIterator<Item = (u64, f64)>>(points: I) -> Vec<DecadeMax> {
    let mut out: Vec<DecadeMax> = Vec::new();
    for (x, v) in points {
        let d = decade_of(x);
        let v = v.abs();
        match out.last_mut() {
            Some(last) if last.decade == d => {
                if v > last.value {
                    last.value = v;
                    last.x = x;
                }
            }
            _ => out.push(DecadeMax { decade: d, x, value: v }),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trend {
    pub maxima: Vec<DecadeMax>,
    /// Number of final decades the trend is taken over.
    pub window: usize,
    /// Largest decade maximum inside the window.
    pub peak: f64,
    pub non_increasing: bool,
    pub bound: Option<f64>,
}

impl Trend {
    pub fn new(maxima: Vec<DecadeMax>, window: usize, bound: Option<f64>) -> Self {
        let tail = &maxima[maxima.len().saturating_sub(window)..];
        let non_increasing = window >= 2 && tail.len() == window && tail.windows(2).all(|w| w[1].value <= w[0].value);
        let peak = tail.iter().map(|m| m.value).fold(0.0, f64::max);
        Self {
            maxima,
            window,
            peak,
            non_increasing,
            bound,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.peak <= b)
    }

    pub fn passed(&self) -> bool {
        self.non_increasing && self.within_bound()
    }

    pub fn describe(&self) -> String {
        let maxima: Vec<String> = self
            .maxima
            .iter()
            .map(|m| format!("1e{}: {:.4e}", m.decade, m.value))
            .collect();
        let bound = match self.bound {
            Some(b) => format!(", bound {b} {}", if self.within_bound() { "held" } else { "exceeded" }),
            None => String::new(),
        };
        format!(
            "decade maxima [{}]; last {} non-increasing: {}{}",
            maxima.join(", "),
            self.window,
            if self.non_increasing { "yes" } else { "no" },
            bound
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub theorem: Theorem,
    /// For the log-weighted theorem this holds the `n - 1` progressions.
    pub spec: APSpec,
    pub grid: Vec<u64>,
    pub x_ref: u64,
    pub bound: Option<f64>,
    pub window: usize,
}

impl VerifyConfig {
    /// Number of prime variables in the sum.
    pub fn n(&self) -> usize {
        match self.theorem {
            Theorem::Thm13 { .. } => self.spec.n() + 1,
            _ => self.spec.n(),
        }
    }

    pub fn k(&self) -> u32 {
        match self.theorem {
            Theorem::Thm13 { k } => k,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyRun {
    pub config: VerifyConfig,
    pub constants: Vec<MertensConstant>,
    pub rows: Vec<ComparisonRow>,
    pub trend: Trend,
    /// Log-weighted runs only: the trend with `(loglog x)^{n-2}` in place of `(loglog x)^{n-1}`.
    pub stronger: Option<Trend>,
}

impl VerifyRun {
    /// Constants calibrated beyond the last grid point.
    pub fn hold_out(&self) -> bool {
        self.config.grid.last().is_some_and(|&x| self.config.x_ref > x)
    }

    pub fn passed(&self) -> bool {
        self.trend.passed()
    }
}

/// One constant per distinct progression of `spec`, calibrated at `x_ref`.
pub fn calibrate<S: PrefixSource + ?Sized>(src: &S, spec: &APSpec, x_ref: u64) -> Result<Vec<MertensConstant>> {
    let mut seen: Vec<Progression> = spec.pairs().to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.iter()
        .map(|p| Ok(estimate_mertens_constant(src, p.m, p.h, x_ref)?))
        .collect()
}

/// Rows evaluated in parallel, returned in grid order.
pub fn comparison_grid_par(
    src: &SharedPrefixCache,
    grid: &[u64],
    spec: &APSpec,
    constants: &[MertensConstant],
    a: &CoefficientTable,
    which: Theorem,
) -> Result<Vec<ComparisonRow>> {
    check_grid(grid, src.table().limit())?;
    Ok(grid
        .par_iter()
        .map(|&x| comparison_row(src, x, spec, constants, a, which))
        .collect::<mapl_core::Result<Vec<_>>>()?)
}

pub fn run_verify(src: &SharedPrefixCache, a: &CoefficientTable, config: VerifyConfig) -> Result<VerifyRun> {
    let constants = calibrate(src, &config.spec, config.x_ref)?;
    let rows = comparison_grid_par(src, &config.grid, &config.spec, &constants, a, config.theorem)?;
    let trend = Trend::new(
        decade_maxima(rows.iter().map(|r| (r.x, r.scaled_residual))),
        config.window,
        config.bound,
    );
    let stronger = matches!(config.theorem, Theorem::Thm13 { .. }).then(|| {
        let points = rows.iter().map(|r| (r.x, r.scaled_residual * (r.x as f64).ln().ln()));
        Trend::new(decade_maxima(points), config.window, config.bound)
    });
    Ok(VerifyRun {
        config,
        constants,
        rows,
        trend,
        stronger,
    })
}

fn abs(z: Complex64) -> f64 {
    z.re.hypot(z.im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterScan {
    pub modulus: u64,
    /// Position in `enumerate_characters(modulus)`.
    pub index: usize,
    pub order: u64,
    /// `sup |Σ_{p≤x} χ(p) log p / p|` over each decade `(10^(d-1), 10^d]`.
    pub maxima: Vec<DecadeMax>,
}

/// Exact decade suprema of the twisted sums for every non-principal character
/// of modulus `3..=m_max`, over `x` in `(10^lo, 10^hi]`.
pub fn character_scan(table: &PrimeTable, m_max: u64, lo: u32, hi: u32) -> Result<Vec<CharacterScan>> {
    let top = 10u64.pow(hi);
    table.check(top)?;
    let primes = table.primes_upto(top);
    let weights: Arc<Vec<f64>> = Arc::new(primes.par_iter().map(|&p| prime_weight(p, 1, true)).collect());
    let mut jobs = Vec::new();
    for m in 3..=m_max {
        for (index, chi) in enumerate_characters(m)?.into_iter().enumerate() {
            if !chi.is_principal() {
                jobs.push((m, index, chi));
            }
        }
    }
    Ok(jobs
        .into_par_iter()
        .map(|(modulus, index, chi)| {
            let mut maxima: Vec<DecadeMax> = (lo + 1..=hi)
                .map(|decade| DecadeMax {
                    decade,
                    x: 10u64.pow(decade - 1),
                    value: 0.0,
                })
                .collect();
            let mut previous = 0.0f64;
            let mut entered = lo;
            walk_twisted_sums(primes, &weights, &chi.value_table(), |p, s| {
                let d = decade_of(p);
                if d > lo {
                    let slot = &mut maxima[(d - lo - 1) as usize];
                    if d > entered {
                        // the sum keeps its value from 10^(d-1) up to the first prime of the decade
                        slot.value = previous;
                        entered = d;
                    }
                    let v = abs(s);
                    if v > slot.value {
                        slot.value = v;
                        slot.x = p;
                    }
                }
                previous = abs(s);
            });
            CharacterScan {
                modulus,
                index,
                order: chi.order(),
                maxima,
            }
        })
        .collect())
}
