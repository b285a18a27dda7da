//! Exact multiple prime sums
//!
//! `Σ_n(x) = Π φ(m_i) Σ_{p_1⋯p_n ≤ x, p_i ≡ h_i (m_i)} 1/(p_1⋯p_n)`
//!
//! over ordered tuples, by direct enumeration and by the hyperbola method,
//! together with the asymptotic predictions they are compared against.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{binomial_f64, isqrt, powi, totient};
use crate::coeffs::CoefficientTable;
use crate::mertens::MertensConstant;
use crate::primes::{prime_weight, ApPrefix, ClassKey, PrefixSource};
use crate::sum::Neumaier;
use crate::sympoly::{build_q, elem_sym, poly_deriv_eval, ShiftSet};
use crate::{Error, Result};

/// Predictions are refused below this point so that `loglog x > 0`.
pub const MIN_PREDICTION_X: u64 = 16;

pub const BRUTEFORCE_MAX_N: usize = 3;
pub const HYPERBOLA_MAX_N: usize = 4;

/// One congruence condition `p ≡ h (mod m)`, `h` reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    pub h: u64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct APSpec {
    pairs: Vec<Progression>,
}

impl APSpec {
    /// `pairs[i] = (h_i, m_i)`.
    pub fn new(pairs: &[(u64, u64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain("at least one progression is required"));
        }
        let pairs = pairs
            .iter()
            .map(|&(h, m)| {
                let key = ClassKey::new(m, h, 0)?;
                Ok(Progression {
                    h: key.residue(),
                    m: key.modulus(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pairs })
    }

    /// `n` copies of the trivial progression.
    pub fn trivial(n: usize) -> Self {
        Self {
            pairs: vec![Progression { h: 0, m: 1 }; n],
        }
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[Progression] {
        &self.pairs
    }

    pub fn phi_product(&self) -> f64 {
        self.pairs.iter().map(|p| totient(p.m) as f64).product()
    }

    fn keys(&self, power: u32) -> Vec<ClassKey> {
        self.pairs
            .iter()
            .map(|p| ClassKey::new(p.m, p.h, power).expect("validated on construction"))
            .collect()
    }
}

fn prefixes<S: PrefixSource + ?Sized>(src: &S, spec: &APSpec, power: u32) -> Result<Vec<Arc<ApPrefix>>> {
    spec.keys(power).into_iter().map(|k| src.prefix(k)).collect()
}

/// Depth-first walk over ordered tuples `(q_1, ..., q_r)`, `q_i` from `classes[i]`,
/// with `Π q_i ≤ bound`, calling `visit(Π q_i, Π 1/q_i)`.
fn walk_tuples<F: FnMut(u64, f64)>(classes: &[&[u64]], bound: u64, product: u64, weight: f64, visit: &mut F) {
    match classes.split_first() {
        None => visit(product, weight),
        Some((first, rest)) => {
            // every later coordinate is at least 2
            let room = bound / product >> rest.len();
            for &q in first.iter().take_while(|&&q| q <= room) {
                walk_tuples(rest, bound, product * q, weight / q as f64, visit);
            }
        }
    }
}

/// `Σ_{q_1⋯q_{n-1}·p ≤ x} Π 1/q_i · (prefix of the last class at x/Π q_i)`.
fn tuple_then_prefix(classes: &[&[u64]], last: &ApPrefix, x: u64) -> f64 {
    let mut acc = Neumaier::new();
    walk_tuples(classes, x / 2, 1, 1.0, &mut |prod, w| {
        acc.add(w * last.value_at(x / prod));
    });
    acc.value()
}

/// Ordered-tuple enumeration with a prefix lookup for the last prime; `n <= 3`.
pub fn multisum_bruteforce<S: PrefixSource + ?Sized>(src: &S, x: u64, spec: &APSpec) -> Result<f64> {
    if spec.n() > BRUTEFORCE_MAX_N {
        return Err(Error::TooManyVariables {
            n: spec.n(),
            max: BRUTEFORCE_MAX_N,
            algorithm: "brute force (use the hyperbola method)",
        });
    }
    src.table().check(x)?;
    let pre = prefixes(src, spec, 0)?;
    let (last, head) = pre.split_last().expect("n >= 1");
    let classes: Vec<&[u64]> = head.iter().map(|p| p.primes()).collect();
    Ok(spec.phi_product() * tuple_then_prefix(&classes, last, x))
}

/// The three pieces of the hyperbola split at `y = ⌊√x⌋`, without the `Π φ(m_i)` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaBreakdown {
    /// `Σ_{p≤y} f_n(p) σ_{n-1}(x/p)`.
    pub a: f64,
    /// `Σ_{P≤x/y} F(P) S_n(x/P)`.
    pub b: f64,
    /// `S_n(y) σ_{n-1}(x/y)`.
    pub c: f64,
    /// `Π φ(m_i) (a + b - c)`.
    pub total: f64,
}

/// `σ_r(z)`: the unnormalised sum over the first `r = classes.len()` progressions.
fn sigma(classes: &[Arc<ApPrefix>], z: u64) -> f64 {
    match classes.len() {
        0 => {
            if z >= 1 {
                1.0
            } else {
                0.0
            }
        }
        1 => classes[0].value_at(z),
        _ => hyperbola_split(classes, z).map_or(0.0, |b| b.a + b.b - b.c),
    }
}

fn hyperbola_split(classes: &[Arc<ApPrefix>], x: u64) -> Option<HyperbolaBreakdown> {
    if x < 2 {
        return None;
    }
    let (last, head) = classes.split_last().expect("n >= 2");
    let y = isqrt(x);
    let xy = x / y;
    let mut a = Neumaier::new();
    for &p in last.primes().iter().take_while(|&&p| p <= y) {
        a.add(sigma(head, x / p) / p as f64);
    }
    let mut b = Neumaier::new();
    let head_primes: Vec<&[u64]> = head.iter().map(|p| p.primes()).collect();
    walk_tuples(&head_primes, xy, 1, 1.0, &mut |prod, w| {
        b.add(w * last.value_at(x / prod));
    });
    let c = last.value_at(y) * sigma(head, xy);
    Some(HyperbolaBreakdown {
        a: a.value(),
        b: b.value(),
        c,
        total: 0.0,
    })
}

/// `Σ_n(x)` via the hyperbola split with `y = ⌊√x⌋`, applied recursively to the
/// `(n-1)`-variable sums; `n <= 4`.
pub fn multisum_hyperbola_breakdown<S: PrefixSource + ?Sized>(src: &S, x: u64, spec: &APSpec) -> Result<HyperbolaBreakdown> {
    if spec.n() > HYPERBOLA_MAX_N {
        return Err(Error::TooManyVariables {
            n: spec.n(),
            max: HYPERBOLA_MAX_N,
            algorithm: "the hyperbola method",
        });
    }
    src.table().check(x)?;
    let pre = prefixes(src, spec, 0)?;
    let phi = spec.phi_product();
    if pre.len() == 1 {
        let s = pre[0].value_at(x);
        return Ok(HyperbolaBreakdown {
            a: s,
            b: 0.0,
            c: 0.0,
            total: phi * s,
        });
    }
    let mut out = hyperbola_split(&pre, x).unwrap_or(HyperbolaBreakdown {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        total: 0.0,
    });
    out.total = phi * (out.a + out.b - out.c);
    Ok(out)
}

pub fn multisum_hyperbola<S: PrefixSource + ?Sized>(src: &S, x: u64, spec: &APSpec) -> Result<f64> {
    multisum_hyperbola_breakdown(src, x, spec).map(|b| b.total)
}

/// `Π φ(m_i) Σ_{p_1⋯p_r ≤ x} log^k(p_1⋯p_r)/(p_1⋯p_r)` for `r = spec.n() <= 2`.
pub fn logk_multisum_bruteforce<S: PrefixSource + ?Sized>(src: &S, x: u64, k: u32, spec: &APSpec) -> Result<f64> {
    if spec.n() > 2 {
        return Err(Error::TooManyVariables {
            n: spec.n(),
            max: 2,
            algorithm: "the log-weighted brute force",
        });
    }
    src.table().check(x)?;
    let phi = spec.phi_product();
    match spec.n() {
        1 => Ok(phi * prefixes(src, spec, k)?[0].value_at(x)),
        _ => {
            // log^k(p q) = Σ_j C(k, j) log^{k-j}(p) log^j(q)
            let first = src.prefix(spec.keys(0)[0])?;
            let second: Vec<Arc<ApPrefix>> = (0..=k)
                .map(|j| src.prefix(spec.keys(j)[1]))
                .collect::<Result<_>>()?;
            let mut acc = Neumaier::new();
            for &p in first.primes().iter().take_while(|&&p| p <= x / 2) {
                let lp = libm::log(p as f64);
                let z = x / p;
                let mut inner = Neumaier::new();
                for (j, s) in second.iter().enumerate() {
                    let j = j as u32;
                    inner.add(binomial_f64(k as usize, j as usize) * powi(lp, k - j) * s.value_at(z));
                }
                acc.add(inner.value() / p as f64);
            }
            Ok(phi * acc.value())
        }
    }
}

fn lookup(constants: &[MertensConstant], p: Progression) -> Result<&MertensConstant> {
    constants
        .iter()
        .find(|c| c.matches(p.h, p.m))
        .ok_or(Error::MissingConstant {
            residue: p.h,
            modulus: p.m,
        })
}

/// `C_i = φ(m_i) A_{h_i,m_i}` for every progression of `spec`.
pub fn shift_set(spec: &APSpec, constants: &[MertensConstant]) -> Result<ShiftSet> {
    let values = spec
        .pairs()
        .iter()
        .map(|&p| lookup(constants, p).map(MertensConstant::shift))
        .collect::<Result<Vec<_>>>()?;
    let sources = spec.pairs().iter().map(|p| (p.h, p.m)).collect();
    ShiftSet::new(values, sources)
}

fn log_loglog(x: u64) -> Result<(f64, f64)> {
    if x < MIN_PREDICTION_X {
        return Err(Error::TooSmallForPrediction(x));
    }
    let l = libm::log(x as f64);
    Ok((l, libm::log(l)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub x: u64,
    /// `τ_n(x)`.
    pub main: f64,
    /// `(j, a_{n-j} τ_j(x))` for `j = 0..=n-2`.
    pub corrections: Vec<(usize, f64)>,
    pub total: f64,
    /// `(loglog x)^{n-1} / log x`.
    pub error_scale: f64,
}

/// `τ_n(x) + Σ_{j=0}^{n-2} a_{n-j} τ_j(x)` with `τ_j = e_j(loglog x + C_i)`.
pub fn predict_thm14(x: u64, spec: &APSpec, constants: &[MertensConstant], a: &CoefficientTable) -> Result<Prediction> {
    let (l, ll) = log_loglog(x)?;
    let n = spec.n();
    if (a.k_max() as usize) < n {
        return Err(Error::Domain("coefficient table shorter than n"));
    }
    let shifts = shift_set(spec, constants)?;
    let tau = elem_sym(&shifts.shifted(ll));
    let main = tau[n];
    let corrections: Vec<(usize, f64)> = (0..n.saturating_sub(1))
        .map(|j| (j, a.get((n - j) as u32) * tau[j]))
        .collect();
    let mut acc = Neumaier::new();
    acc.add(main);
    for &(_, c) in &corrections {
        acc.add(c);
    }
    Ok(Prediction {
        x,
        main,
        corrections,
        total: acc.value(),
        error_scale: powi(ll, n as u32 - 1) / l,
    })
}

/// `log^k x Σ_{h=1}^{n-1} (-1)^{h-1} k^{-h} Q_{n-1}^{(h)}(loglog x)` where `spec`
/// carries the `n - 1` progressions.
pub fn predict_thm13(x: u64, k: u32, spec: &APSpec, constants: &[MertensConstant], a: &CoefficientTable) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("the log-weighted expansion needs k >= 1"));
    }
    let (l, ll) = log_loglog(x)?;
    let n1 = spec.n();
    let shifts = shift_set(spec, constants)?;
    let q = build_q(&shifts.mu(), a, n1)?;
    let kf = k as f64;
    let mut acc = Neumaier::new();
    for h in 1..=n1 {
        let sign = if h % 2 == 1 { 1.0 } else { -1.0 };
        acc.add(sign * poly_deriv_eval(&q, h, ll) / powi(kf, h as u32));
    }
    Ok(powi(l, k) * acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Single progression, `1/log x` error.
    Thm11,
    /// Log-weighted sum over `spec.n()` progressions with exponent `k`.
    Thm13 { k: u32 },
    /// Unweighted `n`-fold sum.
    Thm14,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Thm11 => "1.1",
            Theorem::Thm13 { .. } => "1.3",
            Theorem::Thm14 => "1.4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub x: u64,
    pub empirical: f64,
    pub predicted: f64,
    pub residual: f64,
    pub scaled_residual: f64,
}

impl ComparisonRow {
    fn new(x: u64, empirical: f64, predicted: f64, scale: f64) -> Self {
        let residual = empirical - predicted;
        Self {
            x,
            empirical,
            predicted,
            residual,
            scaled_residual: residual / scale,
        }
    }
}

/// One grid point, see [`comparison_grid`].
pub fn comparison_row<S: PrefixSource + ?Sized>(
    src: &S,
    x: u64,
    spec: &APSpec,
    constants: &[MertensConstant],
    a: &CoefficientTable,
    which: Theorem,
) -> Result<ComparisonRow> {
    let (l, ll) = log_loglog(x)?;
    match which {
        Theorem::Thm11 => {
            if spec.n() != 1 {
                return Err(Error::Domain("the single-class comparison takes one progression"));
            }
            let p = spec.pairs()[0];
            let c = lookup(constants, p)?;
            let empirical = src.prefix(spec.keys(0)[0])?.value_at(x);
            src.table().check(x)?;
            let predicted = ll / totient(p.m) as f64 + c.value;
            Ok(ComparisonRow::new(x, empirical, predicted, 1.0 / l))
        }
        Theorem::Thm13 { k } => {
            let empirical = logk_multisum_bruteforce(src, x, k, spec)?;
            let predicted = predict_thm13(x, k, spec, constants, a)?;
            let n = spec.n() + 1;
            let scale = powi(l, k - 1) * powi(ll, n as u32 - 1);
            Ok(ComparisonRow::new(x, empirical, predicted, scale))
        }
        Theorem::Thm14 => {
            let empirical = multisum_hyperbola(src, x, spec)?;
            let p = predict_thm14(x, spec, constants, a)?;
            Ok(ComparisonRow::new(x, empirical, p.total, p.error_scale))
        }
    }
}

/// Empirical sum against the prediction at every grid point, in grid order.
/// `scaled_residual` divides by the theorem's error factor: `1/log x`,
/// `log^{k-1} x (loglog x)^{n-1}` or `(loglog x)^{n-1}/log x`.
pub fn comparison_grid<S: PrefixSource + ?Sized>(
    src: &S,
    grid: &[u64],
    spec: &APSpec,
    constants: &[MertensConstant],
    a: &CoefficientTable,
    which: Theorem,
) -> Result<Vec<ComparisonRow>> {
    check_grid(grid, src.table().limit())?;
    grid.iter()
        .map(|&x| comparison_row(src, x, spec, constants, a, which))
        .collect()
}

/// Grids must be strictly ascending and within the sieve limit.
pub fn check_grid(grid: &[u64], limit: u64) -> Result<()> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly ascending"));
    }
    if let Some(&x) = grid.last() {
        if x > limit {
            return Err(Error::OutOfRange { x, limit });
        }
    }
    Ok(())
}

/// `Σ_{p≤x, p≡h} log^k(p)/p` without the `φ(m)` factor, by direct loop over the class.
pub fn class_log_sum_direct(primes: &[u64], x: u64, k: u32, p: Progression) -> f64 {
    primes
        .iter()
        .take_while(|&&q| q <= x)
        .filter(|&&q| q % p.m == p.h)
        .map(|&q| prime_weight(q, k, true))
        .collect::<Neumaier>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{ak_table, Method};
    use crate::primes::{logk_recip_sum_ap, LocalPrefixCache, PrimeTable};
    use crate::special::ConstantsCache;

    fn spec(pairs: &[(u64, u64)]) -> APSpec {
        APSpec::new(pairs).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(APSpec::new(&[]).is_err());
        assert!(matches!(
            APSpec::new(&[(2, 4)]),
            Err(Error::NotCoprime { residue: 2, modulus: 4 })
        ));
        assert!(matches!(APSpec::new(&[(1, 0)]), Err(Error::ZeroModulus)));
        assert_eq!(spec(&[(7, 4)]).pairs()[0], Progression { h: 3, m: 4 });
        assert_eq!(spec(&[(1, 4), (2, 3)]).phi_product(), 4.0);
    }

    #[test]
    fn small_examples() {
        let t = PrimeTable::build(1000).unwrap();
        let c = LocalPrefixCache::new(&t);
        let two = APSpec::trivial(2);
        let expect = 0.25 + 2.0 / 6.0 + 1.0 / 9.0 + 2.0 / 10.0;
        assert!((multisum_bruteforce(&c, 10, &two).unwrap() - expect).abs() < 1e-15);
        assert!((multisum_hyperbola(&c, 10, &two).unwrap() - expect).abs() < 1e-15);
        let one = spec(&[(3, 4)]);
        let direct = 2.0 * logk_recip_sum_ap(&c, 500, 0, 4, 3).unwrap();
        assert_eq!(multisum_bruteforce(&c, 500, &one).unwrap(), direct);
        assert_eq!(multisum_hyperbola(&c, 500, &one).unwrap(), direct);
        assert!(multisum_bruteforce(&c, 100, &APSpec::trivial(4)).is_err());
        assert!(multisum_hyperbola(&c, 100, &APSpec::trivial(5)).is_err());
        assert!(multisum_bruteforce(&c, 1001, &two).is_err());
    }

    #[test]
    fn four_by_four_pairs_at_one_hundred() {
        // p, q ≡ 1 (mod 4), pq ≤ 100: (5,5), (5,13), (13,5), (5,17), (17,5)
        let t = PrimeTable::build(1000).unwrap();
        let c = LocalPrefixCache::new(&t);
        let s = spec(&[(1, 4), (1, 4)]);
        let expect = 4.0 * (1.0 / 25.0 + 2.0 / 65.0 + 2.0 / 85.0);
        assert!((multisum_bruteforce(&c, 100, &s).unwrap() - expect).abs() < 1e-15);
        assert!((multisum_bruteforce(&c, 100, &s).unwrap() - 0.3772).abs() < 1e-4);
    }

    #[test]
    fn hyperbola_matches_bruteforce_for_three() {
        let t = PrimeTable::build(1_000_000).unwrap();
        let c = LocalPrefixCache::new(&t);
        let three = APSpec::trivial(3);
        let x = 1_000_000;
        let b = multisum_bruteforce(&c, x, &three).unwrap();
        let h = multisum_hyperbola(&c, x, &three).unwrap();
        assert!(((b - h) / b).abs() < 1e-9, "{b} vs {h}");
        let br = multisum_hyperbola_breakdown(&c, x, &three).unwrap();
        assert!((br.total - (br.a + br.b - br.c)).abs() < 1e-12 * br.total);
    }

    #[test]
    fn four_variables_against_nested_enumeration() {
        let t = PrimeTable::build(20_000).unwrap();
        let c = LocalPrefixCache::new(&t);
        let s = spec(&[(1, 1), (1, 3), (1, 1), (3, 4)]);
        let x = 20_000;
        let pre = prefixes(&c, &s, 0).unwrap();
        let classes: Vec<&[u64]> = pre.iter().map(|p| p.primes()).collect();
        let mut acc = Neumaier::new();
        walk_tuples(&classes, x, 1, 1.0, &mut |_, w| acc.add(w));
        let oracle = s.phi_product() * acc.value();
        let h = multisum_hyperbola(&c, x, &s).unwrap();
        assert!(((h - oracle) / oracle).abs() < 1e-12);
    }

    #[test]
    fn log_weighted_examples() {
        let t = PrimeTable::build(100).unwrap();
        let c = LocalPrefixCache::new(&t);
        let ln = |v: f64| v.ln();
        let one = APSpec::trivial(1);
        let expect = ln(2.0) / 2.0 + ln(3.0) / 3.0 + ln(5.0) / 5.0 + ln(7.0) / 7.0;
        assert!((logk_multisum_bruteforce(&c, 10, 1, &one).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 1.3127).abs() < 1e-4);
        let two = APSpec::trivial(2);
        let pairs = ln(4.0) / 4.0 + 2.0 * ln(6.0) / 6.0 + ln(9.0) / 9.0 + 2.0 * ln(10.0) / 10.0;
        assert!((logk_multisum_bruteforce(&c, 10, 1, &two).unwrap() - pairs).abs() < 1e-14);
        for x in [10, 50, 100] {
            assert_eq!(
                logk_multisum_bruteforce(&c, x, 0, &two).unwrap(),
                multisum_bruteforce(&c, x, &two).unwrap()
            );
        }
        assert!(logk_multisum_bruteforce(&c, 10, 1, &APSpec::trivial(3)).is_err());
    }

    fn constant(m: u64, h: u64, value: f64) -> MertensConstant {
        MertensConstant {
            m,
            h,
            value,
            x_ref: 100_000_000,
            uncertainty: 0.0,
        }
    }

    #[test]
    fn prediction_structure() {
        let cache = ConstantsCache::default();
        let a = ak_table(8, Method::Recurrence, &cache).unwrap();
        let big_a = 0.261_497_212_847_642_8;
        let k = [constant(1, 0, big_a)];
        let x = 1_000_000u64;
        let ll = (x as f64).ln().ln();
        let p1 = predict_thm14(x, &APSpec::trivial(1), &k, &a).unwrap();
        assert_eq!(p1.total, ll + big_a);
        assert!(p1.corrections.is_empty());
        // loglog x = 1 at x = e^e; use the polynomial directly
        let p2 = predict_thm14(x, &APSpec::trivial(2), &k, &a).unwrap();
        assert!((p2.total - ((ll + big_a).powi(2) - cache.zeta(2))).abs() < 1e-13);
        assert!(((1.0 + big_a).powi(2) - cache.zeta(2) + 0.0536).abs() < 1e-4);
        let p3 = predict_thm14(x, &APSpec::trivial(3), &k, &a).unwrap();
        assert_eq!(p3.corrections.len(), 2);
        let y = ll + big_a;
        let expect = y.powi(3) + a.get(3) + a.get(2) * 3.0 * y;
        assert!((p3.total - expect).abs() < 1e-12);
        assert!((p3.total - p3.main - p3.corrections.iter().map(|c| c.1).sum::<f64>()).abs() < 1e-12);
        assert!(matches!(
            predict_thm14(15, &APSpec::trivial(1), &k, &a),
            Err(Error::TooSmallForPrediction(15))
        ));
        assert!(matches!(
            predict_thm14(100, &spec(&[(1, 3)]), &k, &a),
            Err(Error::MissingConstant { residue: 1, modulus: 3 })
        ));
    }

    #[test]
    fn prediction_is_symmetric() {
        let cache = ConstantsCache::default();
        let a = ak_table(8, Method::Recurrence, &cache).unwrap();
        let k = [constant(4, 1, -0.3), constant(4, 3, 0.1), constant(3, 2, 0.05)];
        let s1 = spec(&[(1, 4), (3, 4), (2, 3)]);
        let s2 = spec(&[(2, 3), (1, 4), (3, 4)]);
        let p1 = predict_thm14(123_456, &s1, &k, &a).unwrap();
        let p2 = predict_thm14(123_456, &s2, &k, &a).unwrap();
        assert!((p1.total - p2.total).abs() <= 1e-15 * p1.total.abs());
    }

    #[test]
    fn log_weighted_prediction() {
        let cache = ConstantsCache::default();
        let a = ak_table(8, Method::Recurrence, &cache).unwrap();
        let k = [constant(1, 0, 0.26)];
        let x = 1_000_000u64;
        let l = (x as f64).ln();
        let one = APSpec::trivial(1);
        assert!((predict_thm13(x, 1, &one, &k, &a).unwrap() - l).abs() < 1e-12);
        assert!((predict_thm13(x, 2, &one, &k, &a).unwrap() - l * l / 2.0).abs() < 1e-10);
        assert!(predict_thm13(x, 0, &one, &k, &a).is_err());
    }

    #[test]
    fn grid_checks() {
        assert!(check_grid(&[10, 100, 1000], 1000).is_ok());
        assert!(check_grid(&[10, 10], 1000).is_err());
        assert!(check_grid(&[100, 10], 1000).is_err());
        assert!(check_grid(&[10, 2000], 1000).is_err());
    }

    #[test]
    fn comparison_residual_is_exact_difference() {
        let t = PrimeTable::build(200_000).unwrap();
        let c = LocalPrefixCache::new(&t);
        let cache = ConstantsCache::default();
        let a = ak_table(8, Method::Recurrence, &cache).unwrap();
        let k = crate::mertens::estimate_all_residues(&c, 1, 200_000).unwrap();
        for which in [Theorem::Thm11, Theorem::Thm13 { k: 2 }, Theorem::Thm14] {
            let rows = comparison_grid(&c, &[1000, 10_000, 200_000], &APSpec::trivial(1), &k, &a, which).unwrap();
            for r in rows {
                assert_eq!(r.residual, r.empirical - r.predicted);
            }
        }
        let r = comparison_row(&c, 200_000, &APSpec::trivial(1), &k, &a, Theorem::Thm11).unwrap();
        assert!(r.residual.abs() < 1e-15);
    }
}
