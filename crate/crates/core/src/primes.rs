//! Segmented sieving and exact prime sums.
//!
//! The sieve works on odd numbers only, in segments of [`SEGMENT_ODDS`]
//! odd residues. Segment `i` covers the odd integers in
//! `[2*i*S + 1, 2*(i+1)*S + 1)`; segments are independent given the odd
//! base primes up to `sqrt(limit)`, so callers may sieve them in any order
//! (or in parallel) and concatenate.
//!
//! Class-restricted sums `Σ_{p≤x, p≡h (m)} log^k(p)/p` are served from
//! [`ApPrefix`] tables: the primes of the class together with compensated
//! running sums, queried by binary search.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_complex::Complex64;

use crate::arith::{gcd, isqrt, powi};
use crate::characters::DirichletCharacter;
use crate::sum::{ComplexNeumaier, Neumaier};
use crate::{Error, Result};

/// Default segment length, in odd residues.
pub const SEGMENT_ODDS: usize = 1 << 20;

/// Largest accepted sieve limit. In practice memory binds first: the table
/// stores eight bytes per prime, about 1.6 GB at `limit = 5·10^9`.
pub const MAX_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone)]
pub struct SievePlan {
    limit: u64,
    segment_odds: usize,
    base: Vec<u64>,
}

impl SievePlan {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_segment(limit, SEGMENT_ODDS)
    }

    pub fn with_segment(limit: u64, segment_odds: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::EmptyTable(limit));
        }
        if limit > MAX_LIMIT {
            return Err(Error::LimitTooLarge {
                limit,
                ceiling: MAX_LIMIT,
            });
        }
        let segment_odds = segment_odds.max(1);
        let base = small_odd_primes(isqrt(limit));
        Ok(Self {
            limit,
            segment_odds,
            base,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_count(&self) -> usize {
        // odd numbers 1, 3, ..., up to limit
        let odds = (self.limit + 1) / 2;
        odds.div_ceil(self.segment_odds as u64) as usize
    }

    /// Odd primes of segment `index`, ascending. The prime 2 is never included.
    pub fn sieve_segment(&self, index: usize) -> Vec<u64> {
        let seg = self.segment_odds as u64;
        let lo = 2 * index as u64 * seg + 1;
        let hi = (lo + 2 * seg).min(self.limit + 1); // exclusive
        if lo >= hi {
            return Vec::new();
        }
        let len = ((hi - lo + 1) / 2) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base {
            let sq = p * p;
            if sq >= hi {
                break;
            }
            let mut start = if sq >= lo { sq } else { lo.div_ceil(p) * p };
            if start % 2 == 0 {
                start += p;
            }
            let mut i = ((start - lo) / 2) as usize;
            while i < len {
                composite[i] = true;
                i += p as usize;
            }
        }
        if lo == 1 {
            composite[0] = true;
        }
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| lo + 2 * i as u64)
            .collect()
    }
}

fn small_odd_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    let mut i = 3;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += 2 * i;
            }
        }
        i += 2;
    }
    (3..=n).step_by(2).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Rough upper bound on `π(limit)` used to pre-reserve the prime vector.
pub fn prime_count_bound(limit: u64) -> u64 {
    if limit < 17 {
        return 7;
    }
    let x = limit as f64;
    (1.26 * x / libm::log(x)) as u64 + 8
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    checkpoints: Option<Vec<u64>>,
}

impl PrimeTable {
    /// Sequential segmented sieve.
    pub fn build(limit: u64) -> Result<Self> {
        let plan = SievePlan::new(limit)?;
        let mut primes = Vec::new();
        let want = prime_count_bound(limit);
        primes.try_reserve_exact(want as usize).map_err(|_| Error::Resource(want))?;
        primes.push(2);
        for i in 0..plan.segment_count() {
            primes.extend(plan.sieve_segment(i));
        }
        Ok(Self {
            limit,
            primes,
            checkpoints: None,
        })
    }

    /// Wraps an externally produced prime list (parallel sieve, disk cache).
    /// The list must be strictly increasing and lie in `[2, limit]`.
    pub fn from_primes(limit: u64, primes: Vec<u64>) -> Result<Self> {
        if limit < 2 {
            return Err(Error::EmptyTable(limit));
        }
        if limit > MAX_LIMIT {
            return Err(Error::LimitTooLarge {
                limit,
                ceiling: MAX_LIMIT,
            });
        }
        let ordered = primes.windows(2).all(|w| w[0] < w[1]);
        let in_range = primes.first().is_some_and(|&p| p == 2) && primes.last().is_some_and(|&p| p <= limit);
        if !ordered || !in_range {
            return Err(Error::Domain("prime list must be strictly increasing, start at 2 and end at or below the limit"));
        }
        Ok(Self {
            limit,
            primes,
            checkpoints: None,
        })
    }

    pub fn with_checkpoints(mut self, mut grid: Vec<u64>) -> Self {
        grid.sort_unstable();
        grid.dedup();
        self.checkpoints = Some(grid);
        self
    }

    pub fn checkpoints(&self) -> Option<&[u64]> {
        self.checkpoints.as_deref()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn into_primes(self) -> Vec<u64> {
        self.primes
    }

    /// `π(x)` for `x <= limit`.
    pub fn count_upto(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Primes `<= x`.
    pub fn primes_upto(&self, x: u64) -> &[u64] {
        &self.primes[..self.count_upto(x)]
    }

    /// Same table cut down to a smaller limit.
    pub fn truncated(&self, limit: u64) -> Result<Self> {
        self.check(limit)?;
        Self::from_primes(limit, self.primes_upto(limit).to_vec())
    }

    pub fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::OutOfRange { x, limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// `log^k(p) / p^[divide]`.
#[inline]
pub fn prime_weight(p: u64, k: u32, divide_by_p: bool) -> f64 {
    let lg = if k == 0 { 1.0 } else { powi(libm::log(p as f64), k) };
    if divide_by_p {
        lg / p as f64
    } else {
        lg
    }
}

/// Residue class plus weight exponent: identifies one [`ApPrefix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    modulus: u64,
    residue: u64,
    power: u32,
}

impl ClassKey {
    /// Validates `m >= 1`, `gcd(h, m) = 1` and reduces `h` modulo `m`.
    pub fn new(modulus: u64, residue: u64, power: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let residue = residue % modulus;
        if gcd(residue, modulus) != 1 {
            return Err(Error::NotCoprime { residue, modulus });
        }
        Ok(Self {
            modulus,
            residue,
            power,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn contains(&self, p: u64) -> bool {
        p % self.modulus == self.residue
    }

    pub fn with_power(self, power: u32) -> Self {
        Self { power, ..self }
    }
}

/// Running sums of `log^k(p)/p` over the primes of one residue class.
#[derive(Debug, Clone, PartialEq)]
pub struct ApPrefix {
    key: ClassKey,
    primes: Vec<u64>,
    cumulative: Vec<f64>,
}

impl ApPrefix {
    pub fn build(table: &PrimeTable, key: ClassKey) -> Result<Self> {
        let primes: Vec<u64> = table.primes().iter().copied().filter(|&p| key.contains(p)).collect();
        let mut cumulative = Vec::new();
        cumulative
            .try_reserve_exact(primes.len())
            .map_err(|_| Error::Resource(primes.len() as u64))?;
        let mut acc = Neumaier::new();
        for &p in &primes {
            acc.add(prime_weight(p, key.power, true));
            cumulative.push(acc.value());
        }
        Ok(Self { key, primes, cumulative })
    }

    pub fn key(&self) -> ClassKey {
        self.key
    }

    /// Primes of the class, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Class sum over `p <= x`. Callers check `x` against the table limit.
    #[inline]
    pub fn value_at(&self, x: u64) -> f64 {
        match self.primes.partition_point(|&p| p <= x) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }
}

/// A prime table together with a way to obtain class prefix sums.
///
/// `mapl` provides a thread-safe cached implementation; [`LocalPrefixCache`]
/// is the single-threaded one available without `std`.
pub trait PrefixSource {
    fn table(&self) -> &PrimeTable;
    fn prefix(&self, key: ClassKey) -> Result<Arc<ApPrefix>>;
}

#[derive(Debug)]
pub struct LocalPrefixCache<'a> {
    table: &'a PrimeTable,
    cache: RefCell<BTreeMap<ClassKey, Arc<ApPrefix>>>,
}

impl<'a> LocalPrefixCache<'a> {
    pub fn new(table: &'a PrimeTable) -> Self {
        Self {
            table,
            cache: RefCell::new(BTreeMap::new()),
        }
    }
}

impl PrefixSource for LocalPrefixCache<'_> {
    fn table(&self) -> &PrimeTable {
        self.table
    }

    fn prefix(&self, key: ClassKey) -> Result<Arc<ApPrefix>> {
        if let Some(p) = self.cache.borrow().get(&key) {
            return Ok(p.clone());
        }
        let built = Arc::new(ApPrefix::build(self.table, key)?);
        self.cache.borrow_mut().insert(key, built.clone());
        Ok(built)
    }
}

/// `Σ_{p≤x, p≡h (mod m)} log^k(p)/p`.
pub fn logk_recip_sum_ap<S: PrefixSource + ?Sized>(src: &S, x: u64, k: u32, m: u64, h: u64) -> Result<f64> {
    let key = ClassKey::new(m, h, k)?;
    src.table().check(x)?;
    Ok(src.prefix(key)?.value_at(x))
}

/// `Σ_{p≤x} χ(p) log^k(p) / p^[divide_by_p]`, by direct summation.
pub fn char_prime_sum(table: &PrimeTable, x: u64, chi: &DirichletCharacter, k: u32, divide_by_p: bool) -> Result<Complex64> {
    table.check(x)?;
    let values = chi.value_table();
    let m = chi.modulus();
    let mut acc = ComplexNeumaier::new();
    for &p in table.primes_upto(x) {
        let v = values[(p % m) as usize];
        if v.re != 0.0 || v.im != 0.0 {
            acc.add(v * prime_weight(p, k, divide_by_p));
        }
    }
    Ok(acc.value())
}

/// Streams the running twisted sum `Σ_{q≤p} χ(q) w_q` after each prime `p`,
/// with weights precomputed by the caller (`weights[i]` belongs to `primes[i]`)
/// and `values[r] = χ(r)` for `r < modulus`.
pub fn walk_twisted_sums<F>(primes: &[u64], weights: &[f64], values: &[Complex64], mut visit: F)
where
    F: FnMut(u64, Complex64),
{
    let m = values.len() as u64;
    let mut acc = ComplexNeumaier::new();
    for (&p, &w) in primes.iter().zip(weights) {
        let v = values[(p % m) as usize];
        if v.re != 0.0 || v.im != 0.0 {
            acc.add(v * w);
        }
        visit(p, acc.value());
    }
}
