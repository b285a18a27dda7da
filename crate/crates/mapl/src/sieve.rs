//! Segment-parallel sieve. Segments are sieved independently on the rayon
//! pool and concatenated in index order, so the table does not depend on the
//! thread count.

use mapl_core::primes::{PrimeTable, SievePlan};
use rayon::prelude::*;

use crate::Result;

pub fn build_prime_table(limit: u64) -> Result<PrimeTable> {
    build_with_plan(SievePlan::new(limit)?)
}

pub fn build_with_plan(plan: SievePlan) -> Result<PrimeTable> {
    let segments: Vec<Vec<u64>> = (0..plan.segment_count())
        .into_par_iter()
        .map(|i| plan.sieve_segment(i))
        .collect();
    let total = 1 + segments.iter().map(Vec::len).sum::<usize>();
    let mut primes = Vec::new();
    primes
        .try_reserve_exact(total)
        .map_err(|_| mapl_core::Error::Resource(total as u64))?;
    primes.push(2);
    for s in segments {
        primes.extend_from_slice(&s);
    }
    Ok(PrimeTable::from_primes(plan.limit(), primes)?)
}
