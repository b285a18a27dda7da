//! Randomized and exact identity suites behind the `identities` subcommand.

use mapl_core::coeffs::{ak_closed_loop_rhs, ak_convolution_rhs, ak_table, Method};
use mapl_core::special::{mertens_integral_closed, mertens_integral_closed_falling, mertens_integral_quadrature, ConstantsCache};
use mapl_core::sympoly::{elem_sym, prop3_both_sides, tau_from_mu, tau_shift};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::Table;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRow {
    pub name: &'static str,
    pub trials: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl IdentityRow {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn floats(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
    let n = rng.gen_range(1..=max_len);
    (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect()
}

fn ints(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<i128> {
    let n = rng.gen_range(1..=max_len);
    (0..n).map(|_| rng.gen_range(-30..=30)).collect()
}

fn exact(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::INFINITY
    }
}

fn row(name: &'static str, trials: usize, tolerance: f64, errors: impl Iterator<Item = f64>) -> IdentityRow {
    IdentityRow {
        name,
        trials,
        max_error: errors.fold(0.0, f64::max),
        tolerance,
    }
}

fn translation(v: &[f64], z: f64) -> f64 {
    let shifted: Vec<f64> = v.iter().map(|c| c + z).collect();
    let via = tau_shift(&elem_sym(v), z, v.len()).expect("lengths agree");
    elem_sym(&shifted).iter().zip(&via).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max)
}

fn tau_mu(c: &[f64], y: f64) -> f64 {
    let mu = elem_sym(c);
    let tau = elem_sym(&c.iter().map(|ci| y + ci).collect::<Vec<_>>());
    tau.iter()
        .enumerate()
        .map(|(k, t)| rel(*t, tau_from_mu(&mu, y, k, c.len()).expect("k <= n")))
        .fold(0.0, f64::max)
}

fn subsets(y: &[f64]) -> f64 {
    (1..=y.len())
        .map(|j| {
            let (l, r) = prop3_both_sides(y, j).expect("1 <= j <= n - 1");
            rel(l, r)
        })
        .fold(0.0, f64::max)
}

/// Every suite, in a fixed order. `trials` drives the randomized ones; the
/// subset identity, which enumerates all subsets, runs a quarter as many.
pub fn run_identities(trials: usize, seed: u64) -> Result<Vec<IdentityRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();

    let samples: Vec<(Vec<f64>, f64)> = (0..trials).map(|_| (floats(&mut rng, 6), rng.gen_range(-2.0..2.0))).collect();
    rows.push(row("tau_shift translation", trials, 1e-11, samples.iter().map(|(v, z)| translation(v, *z))));
    rows.push(row("tau/mu relation", trials, 1e-11, samples.iter().map(|(v, y)| tau_mu(v, *y))));
    let few = trials.div_ceil(4);
    let sub: Vec<Vec<f64>> = (0..few).map(|_| floats(&mut rng, 7)).collect();
    rows.push(row("subset identity", few, 1e-11, sub.iter().map(|y| subsets(y))));

    let exact_samples: Vec<(Vec<i128>, i128)> = (0..trials).map(|_| (ints(&mut rng, 6), rng.gen_range(-30..=30))).collect();
    rows.push(row(
        "tau_shift translation (exact)",
        trials,
        0.0,
        exact_samples.iter().map(|(v, z)| {
            let shifted: Vec<i128> = v.iter().map(|c| c + z).collect();
            exact(elem_sym(&shifted) == tau_shift(&elem_sym(v), *z, v.len()).expect("lengths agree"))
        }),
    ));
    rows.push(row(
        "tau/mu relation (exact)",
        trials,
        0.0,
        exact_samples.iter().map(|(c, y)| {
            let mu = elem_sym(c);
            let tau = elem_sym(&c.iter().map(|ci| y + ci).collect::<Vec<_>>());
            exact(tau.iter().enumerate().all(|(k, t)| *t == tau_from_mu(&mu, *y, k, c.len()).expect("k <= n")))
        }),
    ));
    let exact_sub: Vec<Vec<i128>> = (0..few).map(|_| ints(&mut rng, 7)).collect();
    rows.push(row(
        "subset identity (exact)",
        few,
        0.0,
        exact_sub.iter().map(|y| {
            exact((1..=y.len()).all(|j| {
                let (l, r) = prop3_both_sides(y, j).expect("1 <= j <= n - 1");
                l == r
            }))
        }),
    ));

    let cache = ConstantsCache::default();
    let tables: Vec<_> = Method::ALL
        .iter()
        .map(|&m| ak_table(20, m, &cache))
        .collect::<mapl_core::Result<_>>()?;
    rows.push(row(
        "a_k triple agreement, k <= 20",
        21,
        1e-10,
        (0..=20).map(|k| {
            let v: Vec<f64> = tables.iter().map(|t| t.get(k)).collect();
            let spread = v.iter().fold(f64::MIN, |a, &b| a.max(b)) - v.iter().fold(f64::MAX, |a, &b| a.min(b));
            spread / v[0].abs().max(1.0)
        }),
    ));
    let a = &tables[0];
    let spot = [
        (a.get(0) - 1.0).abs(),
        a.get(1).abs(),
        (a.get(2) + cache.zeta(2)).abs(),
        (a.get(3) - 2.0 * cache.zeta(3)).abs(),
        (a.get(4) - (-6.0 * cache.zeta(4) + 3.0 * cache.zeta(2).powi(2))).abs(),
    ];
    rows.push(row("a_0..a_4 spot values", 5, 1e-12, spot.into_iter()));
    rows.push(row(
        "convolution form = a_(k+1), k = 2..15",
        14,
        1e-11,
        (2..=15).map(|k| rel(ak_convolution_rhs(k, a, &cache).expect("k <= 20"), a.get(k + 1))),
    ));

    let quad: Vec<f64> = (1..=8)
        .map(|m| Ok(mertens_integral_quadrature(m)?.value))
        .collect::<mapl_core::Result<_>>()?;
    let closed = |f: fn(u32, &ConstantsCache) -> mapl_core::Result<f64>| -> Result<Vec<f64>> {
        Ok((1..=8).map(|m| f(m, &cache)).collect::<mapl_core::Result<_>>()?)
    };
    let printed = closed(mertens_integral_closed)?;
    let falling = closed(mertens_integral_closed_falling)?;
    rows.push(row(
        "Mertens integral, printed closed form vs quadrature",
        8,
        1e-9,
        printed.iter().zip(&quad).map(|(c, q)| (c - q).abs()),
    ));
    rows.push(row(
        "Mertens integral, falling-factorial form vs quadrature",
        8,
        1e-9,
        falling.iter().zip(&quad).map(|(c, q)| (c - q).abs()),
    ));
    rows.push(row(
        "closed form at m = 1 equals -Li_2(1/2)",
        1,
        1e-12,
        std::iter::once((printed[0] + cache.li_half(2)).abs()),
    ));
    let closed_loop = (2..=10)
        .map(|k| {
            let rhs = ak_closed_loop_rhs(k, a, &cache, |r| mertens_integral_closed(r, &cache))?;
            Ok((rhs - a.get(k)).abs())
        })
        .collect::<mapl_core::Result<Vec<f64>>>()?;
    rows.push(row("coefficient closed loop, k = 2..10", 9, 1e-9, closed_loop.into_iter()));
    Ok(rows)
}

pub fn identity_table(rows: &[IdentityRow]) -> Table {
    let mut t = Table::new(&["identity", "trials", "max_error", "tolerance", "pass"]);
    for r in rows {
        t.push(vec![r.name.into(), (r.trials as u64).into(), r.max_error.into(), r.tolerance.into(), r.passed().into()]);
    }
    t
}
