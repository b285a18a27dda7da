//! Evaluation grids: `start:stop:decade`, `start:stop:decade:S` (S log-spaced
//! points per decade) and `start:stop:linear:N`.

use crate::{Error, Result};

/// Integer from `1e5`, `250000`, `2.5e6`.
pub fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let bad = || Error::usage(format!("`{s}` is not a non-negative integer"));
    let v: f64 = s.parse().map_err(|_| bad())?;
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 || v > 2f64.powi(63) {
        return Err(bad());
    }
    Ok(v as u64)
}

pub fn parse_grid(spec: &str) -> Result<Vec<u64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let usage = || Error::usage(format!("grid `{spec}`: expected start:stop:decade[:S] or start:stop:linear:N"));
    if parts.len() < 3 || parts.len() > 4 {
        return Err(usage());
    }
    let start = parse_count(parts[0])?;
    let stop = parse_count(parts[1])?;
    if start == 0 {
        return Err(Error::usage(format!("grid `{spec}`: start must be positive")));
    }
    if stop < start {
        return Err(Error::usage(format!("grid `{spec}` is not ascending")));
    }
    let grid = match (parts[2], parts.get(3)) {
        ("decade", per) => {
            let per = per.map(|s| parse_count(s)).transpose()?.unwrap_or(1);
            if per == 0 {
                return Err(usage());
            }
            log_grid(start, stop, per)
        }
        ("linear", Some(n)) => {
            let n = parse_count(n)?;
            if n == 0 || (n == 1 && start != stop) || (n > 1 && start == stop) {
                return Err(usage());
            }
            linear_grid(start, stop, n)
        }
        _ => return Err(usage()),
    };
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::usage(format!("grid `{spec}` is not strictly ascending")));
    }
    Ok(grid)
}

/// `round(start·10^(i/per))` while `<= stop`, deduplicated; `stop` is always included.
fn log_grid(start: u64, stop: u64, per: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 0u64;
    loop {
        let x = if i % per == 0 {
            10u64.checked_pow((i / per) as u32).and_then(|d| start.checked_mul(d))
        } else {
            Some((start as f64 * 10f64.powf(i as f64 / per as f64)).round() as u64)
        };
        match x {
            Some(x) if x <= stop => {
                if out.last() != Some(&x) {
                    out.push(x);
                }
            }
            _ => break,
        }
        i += 1;
    }
    if out.last() != Some(&stop) {
        out.push(stop);
    }
    out
}

fn linear_grid(start: u64, stop: u64, n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![start];
    }
    let span = (stop - start) as u128;
    (0..n)
        .map(|i| start + (span * i as u128 / (n - 1) as u128) as u64)
        .collect()
}
