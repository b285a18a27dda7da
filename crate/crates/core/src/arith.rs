//! Small-integer arithmetic shared by the other modules.

use alloc::vec::Vec;

pub const fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub const fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Floor of the square root, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = libm::sqrt(n as f64) as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// `x^n` by repeated squaring.
#[inline]
pub fn powi(mut x: f64, mut n: u32) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= x;
        }
        x *= x;
        n >>= 1;
    }
    acc
}

/// Multiplicative order of a unit `g` modulo `m`, given `phi = φ(m)`.
pub fn multiplicative_order(g: u64, m: u64, phi: u64) -> u64 {
    let mut order = phi;
    for (p, _) in factorize(phi) {
        while order % p == 0 && pow_mod(g, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// Smallest primitive root modulo an odd prime power `p^e`.
pub fn smallest_primitive_root(p: u64, e: u32) -> u64 {
    let m = p.pow(e);
    let phi = m / p * (p - 1);
    (2..m)
        .find(|&g| gcd(g, m) == 1 && multiplicative_order(g, m, phi) == phi)
        .expect("odd prime powers are cyclic")
}

/// Rows `0..=63` of Pascal's triangle; every entry fits in `u64`.
pub const BINOMIAL_ROWS: usize = 64;

static PASCAL: [[u64; BINOMIAL_ROWS]; BINOMIAL_ROWS] = pascal();

const fn pascal() -> [[u64; BINOMIAL_ROWS]; BINOMIAL_ROWS] {
    let mut rows = [[0u64; BINOMIAL_ROWS]; BINOMIAL_ROWS];
    let mut n = 0;
    while n < BINOMIAL_ROWS {
        rows[n][0] = 1;
        let mut k = 1;
        while k <= n {
            rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
            k += 1;
        }
        n += 1;
    }
    rows
}

/// `C(n, k)` from the Pascal table, zero when `k > n`. Panics for `n >= 64`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    assert!(n < BINOMIAL_ROWS, "binomial row {n} outside the table");
    if k > n {
        0
    } else {
        PASCAL[n][k]
    }
}

#[inline]
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_small_values() {
        let expected = [0, 1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4];
        for (n, &phi) in expected.iter().enumerate() {
            assert_eq!(totient(n as u64), phi, "phi({n})");
        }
        for n in 1..500u64 {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(totient(n), brute);
        }
    }

    #[test]
    fn isqrt_exact_near_squares() {
        for r in [0u64, 1, 2, 3, 1000, 65535, 4_294_967_295] {
            let sq = r * r;
            assert_eq!(isqrt(sq), r);
            if r > 0 {
                assert_eq!(isqrt(sq - 1), r - 1);
                assert_eq!(isqrt(sq + 1), r);
            }
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(3, 1), 2);
        assert_eq!(smallest_primitive_root(5, 1), 2);
        assert_eq!(smallest_primitive_root(7, 1), 3);
        assert_eq!(smallest_primitive_root(9, 1), 2);
        assert_eq!(smallest_primitive_root(3, 2), 2);
        assert_eq!(smallest_primitive_root(23, 1), 5);
    }

    #[test]
    fn inverses() {
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(2, 4), None);
        for m in 2..60u64 {
            for a in 1..m {
                match inverse_mod(a, m) {
                    Some(inv) => assert_eq!(a * inv % m, 1),
                    None => assert_ne!(gcd(a, m), 1),
                }
            }
        }
    }

    #[test]
    fn pascal_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(63, 31), 916_312_070_471_295_267);
        for n in 1..BINOMIAL_ROWS {
            let row_sum: u128 = (0..=n).map(|k| binomial(n, k) as u128).sum();
            assert_eq!(row_sum, 1u128 << n);
        }
    }
}
