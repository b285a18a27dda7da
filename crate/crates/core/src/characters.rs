//! Dirichlet characters modulo `m`, evaluated exactly.
//!
//! `(Z/mZ)*` is split along the CRT factors of `m`. Each odd prime power
//! contributes one cyclic factor generated by its smallest primitive root;
//! `2^a` contributes `{-1}` for `a = 2` and `{-1, 5}` for `a >= 3`. A
//! character is an exponent vector `(c_1, ..., c_r)` with `0 <= c_i < d_i`
//! and sends generator `g_i` to `exp(2πi c_i / d_i)`. Values are kept as
//! rational angles over `N = lcm(d_i)` so equalities between values are
//! exact integer comparisons.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith::{factorize, gcd, inverse_mod, lcm, smallest_primitive_root, totient};
use crate::{Error, Result};

/// Largest modulus with an exhaustive discrete-log table.
pub const MAX_MODULUS: u64 = 1_000_000;

const NOT_A_UNIT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    /// Generator as a residue modulo the full modulus (1 on the other CRT factors).
    pub residue: u64,
    pub order: u64,
}

#[derive(Debug, Clone)]
pub struct ResidueGroup {
    modulus: u64,
    phi: u64,
    factorization: Vec<(u64, u32)>,
    generators: Vec<Generator>,
    angle_denominator: u64,
    /// Flattened `modulus x rank` exponent table; `NOT_A_UNIT` off the units.
    dlog: Vec<u32>,
}

impl ResidueGroup {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if modulus > MAX_MODULUS {
            return Err(Error::Domain("modulus exceeds the discrete-log table ceiling 10^6"));
        }
        let factorization = factorize(modulus);
        let mut generators = Vec::new();
        for &(p, e) in &factorization {
            let q = p.pow(e);
            let local: Vec<(u64, u64)> = if p == 2 {
                match e {
                    1 => Vec::new(),
                    2 => vec![(q - 1, 2)],
                    _ => vec![(q - 1, 2), (5, q / 4)],
                }
            } else {
                vec![(smallest_primitive_root(p, e), q / p * (p - 1))]
            };
            for (g, order) in local {
                generators.push(Generator {
                    residue: crt_lift(g, q, modulus),
                    order,
                });
            }
        }
        let angle_denominator = generators.iter().fold(1, |acc, g| lcm(acc, g.order));
        let phi = totient(modulus);
        debug_assert_eq!(generators.iter().map(|g| g.order).product::<u64>(), phi);

        let rank = generators.len();
        let mut dlog = vec![NOT_A_UNIT; modulus as usize * rank.max(1)];
        let mut exps = vec![0u32; rank];
        fill_dlog(&generators, modulus, 0, 1 % modulus, &mut exps, &mut dlog);
        Ok(Self {
            modulus,
            phi,
            factorization,
            generators,
            angle_denominator,
            dlog,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Common denominator `N = lcm(d_i)` of all character angles.
    pub fn angle_denominator(&self) -> u64 {
        self.angle_denominator
    }

    /// Exponent vector of `n` over the generators, or `None` off the units.
    pub fn discrete_log(&self, n: u64) -> Option<&[u32]> {
        let r = (n % self.modulus) as usize;
        let rank = self.rank();
        if rank == 0 {
            // trivial group: every residue is the identity when m <= 2 and coprime
            return (gcd(n, self.modulus) == 1).then_some(&[][..]);
        }
        let row = &self.dlog[r * rank..(r + 1) * rank];
        (row[0] != NOT_A_UNIT).then_some(row)
    }
}

fn crt_lift(g: u64, q: u64, modulus: u64) -> u64 {
    let rest = modulus / q;
    if rest == 1 {
        return g % q;
    }
    // r = 1 + rest * t with r ≡ g (mod q)
    let inv = inverse_mod(rest % q, q).expect("CRT factors are coprime");
    let t = ((g % q + q - 1) % q) as u128 * inv as u128 % q as u128;
    ((1 + rest as u128 * t) % modulus as u128) as u64
}

fn fill_dlog(gens: &[Generator], m: u64, level: usize, value: u64, exps: &mut [u32], out: &mut [u32]) {
    let rank = gens.len();
    if level == rank {
        if rank > 0 {
            let at = value as usize * rank;
            out[at..at + rank].copy_from_slice(exps);
        }
        return;
    }
    let mut v = value;
    for e in 0..gens[level].order {
        exps[level] = e as u32;
        fill_dlog(gens, m, level + 1, v, exps, out);
        v = (v as u128 * gens[level].residue as u128 % m as u128) as u64;
    }
}

/// A character value: zero, or the root of unity `exp(2πi num/den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    /// `numerator / denominator` in lowest terms, `0 <= numerator < denominator`.
    Root { numerator: u64, denominator: u64 },
}

impl CharValue {
    fn root(numerator: u64, denominator: u64) -> Self {
        let g = gcd(numerator, denominator).max(1);
        CharValue::Root {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    /// Floating value; quarter turns are produced exactly.
    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root {
                numerator,
                denominator,
            } => match (numerator, denominator) {
                (0, _) => Complex64::new(1.0, 0.0),
                (1, 2) => Complex64::new(-1.0, 0.0),
                (1, 4) => Complex64::new(0.0, 1.0),
                (3, 4) => Complex64::new(0.0, -1.0),
                _ => {
                    let theta = TAU * numerator as f64 / denominator as f64;
                    Complex64::new(libm::cos(theta), libm::sin(theta))
                }
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<ResidueGroup>,
    exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn new(group: Arc<ResidueGroup>, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != group.rank()
            || exponents.iter().zip(group.generators()).any(|(&c, g)| c >= g.order)
        {
            return Err(Error::Domain("exponent vector does not match the residue group"));
        }
        Ok(Self { group, exponents })
    }

    pub fn principal(group: Arc<ResidueGroup>) -> Self {
        let exponents = vec![0; group.rank()];
        Self { group, exponents }
    }

    pub fn group(&self) -> &ResidueGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&c| c == 0)
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(self.group.generators())
            .fold(1, |acc, (&c, g)| lcm(acc, g.order / gcd(g.order, c)))
    }

    /// Angle numerator over [`ResidueGroup::angle_denominator`], `None` off the units.
    pub fn angle(&self, n: u64) -> Option<u64> {
        let den = self.group.angle_denominator;
        let logs = self.group.discrete_log(n)?;
        let mut acc: u128 = 0;
        for ((&c, &e), g) in self.exponents.iter().zip(logs).zip(self.group.generators()) {
            acc += c as u128 * e as u128 * (den / g.order) as u128;
        }
        Some((acc % den as u128) as u64)
    }

    pub fn eval(&self, n: u64) -> CharValue {
        match self.angle(n) {
            None => CharValue::Zero,
            Some(a) => CharValue::root(a, self.group.angle_denominator),
        }
    }

    /// `χ(r)` for `r = 0..m` as floating values.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.modulus()).map(|r| self.eval(r).to_complex()).collect()
    }

    /// The complex-conjugate character.
    pub fn conj(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(self.group.generators())
            .map(|(&c, g)| (g.order - c) % g.order)
            .collect();
        Self {
            group: self.group.clone(),
            exponents,
        }
    }
}

/// All `φ(m)` characters mod `m`, principal first, exponent vectors in
/// lexicographic order.
pub fn enumerate_characters(m: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(ResidueGroup::new(m)?);
    let orders: Vec<u64> = group.generators().iter().map(|g| g.order).collect();
    let mut out = Vec::with_capacity(group.phi() as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter {
            group: group.clone(),
            exponents: exps.clone(),
        });
        // odometer, last coordinate fastest
        let mut i = orders.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

pub fn eval_character(chi: &DirichletCharacter, n: u64) -> CharValue {
    chi.eval(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::pow_mod;

    fn units(m: u64) -> impl Iterator<Item = u64> {
        (0..m).filter(move |&a| gcd(a, m) == 1)
    }

    #[test]
    fn trivial_modulus() {
        let chars = enumerate_characters(1).unwrap();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_principal());
        for n in 0..20 {
            assert_eq!(chars[0].eval(n).to_complex(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn zero_modulus_is_rejected() {
        assert_eq!(enumerate_characters(0).unwrap_err(), Error::ZeroModulus);
    }

    #[test]
    fn modulus_four() {
        let chars = enumerate_characters(4).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_principal());
        assert_eq!(chars[1].eval(3).to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(chars[1].eval(1).to_complex(), Complex64::new(1.0, 0.0));
        assert!(chars[1].eval(2).is_zero());
    }

    #[test]
    fn modulus_eight_is_real() {
        let chars = enumerate_characters(8).unwrap();
        assert_eq!(chars.len(), 4);
        for chi in &chars {
            for a in units(8) {
                match chi.eval(a) {
                    CharValue::Root { denominator, .. } => assert!(denominator <= 2),
                    CharValue::Zero => panic!("unit {a} evaluated to zero"),
                }
            }
        }
    }

    #[test]
    fn principal_mod_six_kills_non_units() {
        let chars = enumerate_characters(6).unwrap();
        assert!(chars[0].eval(4).is_zero());
        assert_eq!(chars[0].eval(5).to_complex(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn quartic_character_mod_five() {
        let chars = enumerate_characters(5).unwrap();
        assert_eq!(chars[0].group().generators()[0].residue, 2);
        let chi = chars.iter().find(|c| c.exponents() == [1]).unwrap();
        assert_eq!(chi.order(), 4);
        assert_eq!(chi.eval(2), CharValue::Root { numerator: 1, denominator: 4 });
        assert_eq!(chi.eval(2).to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(chi.eval(4), CharValue::Root { numerator: 1, denominator: 2 });
        assert_eq!(chi.eval(16), CharValue::Root { numerator: 0, denominator: 1 });
    }

    #[test]
    fn discrete_logs_reconstruct_units() {
        for m in (1..=400u64).chain([1000, 1024, 2310, 9999, 10_000]) {
            let group = ResidueGroup::new(m).unwrap();
            let orders: u64 = group.generators().iter().map(|g| g.order).product();
            assert_eq!(orders, group.phi(), "m = {m}");
            for u in units(m) {
                let logs = group.discrete_log(u).unwrap();
                let back = group
                    .generators()
                    .iter()
                    .zip(logs)
                    .fold(1 % m, |acc, (g, &e)| acc * pow_mod(g.residue, e as u64, m) % m);
                assert_eq!(back, u % m, "m = {m}, u = {u}");
            }
            for n in 0..m.min(50) {
                assert_eq!(group.discrete_log(n).is_none(), gcd(n, m) != 1, "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn character_count_matches_totient() {
        for m in 1..=10_000u64 {
            let group = ResidueGroup::new(m).unwrap();
            let count: u64 = group.generators().iter().map(|g| g.order).product();
            assert_eq!(count, totient(m));
        }
        for m in [1u64, 2, 12, 24, 97, 360, 1001] {
            assert_eq!(enumerate_characters(m).unwrap().len() as u64, totient(m));
        }
    }

    #[test]
    fn complete_multiplicativity() {
        for m in 1..=200u64 {
            for chi in enumerate_characters(m).unwrap() {
                let den = chi.group().angle_denominator();
                for a in units(m) {
                    for b in units(m) {
                        let lhs = chi.angle(a * b).unwrap();
                        let rhs = (chi.angle(a).unwrap() + chi.angle(b).unwrap()) % den;
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_exactly_off_units_and_unit_modulus_on_units() {
        for m in 1..=120u64 {
            for chi in enumerate_characters(m).unwrap() {
                for n in 0..2 * m {
                    let v = chi.eval(n);
                    assert_eq!(v.is_zero(), gcd(n, m) != 1);
                    if !v.is_zero() {
                        assert!((v.to_complex().norm_sqr() - 1.0).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn order_divides_exponent() {
        for m in [7u64, 15, 16, 21, 24, 35] {
            for chi in enumerate_characters(m).unwrap() {
                let ord = chi.order();
                for a in units(m) {
                    let ang = chi.angle(a).unwrap();
                    let den = chi.group().angle_denominator();
                    assert_eq!(ang as u128 * ord as u128 % den as u128, 0);
                }
            }
        }
    }

    #[test]
    fn conjugate_inverts_values() {
        for chi in enumerate_characters(21).unwrap() {
            let bar = chi.conj();
            let den = chi.group().angle_denominator();
            for a in units(21) {
                assert_eq!((chi.angle(a).unwrap() + bar.angle(a).unwrap()) % den, 0);
            }
        }
    }
}
