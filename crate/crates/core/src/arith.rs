//! Exact integer utilities: factorization, fundamental discriminants and
//! primitive roots.
//!
//! Factorization runs trial division up to [`TRIAL_DIVISION_LIMIT`] and hands
//! any remaining composite cofactor to Brent's variant of Pollard rho, driven
//! by a ChaCha generator with a fixed seed so results never depend on the run.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound. Cofactors left after this are prime or handled by rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

const RHO_SEED: u64 = 0x5eed_0f3a;

/// Exact prime-exponent decomposition of a nonzero integer.
///
/// Primes are strictly increasing and every exponent is at least one; the
/// integer 1 is the empty product with sign +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    negative: bool,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            negative: false,
            factors: Vec::new(),
        }
    }

    /// `p^e` for a prime `p`. The primality of `p` is the caller's promise.
    pub fn prime_power(p: u64, e: u32) -> Self {
        let factors = if e == 0 { Vec::new() } else { vec![(p, e)] };
        Factorization {
            negative: false,
            factors,
        }
    }

    /// Builds a factorization from arbitrary `(prime, exponent)` pairs,
    /// merging repeated primes and dropping zero exponents.
    pub fn from_pairs(negative: bool, pairs: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut factors: Vec<(u64, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization {
            negative,
            factors: merged,
        }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.factors.is_empty()
    }

    pub fn abs(&self) -> Self {
        Factorization {
            negative: false,
            factors: self.factors.clone(),
        }
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// The factorization with every power of `p` removed.
    pub fn without(&self, p: u64) -> Self {
        Factorization {
            negative: self.negative,
            factors: self
                .factors
                .iter()
                .copied()
                .filter(|&(q, _)| q != p)
                .collect(),
        }
    }

    /// Replaces the exponent of `p` (zero removes it).
    pub fn with_valuation(&self, p: u64, e: u32) -> Self {
        let mut pairs: Vec<(u64, u32)> = self.without(p).factors;
        pairs.push((p, e));
        Factorization::from_pairs(self.negative, pairs)
    }

    pub fn mul(&self, other: &Factorization) -> Self {
        Factorization::from_pairs(
            self.negative ^ other.negative,
            self.factors.iter().chain(other.factors.iter()).copied(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        Factorization {
            negative: self.negative && k % 2 == 1,
            factors: if k == 0 {
                Vec::new()
            } else {
                self.factors.iter().map(|&(p, e)| (p, e * k)).collect()
            },
        }
    }

    /// The `k`-th root of `|self|` when every exponent is divisible by `k`.
    pub fn root(&self, k: u32) -> Option<Self> {
        if k == 0 || self.factors.iter().any(|&(_, e)| e % k != 0) {
            return None;
        }
        Some(Factorization {
            negative: false,
            factors: self.factors.iter().map(|&(p, e)| (p, e / k)).collect(),
        })
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Exact value, or `None` if it does not fit in an `i128`.
    pub fn value(&self) -> Option<i128> {
        let mut acc: i128 = 1;
        for &(p, e) in &self.factors {
            let p = i128::from(p);
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(if self.negative { -acc } else { acc })
    }

    pub fn magnitude(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::from(1u32), |acc, &(p, e)| {
                acc * BigUint::from(p).pow(e)
            })
    }

    /// Signed decimal representation, exact for any size.
    pub fn to_decimal(&self) -> String {
        let m = self.magnitude().to_string();
        if self.negative {
            format!("-{m}")
        } else {
            m
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factors a nonzero integer.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut pairs = Vec::new();
    factor_unsigned(n.unsigned_abs(), &mut pairs);
    Ok(Factorization::from_pairs(n < 0, pairs))
}

/// Factors a nonzero unsigned integer (sign +1).
pub fn factorize_u64(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut pairs = Vec::new();
    factor_unsigned(n, &mut pairs);
    Ok(Factorization::from_pairs(false, pairs))
}

fn factor_unsigned(mut n: u64, out: &mut Vec<(u64, u32)>) {
    let strip = |n: &mut u64, p: u64, out: &mut Vec<(u64, u32)>| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    strip(&mut n, 2, out);
    let mut p = 3u64;
    while p <= TRIAL_DIVISION_LIMIT && p * p <= n {
        strip(&mut n, p, out);
        p += 2;
    }
    if n == 1 {
        return;
    }
    if p * p > n {
        out.push((n, 1));
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RHO_SEED);
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push((m, 1));
            continue;
        }
        let d = pollard_brent(m, &mut rng);
        stack.push(d);
        stack.push(m / d);
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns a nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: u64, rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let c = rng.random_range(1..n);
        let mut y = rng.random_range(0..n);
        let m = 128u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// A fundamental discriminant (or 1): the discriminant of a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_fundamental_discriminant(d)? {
            Ok(FundamentalDiscriminant(d))
        } else {
            Err(Error::NotFundamental(d))
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn unsigned_abs(self) -> u64 {
        self.0.unsigned_abs()
    }
}

impl TryFrom<i64> for FundamentalDiscriminant {
    type Error = Error;

    fn try_from(d: i64) -> Result<Self> {
        FundamentalDiscriminant::new(d)
    }
}

impl From<FundamentalDiscriminant> for i64 {
    fn from(d: FundamentalDiscriminant) -> i64 {
        d.0
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_squarefree(n: i64) -> bool {
    let m = n.unsigned_abs();
    if m.is_multiple_of(4) || m.is_multiple_of(9) || m.is_multiple_of(25) {
        return false;
    }
    factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}

/// `D ≡ 1 (mod 4)` squarefree, or `D = 4m` with `m ≡ 2, 3 (mod 4)` squarefree.
/// Returns true for `D = 1`.
pub fn is_fundamental_discriminant(d: i64) -> Result<bool> {
    if d == 0 {
        return Err(Error::Zero);
    }
    Ok(match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    })
}

/// All fundamental discriminants in `[lo, hi]`, ascending.
pub fn fundamental_discriminants_in(lo: i64, hi: i64) -> Vec<FundamentalDiscriminant> {
    (lo..=hi)
        .filter(|&d| d != 0 && is_fundamental_discriminant(d).unwrap_or(false))
        .map(FundamentalDiscriminant)
        .collect()
}

pub fn is_odd_prime(ell: u64) -> bool {
    ell > 2 && is_prime(ell)
}

/// Least primitive root modulo the odd prime `ell`.
pub fn smallest_primitive_root(ell: u64) -> Result<u64> {
    if !is_odd_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    let group_order = factorize_u64(ell - 1)?;
    let g = (2..ell)
        .find(|&g| {
            group_order
                .factors()
                .iter()
                .all(|&(q, _)| pow_mod(g, (ell - 1) / q, ell) != 1)
        })
        .expect("every odd prime has a primitive root");
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factorize_examples() {
        let f = factorize(12).unwrap();
        assert_eq!(f.factors(), &[(2, 2), (3, 1)]);
        assert_eq!(f.sign(), 1);

        let f = factorize(-1).unwrap();
        assert_eq!(f.sign(), -1);
        assert!(f.factors().is_empty());

        let f = factorize(15125).unwrap();
        assert_eq!(f.factors(), &[(5, 3), (11, 2)]);
        assert_eq!(factorize(0), Err(Error::Zero));
    }

    #[test]
    fn factorize_large_cofactors() {
        // product of two primes above the trial division limit
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize((p * q) as i64).unwrap();
        assert_eq!(f.factors(), &[(p, 1), (q, 1)]);
        let f = factorize_u64(p * p * 4).unwrap();
        assert_eq!(f.factors(), &[(2, 2), (p, 2)]);
        let big_prime = 9_223_372_036_854_775_783u64;
        assert_eq!(
            factorize(big_prime as i64).unwrap().factors(),
            &[(big_prime, 1)]
        );
        assert_eq!(
            factorize(i64::MIN).unwrap(),
            Factorization::from_pairs(true, [(2, 63)])
        );
    }

    #[test]
    fn fundamental_examples() {
        assert!(is_fundamental_discriminant(5).unwrap());
        assert!(!is_fundamental_discriminant(9).unwrap());
        assert!(is_fundamental_discriminant(-4).unwrap());
        assert!(is_fundamental_discriminant(1).unwrap());
        assert!(!is_fundamental_discriminant(-1).unwrap());
        assert!(is_fundamental_discriminant(-8).unwrap());
        assert!(!is_fundamental_discriminant(-16).unwrap());
        assert_eq!(is_fundamental_discriminant(0), Err(Error::Zero));
    }

    #[test]
    fn fundamental_ranges() {
        let vals = |lo, hi| -> Vec<i64> {
            fundamental_discriminants_in(lo, hi)
                .into_iter()
                .map(|d| d.value())
                .collect()
        };
        assert_eq!(vals(-5, 5), vec![-4, -3, 1, 5]);
        assert!(vals(2, 4).is_empty());
        assert_eq!(vals(-24, -20), vec![-24, -23, -20]);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(3), Ok(2));
        assert_eq!(smallest_primitive_root(5), Ok(2));
        assert_eq!(smallest_primitive_root(7), Ok(3));
        assert_eq!(smallest_primitive_root(23), Ok(5));
        assert_eq!(smallest_primitive_root(9), Err(Error::NotOddPrime(9)));
        assert_eq!(smallest_primitive_root(2), Err(Error::NotOddPrime(2)));
    }

    #[test]
    fn primitive_root_generates_units() {
        for ell in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 101] {
            let g = smallest_primitive_root(ell).unwrap();
            let mut seen: Vec<u64> = (1..ell).map(|k| pow_mod(g, k, ell)).collect();
            seen.sort_unstable();
            assert_eq!(seen, (1..ell).collect::<Vec<_>>(), "ell = {ell}");
        }
    }

    // closed-form cases of the definition, written independently of the
    // implementation's squarefree shortcut
    fn fundamental_by_definition(d: i64) -> bool {
        let squarefree = |m: i64| {
            let m = m.unsigned_abs();
            (2..)
                .take_while(|k: &u64| k * k <= m)
                .all(|k| !m.is_multiple_of(k * k))
        };
        if d == 1 {
            return true;
        }
        if d.rem_euclid(4) == 1 {
            return squarefree(d);
        }
        d % 4 == 0 && matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(d / 4)
    }

    #[test]
    fn fundamental_matches_definition() {
        for d in -3000..=3000 {
            if d != 0 {
                assert_eq!(
                    is_fundamental_discriminant(d).unwrap(),
                    fundamental_by_definition(d),
                    "D = {d}"
                );
            }
        }
    }

    #[test]
    fn factorization_display_and_roots() {
        let f = factorize(-15125).unwrap();
        assert_eq!(f.to_string(), "-5^3*11^2");
        assert_eq!(f.to_decimal(), "-15125");
        assert_eq!(
            factorize(121).unwrap().root(2),
            Some(factorize(11).unwrap())
        );
        assert_eq!(factorize(12).unwrap().root(2), None);
        let big = Factorization::prime_power(13, 19).mul(&factorize(1000).unwrap().pow(6));
        assert_eq!(big.value(), None);
        assert_eq!(
            big.to_decimal(),
            (BigUint::from(13u32).pow(19) * BigUint::from(10u32).pow(18)).to_string()
        );
    }

    proptest! {
        #[test]
        fn factorize_reconstructs(n in any::<i64>().prop_filter("nonzero", |n| *n != 0)) {
            let f = factorize(n).unwrap();
            prop_assert_eq!(f.value(), Some(n as i128));
            let primes: Vec<u64> = f.factors().iter().map(|&(p, _)| p).collect();
            prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(f.factors().iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        }

        #[test]
        fn isqrt_is_floor(n in any::<u64>()) {
            let r = isqrt(n) as u128;
            prop_assert!(r * r <= n as u128 && (r + 1) * (r + 1) > n as u128);
        }
    }
}
