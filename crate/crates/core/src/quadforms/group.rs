use std::collections::HashMap;

use serde::Serialize;

use super::{check_discriminant, compose, reduction_cycle, QuadForm};
use crate::arith::{factorize_u64, gcd, is_odd_prime, isqrt, FundamentalDiscriminant};
use crate::error::{Error, Result};

/// Elementary divisors `d₁ | d₂ | … | d_k` of a form class group.
///
/// For positive discriminants the group is the narrow class group (proper
/// equivalence classes of indefinite forms). Its odd part agrees with the
/// ordinary class group, which is all the reflection counts consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGroupStructure {
    pub discriminant: FundamentalDiscriminant,
    pub elementary_divisors: Vec<u64>,
    pub narrow: bool,
}

impl ClassGroupStructure {
    pub fn class_number(&self) -> u64 {
        self.elementary_divisors.iter().product()
    }

    /// Number of cyclic factors of order divisible by `p`.
    pub fn p_rank(&self, p: u64) -> u32 {
        self.elementary_divisors
            .iter()
            .filter(|&&d| d % p == 0)
            .count() as u32
    }
}

/// The classes of one discriminant with a composition table lookup.
///
/// Every reduced form (every member of every rho cycle when `D > 0`) maps to
/// the index of its class; the representative of a class is its smallest
/// reduced form.
#[derive(Debug, Clone)]
pub struct ClassSet {
    discriminant: i64,
    reps: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
}

fn reduced_definite_forms(d: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push(QuadForm::new(a, b, c));
        }
        a += 1;
    }
    out
}

fn reduced_indefinite_forms(d: i64) -> Vec<QuadForm> {
    let s = isqrt(d as u64) as i64;
    let mut out = Vec::new();
    for b in (1..=s).filter(|b| (d - b * b) % 4 == 0) {
        let n = (d - b * b) / 4;
        let mut a = 1i64;
        while a * a <= n {
            if n % a == 0 {
                for m in [a, n / a] {
                    for signed in [m, -m] {
                        let f = QuadForm::new(signed, b, -n / signed);
                        if gcd(gcd(f.a, f.b), f.c) == 1 && super::is_reduced_indefinite(f, d) {
                            out.push(f);
                        }
                    }
                }
            }
            a += 1;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl ClassSet {
    pub fn new(d: FundamentalDiscriminant) -> Result<Self> {
        let d = d.value();
        check_discriminant(d)?;
        let mut reps = Vec::new();
        let mut index = HashMap::new();
        if d < 0 {
            reps = reduced_definite_forms(d);
            reps.sort_unstable();
            for (i, &f) in reps.iter().enumerate() {
                index.insert(f, i);
            }
        } else {
            let mut cycles = Vec::new();
            for f in reduced_indefinite_forms(d) {
                if index.contains_key(&f) {
                    continue;
                }
                let cycle = reduction_cycle(f)?;
                for &g in &cycle {
                    index.insert(g, usize::MAX);
                }
                cycles.push(cycle);
            }
            cycles.sort_by_key(|c| *c.iter().min().expect("cycles are nonempty"));
            for (i, cycle) in cycles.iter().enumerate() {
                for &g in cycle {
                    index.insert(g, i);
                }
                reps.push(*cycle.iter().min().expect("cycles are nonempty"));
            }
        }
        Ok(ClassSet {
            discriminant: d,
            reps,
            index,
        })
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[QuadForm] {
        &self.reps
    }

    pub fn class_of(&self, f: QuadForm) -> Result<usize> {
        let r = super::reduce(f)?;
        if super::form_discriminant(r) != self.discriminant as i128 {
            return Err(Error::DiscriminantMismatch(
                self.discriminant,
                super::form_discriminant(r) as i64,
            ));
        }
        Ok(self.index[&r])
    }

    pub fn identity(&self) -> usize {
        self.class_of(QuadForm::principal(self.discriminant).expect("checked discriminant"))
            .expect("principal form lies in the class set")
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let f = compose(self.reps[i], self.reps[j]).expect("classes share a discriminant");
        self.index[&f]
    }

    pub fn order(&self, i: usize) -> u64 {
        let e = self.identity();
        let mut x = i;
        let mut n = 1;
        while x != e {
            x = self.mul(x, i);
            n += 1;
        }
        n
    }

    /// Elementary divisors from the orders of all elements.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let h = self.len() as u64;
        let orders: Vec<u64> = (0..self.len()).map(|i| self.order(i)).collect();
        let mut per_prime: Vec<Vec<u64>> = Vec::new();
        for &(p, e) in factorize_u64(h).expect("h >= 1").factors() {
            // at_least[k-1] = number of cyclic p-factors of order >= p^k
            let mut at_least = Vec::new();
            let mut prev = 1u64;
            for k in 1..=e {
                let pk = p.pow(k);
                let n = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                let mut ratio = n / prev;
                let mut r = 0;
                while ratio > 1 {
                    ratio /= p;
                    r += 1;
                }
                if r == 0 {
                    break;
                }
                at_least.push(r);
                prev = n;
            }
            let rank = at_least.first().copied().unwrap_or(0);
            let exps: Vec<u32> = (1..=rank)
                .map(|j| at_least.iter().take_while(|&&r| r >= j).count() as u32)
                .collect();
            per_prime.push(exps.into_iter().map(|k| p.pow(k)).collect());
        }
        let t = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut divisors: Vec<u64> = (0..t)
            .map(|j| {
                per_prime
                    .iter()
                    .filter_map(|powers| powers.get(j).copied())
                    .product()
            })
            .collect();
        divisors.reverse();
        divisors
    }
}

/// Reduced representatives of all classes, sorted.
pub fn class_representatives(d: FundamentalDiscriminant) -> Result<Vec<QuadForm>> {
    Ok(ClassSet::new(d)?.reps)
}

/// Class group structure (narrow for `D > 0`).
pub fn class_group(d: FundamentalDiscriminant) -> Result<ClassGroupStructure> {
    let set = ClassSet::new(d)?;
    Ok(ClassGroupStructure {
        discriminant: d,
        elementary_divisors: set.elementary_divisors(),
        narrow: d.value() > 0,
    })
}

/// The `ell`-rank of the class group, for an odd prime `ell`.
pub fn ell_rank(d: FundamentalDiscriminant, ell: u64) -> Result<u32> {
    if !is_odd_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    Ok(class_group(d)?.p_rank(ell))
}
