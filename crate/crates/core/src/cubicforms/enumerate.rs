//! Enumeration of canonical irreducible maximal forms by discriminant.
//!
//! Negative discriminants: with `f = a(x - θ)(x² + px + r)` canonical, the
//! complex root `z` satisfies `Im z ≥ √3/2`, and `|D| = 4a⁴|θ - z|⁴ (Im z)²`
//! gives `27a⁴ ≤ 16X`, `|θ| ≤ 1/2 + √(√(X/3)/a² - 3/4)` and
//! `r ≤ (16X / 27a⁴)^{1/3}`. These bound `b = a(p - θ)` and `c = a(r - pθ)`,
//! and the canonical inequalities bound `d` on both sides.
//!
//! Positive discriminants: a reduced Hessian has `P ≤ √D`. The syzygy
//! `4H³ = G² + 27Df²` at `(1, 0)` gives `4P³ ≥ 27Da²`, hence
//! `729a⁴ ≤ 16X`, and `|2bP - 3aQ| ≤ 2P^{3/2}` gives `|b| ≤ 3a/2 + √P`.
//! Then `1 ≤ P ≤ √X` bounds `c` and `|Q| ≤ P` bounds `d`.

use std::collections::BTreeMap;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maximal::maximal_at;
use super::reduce::{is_canonical_negative, is_canonical_positive};
use super::{disc_small, hessian, is_irreducible, CubicForm};
use crate::arith::{factorize, isqrt};
use crate::error::{Error, Result};

/// Which discriminant signs a tabulation covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignSelection {
    Negative,
    Positive,
    Both,
}

impl SignSelection {
    pub fn includes(self, d: i64) -> bool {
        match self {
            SignSelection::Negative => d < 0,
            SignSelection::Positive => d > 0,
            SignSelection::Both => d != 0,
        }
    }

    fn negative(self) -> bool {
        self != SignSelection::Positive
    }

    fn positive(self) -> bool {
        self != SignSelection::Negative
    }
}

/// Cubic field counts for `xmin < |D| ≤ xmax` with the selected signs.
/// Discriminants with no field are absent from `counts`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicTabulation {
    xmin: u64,
    xmax: u64,
    signs: SignSelection,
    counts: BTreeMap<i64, u64>,
}

impl CubicTabulation {
    pub fn xmin(&self) -> u64 {
        self.xmin
    }

    pub fn xmax(&self) -> u64 {
        self.xmax
    }

    pub fn signs(&self) -> SignSelection {
        self.signs
    }

    pub fn counts(&self) -> &BTreeMap<i64, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn covers(&self, d: i64) -> bool {
        let m = d.unsigned_abs();
        self.signs.includes(d) && m > self.xmin && m <= self.xmax
    }

    /// `(disc, count)` ordered by `|disc|`, negative first on ties.
    pub fn sorted_entries(&self) -> Vec<(i64, u64)> {
        let mut v: Vec<(i64, u64)> = self.counts.iter().map(|(&d, &n)| (d, n)).collect();
        v.sort_by_key(|&(d, _)| (d.unsigned_abs(), d));
        v
    }

    /// Union of two shards covering adjacent ranges with the same signs.
    pub fn merge(&self, other: &CubicTabulation) -> Result<CubicTabulation> {
        if self.signs != other.signs {
            return Err(Error::IncompatibleShards);
        }
        let (lo, hi) = if self.xmax == other.xmin {
            (self, other)
        } else if other.xmax == self.xmin {
            (other, self)
        } else {
            return Err(Error::IncompatibleShards);
        };
        let mut counts = lo.counts.clone();
        for (&d, &n) in &hi.counts {
            *counts.entry(d).or_insert(0) += n;
        }
        Ok(CubicTabulation {
            xmin: lo.xmin,
            xmax: hi.xmax,
            signs: self.signs,
            counts,
        })
    }

    /// CSV with header `disc,count`, rows ordered by `|disc|`.
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["disc", "count"])?;
        for (d, n) in self.sorted_entries() {
            out.write_record([d.to_string(), n.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `N₃(D)` from a tabulation covering `D`.
pub fn count_n3(d: i64, tab: &CubicTabulation) -> Result<u64> {
    if !tab.covers(d) {
        return Err(Error::OutOfRange(d));
    }
    Ok(tab.counts.get(&d).copied().unwrap_or(0))
}

fn floor_div(n: i128, m: i128) -> i128 {
    n.div_euclid(m)
}

fn ceil_div(n: i128, m: i128) -> i128 {
    -(-n).div_euclid(m)
}

fn maximal(f: CubicForm, disc: i128) -> bool {
    let fac = factorize(disc as i64).expect("nonzero discriminant");
    fac.factors()
        .iter()
        .all(|&(p, e)| e < 2 || maximal_at(f, p))
}

fn in_range(disc: i128, xmin: u64, xmax: u64) -> bool {
    let m = disc.unsigned_abs();
    m > xmin as u128 && m <= xmax as u128
}

fn negative_for_a(a: i64, xmin: u64, xmax: u64) -> Vec<CubicForm> {
    let x = xmax as f64;
    let af = a as f64;
    let s = (x / 3.0).sqrt() / (af * af);
    if s < 0.75 - 1e-9 {
        return Vec::new();
    }
    let theta = 0.5 + (s - 0.75).max(0.0).sqrt();
    let rmax = (16.0 * x / (27.0 * af.powi(4))).cbrt();
    let b_lo = (-af * theta).floor() as i64 - 1;
    let b_hi = (af * (1.0 + theta)).ceil() as i64 + 1;
    let c_lo = (af * (1.0 - theta)).floor() as i64 - 1;
    let c_hi = (af * (rmax + theta)).ceil() as i64 + 1;
    let a128 = a as i128;
    let mut out = Vec::new();
    for b in b_lo..=b_hi {
        let b128 = b as i128;
        for c in c_lo..=c_hi {
            let c128 = c as i128;
            // bc - ad > 0 and (a-b)² + c(a-b) + ad > 0
            let d_hi = floor_div(b128 * c128 - 1, a128);
            let m = (a128 - b128) * (a128 - b128) + c128 * (a128 - b128);
            let d_lo = floor_div(-m, a128) + 1;
            for d in d_lo..=d_hi {
                let f = CubicForm::new(a, b, c, d as i64);
                let disc = disc_small(f);
                if disc >= 0 || !in_range(disc, xmin, xmax) {
                    continue;
                }
                if is_canonical_negative(f) && is_irreducible(f) && maximal(f, disc) {
                    out.push(f);
                }
            }
        }
    }
    out
}

fn positive_for_a(a: i64, xmin: u64, xmax: u64) -> Vec<CubicForm> {
    let pmax = isqrt(xmax) as i128;
    let b_bound = (1.5 * a as f64 + (pmax as f64).sqrt()).floor() as i64 + 1;
    let a128 = a as i128;
    let mut out = Vec::new();
    for b in -b_bound..=b_bound {
        let b128 = b as i128;
        let c_lo = ceil_div(b128 * b128 - pmax, 3 * a128);
        let c_hi = floor_div(b128 * b128 - 1, 3 * a128);
        for c in c_lo..=c_hi {
            let p = b128 * b128 - 3 * a128 * c;
            let d_lo = ceil_div(b128 * c - p, 9 * a128);
            let d_hi = floor_div(b128 * c + p, 9 * a128);
            for d in d_lo..=d_hi {
                let f = CubicForm::new(a, b, c as i64, d as i64);
                let (_, _, r) = hessian(f);
                if r < p {
                    continue;
                }
                let disc = disc_small(f);
                if disc <= 0 || !in_range(disc, xmin, xmax) {
                    continue;
                }
                if is_canonical_positive(f) && is_irreducible(f) && maximal(f, disc) {
                    out.push(f);
                }
            }
        }
    }
    out
}

fn max_leading(bound: u64, scale: u128) -> i64 {
    // largest a with scale · a⁴ ≤ 16 · bound
    let mut a = 0i64;
    while scale * ((a + 1) as u128).pow(4) <= 16 * bound as u128 {
        a += 1;
    }
    a
}

/// Canonical representatives of all cubic fields with `xmin < |D| ≤ xmax`,
/// sorted. Work is split by sign and leading coefficient.
pub fn enumerate_cubic_forms(xmin: u64, xmax: u64, signs: SignSelection) -> Vec<CubicForm> {
    let mut jobs = Vec::new();
    if xmax > xmin {
        if signs.negative() {
            jobs.extend((1..=max_leading(xmax, 27)).map(|a| (false, a)));
        }
        if signs.positive() {
            jobs.extend((1..=max_leading(xmax, 729)).map(|a| (true, a)));
        }
    }
    let mut forms: Vec<CubicForm> = jobs
        .into_par_iter()
        .flat_map_iter(|(positive, a)| {
            if positive {
                positive_for_a(a, xmin, xmax)
            } else {
                negative_for_a(a, xmin, xmax)
            }
        })
        .collect();
    forms.sort_unstable();
    forms
}

/// Field counts for `xmin < |D| ≤ xmax`.
pub fn enumerate_range(xmin: u64, xmax: u64, signs: SignSelection) -> CubicTabulation {
    let mut counts = BTreeMap::new();
    for f in enumerate_cubic_forms(xmin, xmax, signs) {
        *counts.entry(disc_small(f) as i64).or_insert(0) += 1;
    }
    CubicTabulation {
        xmin,
        xmax: xmax.max(xmin),
        signs,
        counts,
    }
}

/// Field counts for `0 < |D| ≤ xmax`.
pub fn enumerate_cubic_fields(xmax: u64, signs: SignSelection) -> CubicTabulation {
    enumerate_range(0, xmax, signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubicforms::{are_equivalent, canonical_form, is_maximal};
    use std::collections::BTreeSet;

    fn discs(tab: &CubicTabulation) -> Vec<i64> {
        tab.sorted_entries().into_iter().map(|(d, _)| d).collect()
    }

    #[test]
    fn small_tabulations() {
        let neg = enumerate_cubic_fields(100, SignSelection::Negative);
        assert_eq!(discs(&neg), vec![-23, -31, -44, -59, -76, -83, -87]);
        assert_eq!(neg.total(), 7);
        let pos = enumerate_cubic_fields(100, SignSelection::Positive);
        assert_eq!(discs(&pos), vec![49, 81]);
        assert!(enumerate_cubic_fields(22, SignSelection::Negative)
            .counts()
            .is_empty());
    }

    #[test]
    fn n3_lookups() {
        let tab = enumerate_cubic_fields(200, SignSelection::Both);
        assert_eq!(count_n3(-23, &tab), Ok(1));
        assert_eq!(count_n3(-108, &tab), Ok(1));
        assert_eq!(count_n3(100, &tab), Ok(0));
        assert_eq!(count_n3(-201, &tab), Err(Error::OutOfRange(-201)));
        let neg = enumerate_cubic_fields(200, SignSelection::Negative);
        assert_eq!(count_n3(49, &neg), Err(Error::OutOfRange(49)));
    }

    // discriminant lists at X = 1000 from an independent box search with a
    // ring-integrality maximality test
    const POSITIVE_1000: [i64; 27] = [
        49, 81, 148, 169, 229, 257, 316, 321, 361, 404, 469, 473, 564, 568, 621, 697, 733, 756,
        761, 785, 788, 837, 892, 940, 961, 985, 993,
    ];
    const NEGATIVE_1000_PREFIX: [i64; 15] = [
        -23, -31, -44, -59, -76, -83, -87, -104, -107, -108, -116, -135, -139, -140, -152,
    ];

    #[test]
    fn tabulation_to_1000_matches_box_search() {
        let tab = enumerate_cubic_fields(1000, SignSelection::Both);
        let pos: Vec<i64> = discs(&tab).into_iter().filter(|&d| d > 0).collect();
        let neg: Vec<i64> = discs(&tab).into_iter().filter(|&d| d < 0).collect();
        assert_eq!(pos, POSITIVE_1000);
        assert_eq!(neg.len(), 126);
        assert_eq!(neg[..15], NEGATIVE_1000_PREFIX);
        // Q(∛6) and Q(∛12) share discriminant -972; every other count is 1
        assert_eq!(count_n3(-972, &tab), Ok(2));
        assert!(tab.counts().iter().all(|(&d, &n)| n == 1 || d == -972));
    }

    #[test]
    fn emitted_forms_are_valid_and_inequivalent() {
        let forms = enumerate_cubic_forms(0, 400, SignSelection::Both);
        for &f in &forms {
            assert!(is_irreducible(f));
            assert_eq!(is_maximal(f), Ok(true));
            assert!(disc_small(f).unsigned_abs() <= 400);
            assert_eq!(canonical_form(f), Ok(f));
        }
        for (i, &f) in forms.iter().enumerate() {
            for &g in &forms[i + 1..] {
                assert_eq!(are_equivalent(f, g), Ok(false), "{f} ~ {g}");
            }
        }
    }

    #[test]
    fn enumeration_is_complete_on_a_box() {
        // every irreducible maximal form in a box canonicalizes to an emitted form
        let x = 500u64;
        let emitted: BTreeSet<CubicForm> = enumerate_cubic_forms(0, x, SignSelection::Both)
            .into_iter()
            .collect();
        let mut seen = BTreeSet::new();
        for a in 1..=4i64 {
            for b in -12..=12i64 {
                for c in -12..=12i64 {
                    for d in -40..=40i64 {
                        let f = CubicForm::new(a, b, c, d);
                        let disc = disc_small(f);
                        if disc == 0 || disc.unsigned_abs() > x as u128 || !is_irreducible(f) {
                            continue;
                        }
                        if is_maximal(f) == Ok(true) {
                            seen.insert(canonical_form(f).unwrap());
                        }
                    }
                }
            }
        }
        assert!(seen.is_subset(&emitted));
        let in_box =
            |f: &&CubicForm| f.a <= 4 && f.b.abs() <= 12 && f.c.abs() <= 12 && f.d.abs() <= 40;
        assert!(emitted.iter().filter(in_box).all(|f| seen.contains(f)));
        assert_eq!(emitted.iter().filter(in_box).count(), emitted.len());
    }

    #[test]
    fn shard_merge_is_deterministic() {
        let whole = enumerate_cubic_fields(3000, SignSelection::Both);
        let lo = enumerate_range(0, 1500, SignSelection::Both);
        let hi = enumerate_range(1500, 3000, SignSelection::Both);
        assert_eq!(lo.merge(&hi), Ok(whole.clone()));
        assert_eq!(hi.merge(&lo), Ok(whole));
        let other = enumerate_range(1500, 3000, SignSelection::Negative);
        assert_eq!(lo.merge(&other), Err(Error::IncompatibleShards));
        let gap = enumerate_range(1600, 3000, SignSelection::Both);
        assert_eq!(lo.merge(&gap), Err(Error::IncompatibleShards));
    }

    #[test]
    fn csv_export_is_sorted_by_magnitude() {
        let tab = enumerate_cubic_fields(100, SignSelection::Both);
        let mut buf = Vec::new();
        tab.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "disc,count\n-23,1\n-31,1\n-44,1\n49,1\n-59,1\n-76,1\n81,1\n-83,1\n-87,1\n"
        );
    }
}
