//! Reflection identities between dihedral and Frobenius field counts.
//!
//! For an odd prime `ℓ` and a fundamental discriminant `D`, the number of
//! `D_ℓ`-fields with quadratic resolvent `ℚ(√D)` and discriminant
//! `D^{(ℓ-1)/2}` is read off the `ℓ`-rank of the class group of `ℚ(√D)`.
//! It equals (for `D < 0`), or determines via `ℓ·N + 1` (for `D > 0`), a
//! count of `F_ℓ`-fields at two explicit discriminants. Those discriminants
//! are derived here twice: from the closed-form exponents of the identity,
//! and from the admissible conductor exponents of the cyclic degree `ℓ`
//! extension over the mirror field combined with the Brauer relation
//! `Disc(E') = Disc(E)^{ℓ-1} Disc(F)`.
//!
//! Discriminants follow the convention `(-1)^{r₂}|D|`: the signature is part
//! of the datum.

use std::fmt;

use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{
    factorize, is_fundamental_discriminant, is_odd_prime, smallest_primitive_root, Factorization,
    FundamentalDiscriminant,
};
use crate::cubicforms::{count_n3, CubicTabulation};
use crate::error::{Error, Result};
use crate::quadforms::ell_rank;

/// A field discriminant together with its signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDiscriminant {
    pub degree: u32,
    /// Pairs of complex embeddings.
    pub r2: u32,
    /// `|Disc|`, always with sign +1.
    pub magnitude: Factorization,
}

impl FieldDiscriminant {
    pub fn new(degree: u32, r2: u32, magnitude: Factorization) -> Result<Self> {
        if degree == 0 || 2 * r2 > degree {
            return Err(Error::InvalidSignature { degree, r2 });
        }
        Ok(FieldDiscriminant {
            degree,
            r2,
            magnitude: magnitude.abs(),
        })
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.magnitude.valuation(p)
    }

    /// `(-1)^{r₂}|Disc|` as an exact decimal string.
    pub fn signed_decimal(&self) -> String {
        let m = self.magnitude.magnitude().to_string();
        if self.r2 % 2 == 1 {
            format!("-{m}")
        } else {
            m
        }
    }
}

impl fmt::Display for FieldDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(-1)^{} * {} [degree {}]",
            self.r2, self.magnitude, self.degree
        )
    }
}

impl Serialize for FieldDiscriminant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldDiscriminant", 4)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("r2", &self.r2)?;
        st.serialize_field("disc", &self.signed_decimal())?;
        st.serialize_field("factored", &self.magnitude.to_string())?;
        st.end()
    }
}

/// One instance of the main identity for `(ℓ, D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionRecord {
    pub ell: u64,
    #[serde(rename = "D")]
    pub d: FundamentalDiscriminant,
    /// Least primitive root mod `ℓ`, fixing the Galois condition on targets.
    pub g: u64,
    /// `D_ℓ`-fields of discriminant `D^{(ℓ-1)/2}` with resolvent `ℚ(√D)`.
    pub dl_count: u64,
    /// `dl_count` for `D < 0`, `ℓ·dl_count + 1` for `D > 0`.
    #[serde(rename = "lhs")]
    pub lhs_value: u64,
    pub targets: Vec<FieldDiscriminant>,
    /// Whether the target count carries the primitive-root Galois condition,
    /// which field tables cannot observe.
    pub star_required: bool,
}

/// Both sides of the cubic reflection identity, from a tabulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicReflectionReport {
    /// Always 3.
    pub ell: u64,
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "D_star")]
    pub d_star: i64,
    #[serde(rename = "N3_Dstar")]
    pub n3_dstar: u64,
    #[serde(rename = "N3_27D")]
    pub n3_27d: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// The three-term degree 5 identity that needs no Galois condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corollary5Report {
    pub d: FundamentalDiscriminant,
    pub dl_count_d: u64,
    pub dl_count_5d: u64,
    #[serde(rename = "lhs")]
    pub lhs_value: u64,
    pub targets: Vec<FieldDiscriminant>,
}

fn check_ell(ell: u64) -> Result<()> {
    if is_odd_prime(ell) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(ell))
    }
}

/// Rejects `D = 1` and `D = ±ℓ`.
fn check_not_excluded(ell: u64, d: FundamentalDiscriminant) -> Result<()> {
    let v = d.value();
    if v == 1 || v.unsigned_abs() == ell {
        return Err(Error::Excluded { ell, d: v });
    }
    Ok(())
}

fn half(ell: u64) -> u32 {
    ((ell - 1) / 2) as u32
}

fn abs_factorization(d: FundamentalDiscriminant) -> Factorization {
    factorize(d.value())
        .expect("fundamental discriminants are nonzero")
        .abs()
}

fn divides(ell: u64, d: FundamentalDiscriminant) -> bool {
    d.unsigned_abs().is_multiple_of(ell)
}

/// Discriminant of the mirror field: degree `ℓ - 1`, totally real iff
/// `D < 0`.
pub fn mirror_disc(ell: u64, d: FundamentalDiscriminant) -> Result<FieldDiscriminant> {
    check_ell(ell)?;
    check_not_excluded(ell, d)?;
    let h = half(ell);
    let abs = abs_factorization(d);
    let magnitude = if !divides(ell, d) {
        abs.pow(h).with_valuation(ell, (ell - 2) as u32)
    } else if ell % 4 == 1 {
        abs.without(ell)
            .pow(h)
            .with_valuation(ell, (ell - 2) as u32)
    } else {
        abs.without(ell)
            .pow(h)
            .with_valuation(ell, (ell - 3) as u32)
    };
    let r2 = if d.is_negative() { 0 } else { h };
    FieldDiscriminant::new((ell - 1) as u32, r2, magnitude)
}

/// Recovers `D` from a mirror field discriminant.
///
/// When `ℓ ≡ 1 (mod 4)`, `ℚ(√d)` and `ℚ(√ℓd)` share a mirror field, and the
/// discriminant determines only the pair. The `ℓ`-coprime member is
/// returned in that case.
pub fn classify_mirror(fd: &FieldDiscriminant, ell: u64) -> Result<FundamentalDiscriminant> {
    check_ell(ell)?;
    let shape = Error::NotMirrorShape { ell };
    let h = half(ell);
    if fd.degree as u64 != ell - 1 || (fd.r2 != 0 && fd.r2 != h) {
        return Err(shape);
    }
    let m = fd.magnitude.without(ell).root(h).ok_or(shape.clone())?;
    let m = i64::try_from(m.value().ok_or(shape.clone())?).map_err(|_| shape.clone())?;
    let sign = if fd.r2 == 0 { -1 } else { 1 };
    let ell_i = ell as i64;
    let v = fd.valuation(ell) as u64;
    let candidates: Vec<i64> = if v == ell - 2 {
        if ell % 4 == 1 {
            vec![sign * m, sign * ell_i * m]
        } else {
            vec![sign * m]
        }
    } else if v + 3 == ell && ell % 4 == 3 {
        vec![sign * ell_i * m]
    } else {
        Vec::new()
    };
    for c in candidates {
        if c == 0 || !is_fundamental_discriminant(c)? {
            continue;
        }
        let d = FundamentalDiscriminant::new(c)?;
        if check_not_excluded(ell, d).is_ok() && mirror_disc(ell, d)? == *fd {
            return Ok(d);
        }
    }
    Err(shape)
}

/// Discriminant datum of the `D_ℓ`-fields counted: degree `ℓ`,
/// `|D|^{(ℓ-1)/2}`, with `r₂ = (ℓ-1)/2` for `D < 0` and `0` for `D > 0`.
pub fn dl_disc(ell: u64, d: FundamentalDiscriminant) -> Result<FieldDiscriminant> {
    check_ell(ell)?;
    if d.value() == 1 {
        return Err(Error::Excluded { ell, d: 1 });
    }
    let h = half(ell);
    let r2 = if d.is_negative() { h } else { 0 };
    FieldDiscriminant::new(ell as u32, r2, abs_factorization(d).pow(h))
}

/// Number of `D_ℓ`-fields of discriminant `D^{(ℓ-1)/2}`: the number
/// `(ℓ^r - 1)/(ℓ - 1)` of index-`ℓ` subgroups of a class group of `ℓ`-rank `r`.
pub fn count_dl(ell: u64, d: FundamentalDiscriminant) -> Result<u64> {
    check_ell(ell)?;
    if d.value() == 1 {
        return Err(Error::Excluded { ell, d: 1 });
    }
    let r = ell_rank(d, ell)?;
    let total = ell.checked_pow(r).ok_or(Error::Overflow)?;
    Ok((total - 1) / (ell - 1))
}

/// Admissible `ℓ`-adic conductor exponents of the cyclic extension over the
/// mirror field, ascending.
pub fn admissible_conductor_exponents(ell: u64, d: FundamentalDiscriminant) -> Result<Vec<u32>> {
    check_ell(ell)?;
    check_not_excluded(ell, d)?;
    let ell32 = ell as u32;
    Ok(if !divides(ell, d) {
        vec![0, 2]
    } else if ell % 4 == 1 {
        vec![0, (ell32 + 3) / 2]
    } else {
        vec![0, 2, (ell32 + 5) / 2]
    })
}

/// The degree `ℓ` discriminant forced by conductor exponent `k`, or `None`
/// when `ℓ | D`, `ℓ ≡ 3 (mod 4)` and `k = 2` (the `ℓ`-adic valuation of a
/// degree `ℓ` discriminant cannot be `ℓ - 1`).
pub fn fl_disc_from_conductor(
    ell: u64,
    d: FundamentalDiscriminant,
    k: u32,
) -> Result<Option<FieldDiscriminant>> {
    if !admissible_conductor_exponents(ell, d)?.contains(&k) {
        return Err(Error::NotAdmissible {
            ell,
            d: d.value(),
            k,
        });
    }
    let h = half(ell);
    let ell32 = ell as u32;
    let split_ramified = divides(ell, d) && ell % 4 == 3;
    if split_ramified && k == 2 {
        return Ok(None);
    }
    let v = if split_ramified {
        ell32 - 3 + k
    } else {
        ell32 - 2 + k
    };
    let magnitude = abs_factorization(d)
        .without(ell)
        .pow(h)
        .with_valuation(ell, v);
    let r2 = if d.is_negative() { 0 } else { h };
    Ok(Some(FieldDiscriminant::new(ell32, r2, magnitude)?))
}

/// The non-excluded conductor-route discriminants, ascending in `v_ℓ`.
pub fn conductor_route_targets(
    ell: u64,
    d: FundamentalDiscriminant,
) -> Result<Vec<FieldDiscriminant>> {
    let mut out = Vec::new();
    for k in admissible_conductor_exponents(ell, d)? {
        if let Some(fd) = fl_disc_from_conductor(ell, d, k)? {
            out.push(fd);
        }
    }
    out.sort_by_key(|fd| fd.valuation(ell));
    Ok(out)
}

/// The two `F_ℓ` discriminants of the identity for `(ℓ, D)`:
/// `ℓ^b|D|^{(ℓ-1)/2}` and `ℓ^ℓ|D|^{(ℓ-1)/2}` with
/// `b = ℓ-2`, `(ℓ-3)/2` or `(ℓ-5)/2` according to `ℓ ∤ D`,
/// `ℓ | D ∧ ℓ ≡ 1 (4)`, `ℓ | D ∧ ℓ ≡ 3 (4)`. The exponent `b` may be
/// negative; only the product with `|D|^{(ℓ-1)/2}` is integral.
pub fn target_discs(ell: u64, d: FundamentalDiscriminant) -> Result<[FieldDiscriminant; 2]> {
    check_ell(ell)?;
    check_not_excluded(ell, d)?;
    let h = half(ell);
    let ell_i = ell as i64;
    let b: i64 = if !divides(ell, d) {
        ell_i - 2
    } else if ell % 4 == 1 {
        (ell_i - 3) / 2
    } else {
        (ell_i - 5) / 2
    };
    let power = abs_factorization(d).pow(h);
    let base = power.valuation(ell) as i64;
    let r2 = if d.is_negative() { 0 } else { h };
    let build = |exp: i64| -> Result<FieldDiscriminant> {
        let v = base + exp;
        assert!(v >= 0, "target discriminant must be integral");
        FieldDiscriminant::new(ell as u32, r2, power.with_valuation(ell, v as u32))
    };
    Ok([build(b)?, build(ell_i)?])
}

/// Full prediction record for `(ℓ, D)`.
pub fn predict(ell: u64, d: FundamentalDiscriminant) -> Result<PredictionRecord> {
    let targets = target_discs(ell, d)?;
    let dl_count = count_dl(ell, d)?;
    let lhs_value = if d.is_negative() {
        dl_count
    } else {
        ell.checked_mul(dl_count).ok_or(Error::Overflow)? + 1
    };
    Ok(PredictionRecord {
        ell,
        d,
        g: smallest_primitive_root(ell)?,
        dl_count,
        lhs_value,
        targets: targets.to_vec(),
        star_required: ell >= 7,
    })
}

/// `D*`: `-3D` if `3 ∤ D`, `-D/3` if `3 | D`.
pub fn d_star(d: i64) -> i64 {
    if d % 3 == 0 {
        -d / 3
    } else {
        -3 * d
    }
}

/// Checks `N₃(D*) + N₃(-27D) = N₃(D)` (`D < 0`) or `3N₃(D) + 1` (`D > 0`)
/// against a cubic field tabulation.
pub fn verify_on3(
    d: FundamentalDiscriminant,
    tab: &CubicTabulation,
) -> Result<CubicReflectionReport> {
    let v = d.value();
    if v == 1 || v == -3 {
        return Err(Error::Excluded { ell: 3, d: v });
    }
    let ds = d_star(v);
    let d27 = v.checked_mul(-27).ok_or(Error::Overflow)?;
    if !(tab.covers(v) && tab.covers(ds) && tab.covers(d27)) {
        return Err(Error::InsufficientRange(v));
    }
    let n3_dstar = count_n3(ds, tab)?;
    let n3_27d = count_n3(d27, tab)?;
    let n3_d = count_n3(v, tab)?;
    let rhs = if v < 0 { n3_d } else { 3 * n3_d + 1 };
    let lhs = n3_dstar + n3_27d;
    Ok(CubicReflectionReport {
        ell: 3,
        d: v,
        d_star: ds,
        n3_dstar,
        n3_27d,
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}

/// [`verify_on3`] for every fundamental `D` with `1 < |D| ≤ dmax`,
/// `D ≠ -3`, ordered by `D`.
pub fn verify_on3_range(dmax: u64, tab: &CubicTabulation) -> Result<Vec<CubicReflectionReport>> {
    let bound = i64::try_from(dmax).map_err(|_| Error::Overflow)?;
    crate::arith::fundamental_discriminants_in(-bound, bound)
        .into_par_iter()
        .filter(|d| !matches!(d.value(), 1 | -3))
        .map(|d| verify_on3(d, tab))
        .collect()
}

/// Degree 5 identity without Galois condition, for `d` coprime to 5:
/// `N(d²) + N((5d)²)` (times 5, plus 2, when `d > 0`) equals the number of
/// `F₅`-fields at `5³d²`, `5⁵d²`, `5⁷d²`.
pub fn corollary5_predict(d: FundamentalDiscriminant) -> Result<Corollary5Report> {
    let v = d.value();
    if v == 1 || v % 5 == 0 {
        return Err(Error::Excluded { ell: 5, d: v });
    }
    let five_d = FundamentalDiscriminant::new(v.checked_mul(5).ok_or(Error::Overflow)?)?;
    let dl_count_d = count_dl(5, d)?;
    let dl_count_5d = count_dl(5, five_d)?;
    let sum = dl_count_d + dl_count_5d;
    let lhs_value = if v < 0 { sum } else { 5 * sum + 2 };
    let r2 = if v < 0 { 0 } else { 2 };
    let square = abs_factorization(d).pow(2);
    let targets = [3, 5, 7]
        .into_iter()
        .map(|e| FieldDiscriminant::new(5, r2, square.with_valuation(5, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Corollary5Report {
        d,
        dl_count_d,
        dl_count_5d,
        lhs_value,
        targets,
    })
}
