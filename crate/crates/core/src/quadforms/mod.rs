//! Binary quadratic forms `ax² + bxy + cy²` and their class groups.
//!
//! Negative discriminants use positive definite forms and Gauss reduction.
//! Positive discriminants use the rho operator: every indefinite form reaches
//! a reduced form, and two forms are properly equivalent exactly when their
//! reduced forms lie on the same rho cycle. The cycles are the classes of the
//! narrow class group.

mod group;

use std::fmt;

use serde::Serialize;

use crate::arith::isqrt;
use crate::error::{Error, Result};

pub use group::{class_group, class_representatives, ell_rank, ClassGroupStructure, ClassSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// The identity class: `x² + xy + (1-D)/4 y²` or `x² - (D/4) y²`.
    pub fn principal(d: i64) -> Result<Self> {
        check_discriminant(d)?;
        Ok(if d.rem_euclid(4) == 0 {
            QuadForm::new(1, 0, -d / 4)
        } else {
            QuadForm::new(1, 1, (1 - d) / 4)
        })
    }

    /// The inverse class: `(a, -b, c)`.
    pub fn inverse(self) -> Self {
        QuadForm::new(self.a, -self.b, self.c)
    }

    pub fn as_tuple(self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// `b² - 4ac`, exact for all inputs.
pub fn form_discriminant(f: QuadForm) -> i128 {
    let (a, b, c) = (f.a as i128, f.b as i128, f.c as i128);
    b * b - 4 * a * c
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = isqrt(n as u64);
        r * r == n as u64
    }
}

/// Rejects zero, squares and residues other than 0, 1 mod 4.
pub(crate) fn check_discriminant(d: i64) -> Result<()> {
    if d == 0 || is_square(d) || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::DegenerateDiscriminant(d));
    }
    Ok(())
}

fn discriminant_of(f: QuadForm) -> Result<i64> {
    let d = i64::try_from(form_discriminant(f)).map_err(|_| Error::Overflow)?;
    check_discriminant(d)?;
    Ok(d)
}

fn narrow(a: i128, b: i128, c: i128) -> Result<QuadForm> {
    let conv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow);
    Ok(QuadForm::new(conv(a)?, conv(b)?, conv(c)?))
}

fn reduce_definite(f: QuadForm) -> Result<QuadForm> {
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.c as i128);
    loop {
        if b <= -a || b > a {
            // translate x -> x + k y to bring b into (-a, a]
            let k = (a - b).div_euclid(2 * a);
            c += k * (b + a * k);
            b += 2 * a * k;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return narrow(a, b, c);
    }
}

/// Exact test of `0 < b < √D` and `√D - b < 2|a| < √D + b` for nonsquare `D`.
pub fn is_reduced_indefinite(f: QuadForm, d: i64) -> bool {
    let (a, b, d) = (f.a as i128, f.b as i128, d as i128);
    let t = 2 * a.abs();
    b > 0 && b * b < d && d < (t + b) * (t + b) && (t - b < 0 || (t - b) * (t - b) < d)
}

/// One rho step: `(a, b, c) -> (c, r, (r² - D)/4c)` with `r ≡ -b (mod 2c)`.
pub(crate) fn rho(f: QuadForm, d: i64, sqrt_d: i64) -> Result<QuadForm> {
    let (b, c, d128) = (f.b as i128, f.c as i128, d as i128);
    let m = 2 * c.abs();
    let r = if c * c < d128 {
        let s = sqrt_d as i128;
        s - (s + b).rem_euclid(m)
    } else {
        let r = (-b).rem_euclid(m);
        if r > c.abs() {
            r - m
        } else {
            r
        }
    };
    narrow(c, r, (r * r - d128) / (4 * c))
}

fn reduce_indefinite(f: QuadForm, d: i64) -> Result<QuadForm> {
    let s = isqrt(d as u64) as i64;
    let mut g = f;
    while !is_reduced_indefinite(g, d) {
        g = rho(g, d, s)?;
    }
    Ok(g)
}

/// Reduced representative. For `D < 0` this is the unique reduced form of
/// the class; for `D > 0` it is the first reduced form on the rho path.
pub fn reduce(f: QuadForm) -> Result<QuadForm> {
    let d = discriminant_of(f)?;
    if d < 0 {
        if f.a <= 0 {
            return Err(Error::NotPositiveDefinite(f.as_tuple()));
        }
        reduce_definite(f)
    } else {
        reduce_indefinite(f, d)
    }
}

/// The rho cycle through a reduced indefinite form, starting at `f`.
pub fn reduction_cycle(f: QuadForm) -> Result<Vec<QuadForm>> {
    let d = discriminant_of(f)?;
    if d < 0 {
        return Ok(vec![reduce(f)?]);
    }
    let start = reduce_indefinite(f, d)?;
    let s = isqrt(d as u64) as i64;
    let mut cycle = vec![start];
    let mut g = rho(start, d, s)?;
    while g != start {
        cycle.push(g);
        g = rho(g, d, s)?;
    }
    Ok(cycle)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with x a + y b = g >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Gauss composition of two forms of the same discriminant, returned reduced.
pub fn compose(f: QuadForm, g: QuadForm) -> Result<QuadForm> {
    let d = discriminant_of(f)?;
    let dg = discriminant_of(g)?;
    if d != dg {
        return Err(Error::DiscriminantMismatch(d, dg));
    }
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let d128 = d as i128;
    let s = (b1 + b2) / 2;
    let (g1, x1, y1) = ext_gcd(a1, a2);
    let (e, x2, nu) = ext_gcd(g1, s);
    let (lambda, mu) = (x2 * x1, x2 * y1);
    let b = (lambda * a1 * b2 + mu * a2 * b1 + nu * (b1 * b2 + d128) / 2) / e;
    let a = a1 * a2 / (e * e);
    let m = 2 * a.abs();
    let b = b.rem_euclid(m);
    let c = (b * b - d128) / (4 * a);
    debug_assert_eq!(b * b - 4 * a * c, d128);
    let composed = narrow(a, b, c)?;
    if d < 0 {
        reduce_definite(composed)
    } else {
        reduce_indefinite(composed, d)
    }
}

/// Proper equivalence: equal reduced forms for `D < 0`, a shared rho cycle
/// for `D > 0`.
pub fn is_equivalent(f: QuadForm, g: QuadForm) -> Result<bool> {
    let d = discriminant_of(f)?;
    let dg = discriminant_of(g)?;
    if d != dg {
        return Err(Error::DiscriminantMismatch(d, dg));
    }
    if d < 0 {
        return Ok(reduce(f)? == reduce(g)?);
    }
    let target = reduce(g)?;
    Ok(reduction_cycle(f)?.contains(&target))
}
