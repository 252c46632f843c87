//! Local maximality of the cubic ring attached to a form.
//!
//! The ring of `f` fails to be maximal at `p` exactly when `f ≡ 0 (mod p)`
//! or `f` is equivalent to a form with `p² | a` and `p | b`. The second
//! condition says that `f` has a multiple root `v` in `P¹(F_p)` (where `f`
//! and both partial derivatives vanish) and that `f(v) ≡ 0 (mod p²)` for an
//! integral lift of `v`. Because the gradient vanishes mod `p`, the value
//! mod `p²` does not depend on the lift. Only primes with `p² | disc` can
//! divide the index.

use super::{cubic_disc, hessian, is_irreducible, CubicForm};
use crate::arith::{factorize, pow_mod};
use crate::error::{Error, Result};

fn residue(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

fn eval_mod(f: CubicForm, x: u64, y: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let (x, y) = (x as u128 % m128, y as u128 % m128);
    let coeffs = [f.a, f.b, f.c, f.d].map(|k| residue(k as i128, m) as u128);
    let mul = |u: u128, v: u128| u * v % m128;
    let x2 = mul(x, x);
    let y2 = mul(y, y);
    let terms = [mul(x2, x), mul(x2, y), mul(x, y2), mul(y2, y)];
    (coeffs
        .iter()
        .zip(terms)
        .fold(0u128, |acc, (&c, t)| (acc + mul(c, t)) % m128)) as u64
}

fn gradient_vanishes(f: CubicForm, x: u64, y: u64, p: u64) -> bool {
    let (a, b, c, d) = (f.a as i128, f.b as i128, f.c as i128, f.d as i128);
    let (x, y) = (x as i128, y as i128);
    let pi = p as i128;
    // partials evaluated with residues kept small
    let r = |v: i128| v.rem_euclid(pi);
    let (x, y) = (r(x), r(y));
    let fx = r(r(3 * a) * r(x * x) + r(2 * b) * r(x * y) + r(c) * r(y * y));
    let fy = r(r(b) * r(x * x) + r(2 * c) * r(x * y) + r(3 * d) * r(y * y));
    fx == 0 && fy == 0
}

/// A root of multiplicity at least two of `f mod p` in `P¹(F_p)`, as a
/// primitive integer vector. Assumes `f ≢ 0 (mod p)`.
fn multiple_root(f: CubicForm, p: u64) -> Option<(u64, u64)> {
    let is_multiple = |x: u64, y: u64| eval_mod(f, x, y, p) == 0 && gradient_vanishes(f, x, y, p);
    if p <= 3 {
        return (0..p)
            .map(|t| (t, 1))
            .chain(std::iter::once((1, 0)))
            .find(|&(x, y)| is_multiple(x, y));
    }
    // for p > 3 the Hessian is a square mod p whose root is the double root,
    // and vanishes identically at a triple root
    let inv = |v: u64| pow_mod(v, p - 2, p);
    let (hp, hq, hr) = hessian(f);
    let (hp, hq, hr) = (residue(hp, p), residue(hq, p), residue(hr, p));
    let candidate = if hp != 0 || hq != 0 || hr != 0 {
        if hp != 0 {
            ((p - hq) % p * inv(2 * hp % p) % p, 1)
        } else {
            (1, 0)
        }
    } else {
        let a = residue(f.a as i128, p);
        if a != 0 {
            let b = residue(f.b as i128, p);
            ((p - b) % p * inv(3 * a % p) % p, 1)
        } else {
            (1, 0)
        }
    };
    is_multiple(candidate.0, candidate.1).then_some(candidate)
}

/// Whether the ring of `f` is maximal at the prime `p`.
pub(crate) fn maximal_at(f: CubicForm, p: u64) -> bool {
    let pi = p as i64;
    if [f.a, f.b, f.c, f.d].iter().all(|&k| k % pi == 0) {
        return false;
    }
    match multiple_root(f, p) {
        Some((x, y)) => eval_mod(f, x, y, p * p) != 0,
        None => true,
    }
}

/// Whether the cubic ring of `f` is the maximal order of its field,
/// equivalently whether `disc(f)` is the field discriminant.
pub fn is_maximal(f: CubicForm) -> Result<bool> {
    if !is_irreducible(f) {
        return Err(Error::Reducible(f.as_tuple()));
    }
    let disc = i64::try_from(cubic_disc(f)).map_err(|_| Error::Overflow)?;
    let fac = factorize(disc)?;
    Ok(fac
        .factors()
        .iter()
        .all(|&(p, e)| e < 2 || maximal_at(f, p)))
}
