//! Canonical representatives of classes `{±f∘γ : γ ∈ GL₂(ℤ)}`.
//!
//! Negative discriminant: write `f(x, 1) = a(x - θ)(x² + px + r)` with `θ`
//! real. The complex root `z` of the quadratic factor has `p = -2 Re z` and
//! `r = |z|²`, and `f` is canonical when `a > 0` and `0 < p < 1 < r`, i.e.
//! `z` lies in the interior of a fundamental domain for `GL₂(ℤ)`. The
//! boundary cases force a rational factor, so every class of irreducible
//! forms has exactly one canonical member. With `a > 0` the three
//! inequalities are equivalent to
//!
//! - `p > 0`: `bc - ad > 0`
//! - `p < 1`: `(a - b)² + c(a - b) + ad > 0`
//! - `r > 1`: `d² - a² + ac - bd > 0`
//!
//! Positive discriminant: the Hessian is positive definite. `f` is
//! canonical when its Hessian `(P, Q, R)` satisfies `|Q| ≤ P ≤ R` and `f` is
//! the lexicographically largest of the forms `±f∘γ` whose Hessian is also
//! reduced. Every `γ` between two such Hessians has entries in `{-1, 0, 1}`,
//! so the comparison set is finite and small.
//!
//! Coefficients are assumed below `2⁶⁰` in absolute value.

use std::sync::OnceLock;

use num_bigint::Sign;

use super::{cubic_disc, hessian, is_irreducible, CubicForm};
use crate::error::{Error, Result};

fn small_matrices() -> &'static [[[i64; 2]; 2]] {
    static CELL: OnceLock<Vec<[[i64; 2]; 2]>> = OnceLock::new();
    CELL.get_or_init(|| {
        let r = -1..=1i64;
        let mut out = Vec::new();
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    for d in r.clone() {
                        if (a * d - b * c).abs() == 1 {
                            out.push([[a, b], [c, d]]);
                        }
                    }
                }
            }
        }
        out
    })
}

fn coeffs(f: CubicForm) -> (i128, i128, i128, i128) {
    (f.a as i128, f.b as i128, f.c as i128, f.d as i128)
}

fn p_positive(f: CubicForm) -> bool {
    let (a, b, c, d) = coeffs(f);
    b * c - a * d > 0
}

fn p_below_one(f: CubicForm) -> bool {
    let (a, b, c, d) = coeffs(f);
    (a - b) * (a - b) + c * (a - b) + a * d > 0
}

fn p_above_minus_one(f: CubicForm) -> bool {
    p_below_one(f.mirror())
}

fn r_above_one(f: CubicForm) -> bool {
    let (a, b, c, d) = coeffs(f);
    d * d - a * a + a * c - b * d > 0
}

/// Canonicity for a form already known to have negative discriminant.
pub(crate) fn is_canonical_negative(f: CubicForm) -> bool {
    f.a > 0 && p_positive(f) && p_below_one(f) && r_above_one(f)
}

fn hessian_reduced(f: CubicForm) -> bool {
    let (p, q, r) = hessian(f);
    q.abs() <= p && p <= r
}

/// Lexicographic maximum of `±f∘γ` over small `γ` keeping the Hessian reduced.
fn best_positive(f: CubicForm) -> CubicForm {
    small_matrices()
        .iter()
        .filter_map(|&m| f.transform(m))
        .filter(|&g| hessian_reduced(g))
        .flat_map(|g| [g, g.negate()])
        .max()
        .expect("identity keeps a reduced Hessian")
}

/// Canonicity for a form already known to have positive discriminant.
pub(crate) fn is_canonical_positive(f: CubicForm) -> bool {
    hessian_reduced(f) && best_positive(f) == f
}

/// Whether `f` is the canonical representative of its class.
pub fn is_canonical(f: CubicForm) -> bool {
    match cubic_disc(f).sign() {
        Sign::Minus => is_canonical_negative(f),
        Sign::Plus => is_canonical_positive(f),
        Sign::NoSign => false,
    }
}

/// The real root of `f(x, 1)` when it has exactly one, to double precision.
fn real_root(f: CubicForm) -> f64 {
    let (a, b, c, d) = (f.a as f64, f.b as f64, f.c as f64, f.d as f64);
    let bound = 1.0 + [b, c, d].iter().map(|v| (v / a).abs()).fold(0.0, f64::max);
    let eval = |x: f64| ((a * x + b) * x + c) * x + d;
    let (mut lo, mut hi) = (-bound, bound);
    let lo_sign = eval(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn canonical_negative(f: CubicForm) -> Result<CubicForm> {
    let mut g = f;
    loop {
        if g.a < 0 {
            g = g.negate();
        }
        let below = p_below_one(g);
        if !below || !p_above_minus_one(g) {
            let p = g.b as f64 / g.a as f64 + real_root(g);
            let mut k = (-p / 2.0).round() as i64;
            if k == 0 {
                k = if below { 1 } else { -1 };
            }
            g = g.translate(k).ok_or(Error::Overflow)?;
            continue;
        }
        if !r_above_one(g) {
            g = g.swap();
            continue;
        }
        if !p_positive(g) {
            g = g.mirror();
        }
        return Ok(g);
    }
}

fn canonical_positive(f: CubicForm) -> Result<CubicForm> {
    let mut g = f;
    loop {
        let (p, q, r) = hessian(g);
        if q.abs() > p {
            // Q + 2kP lands in (-P, P]
            let k = (p - q).div_euclid(2 * p);
            g = g
                .translate(i64::try_from(k).map_err(|_| Error::Overflow)?)
                .ok_or(Error::Overflow)?;
            continue;
        }
        if p > r {
            g = g.swap();
            continue;
        }
        return Ok(best_positive(g));
    }
}

/// The canonical member of the class of an irreducible form.
pub fn canonical_form(f: CubicForm) -> Result<CubicForm> {
    if !is_irreducible(f) {
        return Err(Error::Reducible(f.as_tuple()));
    }
    match cubic_disc(f).sign() {
        Sign::Minus => canonical_negative(f),
        _ => canonical_positive(f),
    }
}

/// Whether `f = ±g∘γ` for some `γ ∈ GL₂(ℤ)`. Both forms must be irreducible.
pub fn are_equivalent(f: CubicForm, g: CubicForm) -> Result<bool> {
    Ok(canonical_form(f)? == canonical_form(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const fn cf(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
        CubicForm::new(a, b, c, d)
    }

    #[test]
    fn small_matrix_set() {
        assert_eq!(small_matrices().len(), 40);
    }

    #[test]
    fn canonical_examples() {
        let f = canonical_form(cf(1, 0, -1, -1)).unwrap();
        assert!(is_canonical(f));
        assert_eq!(cubic_disc(f), cubic_disc(cf(1, 0, -1, -1)));
        let g = canonical_form(cf(1, 1, -2, -1)).unwrap();
        assert!(is_canonical(g));
        assert_eq!(
            canonical_form(cf(1, 0, 0, 1)),
            Err(Error::Reducible((1, 0, 0, 1)))
        );
        assert_eq!(are_equivalent(cf(1, 0, 0, 2), cf(1, 0, 0, 4)), Ok(false));
        assert_eq!(are_equivalent(cf(1, 0, 0, 2), cf(2, 0, 0, 1)), Ok(true));
        assert_eq!(are_equivalent(cf(1, 0, 0, 2), cf(-2, 0, 0, -1)), Ok(true));
    }

    fn irreducible_form() -> impl Strategy<Value = CubicForm> {
        (1i64..12, -30i64..30, -30i64..30, -30i64..30)
            .prop_map(|(a, b, c, d)| cf(a, b, c, d))
            .prop_filter("irreducible", |&f| is_irreducible(f))
    }

    fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
        proptest::collection::vec((0usize..4, -3i64..=3), 1..6).prop_map(|steps| {
            let mut m = [[1i64, 0], [0, 1]];
            for (kind, k) in steps {
                let e = match kind {
                    0 => [[1, k], [0, 1]],
                    1 => [[1, 0], [k, 1]],
                    2 => [[0, -1], [1, 0]],
                    _ => [[1, 0], [0, -1]],
                };
                m = [
                    [
                        m[0][0] * e[0][0] + m[0][1] * e[1][0],
                        m[0][0] * e[0][1] + m[0][1] * e[1][1],
                    ],
                    [
                        m[1][0] * e[0][0] + m[1][1] * e[1][0],
                        m[1][0] * e[0][1] + m[1][1] * e[1][1],
                    ],
                ];
            }
            m
        })
    }

    proptest! {
        #[test]
        fn canonical_form_is_canonical_and_idempotent(f in irreducible_form()) {
            let g = canonical_form(f).unwrap();
            prop_assert!(is_canonical(g), "{} -> {}", f, g);
            prop_assert_eq!(canonical_form(g).unwrap(), g);
            prop_assert_eq!(cubic_disc(g), cubic_disc(f));
        }

        #[test]
        fn canonical_form_is_class_invariant(f in irreducible_form(), m in unimodular(), neg in any::<bool>()) {
            let mut g = f.transform(m).unwrap();
            if neg {
                g = g.negate();
            }
            prop_assert_eq!(canonical_form(g).unwrap(), canonical_form(f).unwrap());
        }
    }
}
