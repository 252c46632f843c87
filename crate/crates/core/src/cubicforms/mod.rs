//! Integral binary cubic forms and the tabulation of cubic fields.
//!
//! Under the Delone-Faddeev and Davenport-Heilbronn correspondences, classes
//! of irreducible forms `f` under `f ↦ ±f∘γ` (`γ ∈ GL₂(ℤ)`) whose ring is
//! maximal are in bijection with cubic fields, and the form discriminant is
//! the field discriminant. Counting fields is therefore counting canonical
//! representatives, see [`is_canonical`] for the choice of representative.

mod enumerate;
mod maximal;
mod reduce;

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::factorize_u64;

pub use enumerate::{
    count_n3, enumerate_cubic_fields, enumerate_cubic_forms, enumerate_range, CubicTabulation,
    SignSelection,
};
pub use maximal::is_maximal;
pub use reduce::{are_equivalent, canonical_form, is_canonical};

/// `ax³ + bx²y + cxy² + dy³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CubicForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        CubicForm { a, b, c, d }
    }

    pub fn as_tuple(self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    fn coeffs(self) -> [i128; 4] {
        [
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.d as i128,
        ]
    }

    pub fn negate(self) -> Self {
        CubicForm::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// `f(αx + βy, γx + δy)`, or `None` on overflow.
    pub fn transform(self, m: [[i64; 2]; 2]) -> Option<Self> {
        let x = [m[0][0] as i128, m[0][1] as i128];
        let y = [m[1][0] as i128, m[1][1] as i128];
        let mul = |p: &[i128], q: &[i128; 2]| -> Vec<i128> {
            let mut out = vec![0i128; p.len() + 1];
            for (i, &pi) in p.iter().enumerate() {
                out[i] += pi * q[0];
                out[i + 1] += pi * q[1];
            }
            out
        };
        let x2 = mul(&x, &x);
        let y2 = mul(&y, &y);
        let terms = [
            mul(&x2, &x),
            mul(&x2, &y),
            mul(&mul(&x, &y), &y),
            mul(&y2, &y),
        ];
        let mut out = [0i128; 4];
        for (coef, term) in self.coeffs().iter().zip(terms.iter()) {
            for k in 0..4 {
                out[k] = out[k].checked_add(coef.checked_mul(term[k])?)?;
            }
        }
        Some(CubicForm::new(
            i64::try_from(out[0]).ok()?,
            i64::try_from(out[1]).ok()?,
            i64::try_from(out[2]).ok()?,
            i64::try_from(out[3]).ok()?,
        ))
    }

    /// `f(x + ky, y)`.
    pub fn translate(self, k: i64) -> Option<Self> {
        self.transform([[1, k], [0, 1]])
    }

    /// `f(-y, x) = (d, -c, b, -a)`.
    pub fn swap(self) -> Self {
        CubicForm::new(self.d, -self.c, self.b, -self.a)
    }

    /// `f(x, -y) = (a, -b, c, -d)`.
    pub fn mirror(self) -> Self {
        CubicForm::new(self.a, -self.b, self.c, -self.d)
    }

    /// Value at an integer point, exact.
    pub fn eval(self, x: i128, y: i128) -> BigInt {
        let [a, b, c, d] = self.coeffs().map(BigInt::from);
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        a * &x * &x * &x + b * &x * &x * &y + c * &x * &y * &y + d * &y * &y * &y
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// `18abcd + b²c² - 4ac³ - 4b³d - 27a²d²`, exact.
pub fn cubic_disc(f: CubicForm) -> BigInt {
    let [a, b, c, d] = f.coeffs().map(BigInt::from);
    BigInt::from(18) * &a * &b * &c * &d + &b * &b * &c * &c
        - BigInt::from(4) * &a * &c * &c * &c
        - BigInt::from(4) * &b * &b * &b * &d
        - BigInt::from(27) * &a * &a * &d * &d
}

/// Discriminant in `i128` for coefficients small enough that no term overflows.
pub(crate) fn disc_small(f: CubicForm) -> i128 {
    let [a, b, c, d] = f.coeffs();
    18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d
}

/// The Hessian covariant `(P, Q, R) = (b² - 3ac, bc - 9ad, c² - 3bd)`,
/// with `Q² - 4PR = -3·disc`.
pub fn hessian(f: CubicForm) -> (i128, i128, i128) {
    let [a, b, c, d] = f.coeffs();
    (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in factorize_u64(n).expect("nonzero").factors() {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

fn vanishes_at(f: CubicForm, x: i128, y: i128) -> bool {
    let [a, b, c, d] = f.coeffs();
    let small = (|| {
        let x2 = x.checked_mul(x)?;
        let y2 = y.checked_mul(y)?;
        a.checked_mul(x2.checked_mul(x)?)?
            .checked_add(b.checked_mul(x2)?.checked_mul(y)?)?
            .checked_add(c.checked_mul(x)?.checked_mul(y2)?)?
            .checked_add(d.checked_mul(y2.checked_mul(y)?)?)
    })();
    match small {
        Some(v) => v == 0,
        None => f.eval(x, y) == BigInt::ZERO,
    }
}

/// True iff `a ≠ 0` and `f(x, 1)` has no rational root.
pub fn is_irreducible(f: CubicForm) -> bool {
    if f.a == 0 || f.d == 0 {
        return false;
    }
    let qs = divisors(f.a.unsigned_abs());
    let ps = divisors(f.d.unsigned_abs());
    for &q in &qs {
        for &p in &ps {
            for p in [p as i128, -(p as i128)] {
                if vanishes_at(f, p, q as i128) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const fn cf(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
        CubicForm::new(a, b, c, d)
    }

    #[test]
    fn discriminants() {
        assert_eq!(cubic_disc(cf(1, 0, -1, -1)), BigInt::from(-23));
        assert_eq!(cubic_disc(cf(1, 0, 0, 1)), BigInt::from(-27));
        assert_eq!(cubic_disc(cf(1, 1, -2, -1)), BigInt::from(49));
        assert_eq!(disc_small(cf(1, 0, 3, -1)), -135);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(cf(1, 0, -1, -1)));
        assert!(!is_irreducible(cf(1, 0, 0, 1)));
        assert!(!is_irreducible(cf(0, 1, 0, -1)));
        assert!(!is_irreducible(cf(2, -3, 0, 1)));
        assert!(!is_irreducible(cf(6, 1, -1, 0)));
        assert!(is_irreducible(cf(1, 0, 0, 2)));
        // 3x³ - 2 has no rational root; 27x³ - 8 has root 2/3
        assert!(is_irreducible(cf(3, 0, 0, -2)));
        assert!(!is_irreducible(cf(27, 0, 0, -8)));
    }

    #[test]
    fn named_transforms_agree_with_matrices() {
        let f = cf(2, -3, 5, 7);
        assert_eq!(f.transform([[0, -1], [1, 0]]), Some(f.swap()));
        assert_eq!(f.transform([[1, 0], [0, -1]]), Some(f.mirror()));
        assert_eq!(f.translate(1), Some(cf(2, 3, 5, 11)));
    }

    proptest! {
        #[test]
        fn hessian_syzygy(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let f = cf(a, b, c, d);
            let (p, q, r) = hessian(f);
            let disc = disc_small(f);
            prop_assert_eq!(q * q - 4 * p * r, -3 * disc);
            prop_assert_eq!(BigInt::from(disc), cubic_disc(f));
        }

        #[test]
        fn discriminant_is_invariant(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20,
                                     k in -5i64..5, which in 0usize..4) {
            let f = cf(a, b, c, d);
            let m = [[[1, k], [0, 1]], [[0, -1], [1, 0]], [[1, 0], [0, -1]], [[1, 0], [k, 1]]][which];
            let g = f.transform(m).unwrap();
            prop_assert_eq!(disc_small(g), disc_small(f));
            prop_assert_eq!(disc_small(g.negate()), disc_small(f));
        }
    }
}
