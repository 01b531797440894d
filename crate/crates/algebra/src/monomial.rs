//! Packed exponent vectors.
//!
//! A monomial in at most [`MAX_VARS`] variables is packed into a `u128` as
//! eight 16-bit lanes: the top lane holds the total degree, lane `i + 1` the
//! exponent of variable `i`. With that layout the integer order of the packed
//! word is exactly graded-lexicographic order (`X1 > X2 > …`), and monomial
//! multiplication is a single addition.

use std::fmt;

pub const MAX_VARS: usize = 7;
const LANE: u32 = 16;
const LANE_MASK: u128 = 0xffff;
const DEG_SHIFT: u32 = 112;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(u128);

#[inline]
fn shift(var: usize) -> u32 {
    DEG_SHIFT - LANE * (var as u32 + 1)
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// Panics if `var >= MAX_VARS`.
    pub fn var(var: usize) -> Self {
        Self::var_pow(var, 1)
    }

    pub fn var_pow(var: usize, e: u32) -> Self {
        assert!(var < MAX_VARS, "variable index {var} out of range");
        assert!(e <= LANE_MASK as u32, "exponent overflow");
        Monomial(((e as u128) << DEG_SHIFT) | ((e as u128) << shift(var)))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                m = m * Monomial::var_pow(i, e);
            }
        }
        m
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> shift(var)) & LANE_MASK) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Whether `self` divides `other`.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        if self.degree() > other.degree() {
            return false;
        }
        (0..MAX_VARS).all(|i| self.exponent(i) <= other.exponent(i))
    }

    /// `self / other` when `other` divides `self`.
    #[inline]
    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0 - other.0))
        } else {
            None
        }
    }

    /// The monomial with the exponent of `var` lowered by one.
    pub fn lower(self, var: usize) -> Option<Monomial> {
        if self.exponent(var) == 0 {
            None
        } else {
            Some(Monomial(self.0 - Monomial::var(var).0))
        }
    }

    /// Drops variable `var` entirely (sets its exponent to zero).
    pub fn without(self, var: usize) -> Monomial {
        let e = self.exponent(var);
        Monomial(self.0 - Monomial::var_pow(var, e).0)
    }

    pub fn pow(self, e: u32) -> Monomial {
        let deg = self.degree() as u64 * e as u64;
        assert!(deg <= LANE_MASK as u64, "monomial degree overflow");
        Monomial(self.0 * e as u128)
    }

    /// Renders with variables named `{prefix}1`, `{prefix}2`, …; `None` for 1.
    pub fn render(self, prefix: &str) -> Option<String> {
        if self.is_one() {
            return None;
        }
        let mut parts = Vec::new();
        for i in 0..MAX_VARS {
            match self.exponent(i) {
                0 => {}
                1 => parts.push(format!("{prefix}{}", i + 1)),
                e => parts.push(format!("{prefix}{}^{e}", i + 1)),
            }
        }
        Some(parts.join("*"))
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    #[inline]
    fn mul(self, rhs: Monomial) -> Monomial {
        assert!(
            self.degree() + rhs.degree() <= LANE_MASK as u32,
            "monomial degree overflow"
        );
        Monomial(self.0 + rhs.0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render("X") {
            Some(s) => f.write_str(&s),
            None => f.write_str("1"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order_is_integer_order() {
        let x = Monomial::var(0);
        let y = Monomial::var(1);
        let z = Monomial::var(2);
        // degree first
        assert!(z * z > x);
        // then lex with X1 > X2 > X3
        assert!(x * x > x * y);
        assert!(x * y > y * y);
        assert!(x * z > y * y);
        assert!(x > y && y > z && z > Monomial::ONE);
    }

    #[test]
    fn division_and_exponents() {
        let m = Monomial::from_exponents(&[3, 0, 2]);
        let d = Monomial::from_exponents(&[1, 0, 2]);
        assert_eq!(m.degree(), 5);
        assert_eq!(m.checked_div(d), Some(Monomial::var_pow(0, 2)));
        assert_eq!(d.checked_div(m), None);
        assert!(!Monomial::var(1).divides(m));
        assert_eq!(m.exponents(3), vec![3, 0, 2]);
        assert_eq!(m.without(0), Monomial::var_pow(2, 2));
        assert_eq!(m.lower(2), Some(Monomial::from_exponents(&[3, 0, 1])));
        assert_eq!(m.render("X").unwrap(), "X1^3*X3^2");
    }
}
