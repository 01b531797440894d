//! Elements of the fraction field K = Frac(S).
//!
//! A `RatFunc` is always reduced: the numerator is coprime to the
//! denominator, and the denominator is monic. The denominator is stored as a
//! product of monic factors `f^e`. Sums only need to match equal factors,
//! and cancellation is a loop of exact divisions. Factors of total degree one
//! are irreducible, so they never need a gcd; any other factor falls back to
//! [`crate::gcd::gcd`]. Callers that know a factorization of a polynomial
//! they divide by (e.g. a product of linear forms) can pass it as hints, and
//! then no gcd is ever computed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::AlgebraError;
use crate::gcd::gcd;
use crate::poly::MultiPoly;
use crate::scalar::Scalar;

pub type Factor = (MultiPoly, u32);

#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: Vec<Factor>,
}

fn is_linear(f: &MultiPoly) -> bool {
    f.total_degree() == Some(1)
}

fn expand(factors: &[Factor], nvars: usize) -> MultiPoly {
    factors
        .iter()
        .fold(MultiPoly::one(nvars), |acc, (b, e)| &acc * &b.pow(*e))
}

fn normalize_factors(mut v: Vec<Factor>) -> Vec<Factor> {
    v.retain(|(_, e)| *e > 0);
    v.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    let mut out: Vec<Factor> = Vec::with_capacity(v.len());
    for (b, e) in v {
        match out.last_mut() {
            Some((lb, le)) if *lb == b => *le += e,
            _ => out.push((b, e)),
        }
    }
    out
}

/// Cancels common factors of `num` against `factors`.
///
/// Factors for which `skip` returns true are assumed coprime to `num`.
/// Factors split off a non-linear factor are always checked.
fn cancel<F>(mut num: MultiPoly, factors: Vec<Factor>, skip: F) -> (MultiPoly, Vec<Factor>)
where
    F: Fn(&MultiPoly) -> bool,
{
    if num.is_zero() {
        return (num, Vec::new());
    }
    let mut work: Vec<(MultiPoly, u32, bool)> =
        factors.into_iter().map(|(b, e)| (b, e, false)).collect();
    let mut out = Vec::new();
    while let Some((f, mut e, forced)) = work.pop() {
        if !forced && skip(&f) {
            out.push((f, e));
            continue;
        }
        while e > 0 {
            match num.divide_exact(&f).expect("factor is nonzero") {
                Some(q) => {
                    num = q;
                    e -= 1;
                }
                None => break,
            }
        }
        if e == 0 {
            continue;
        }
        if !is_linear(&f) {
            let g = gcd(&num, &f);
            if !g.is_constant() {
                num = num.divide_exact(&g).unwrap().expect("gcd divides");
                let cof = f.divide_exact(&g).unwrap().expect("gcd divides");
                if e > 1 {
                    work.push((f, e - 1, true));
                }
                if !cof.is_constant() {
                    work.push((cof, 1, true));
                }
                continue;
            }
        }
        out.push((f, e));
    }
    (num, normalize_factors(out))
}

/// Splits `p` into `unit · Π hint^e · rest` by exact division.
///
/// Returns the unit and the monic factors (with `rest` last when it is not
/// constant).
pub fn split_with_hints(p: &MultiPoly, hints: &[MultiPoly]) -> (Scalar, Vec<Factor>) {
    let (unit, mut rest) = p.monic();
    let mut out = Vec::new();
    for h in hints {
        if rest.is_constant() {
            break;
        }
        let h = h.monic().1;
        if h.is_constant() {
            continue;
        }
        let mut e = 0;
        while let Some(q) = rest.divide_exact(&h).expect("hint is nonzero") {
            rest = q;
            e += 1;
            if rest.is_constant() {
                break;
            }
        }
        if e > 0 {
            out.push((h, e));
        }
    }
    if !rest.is_constant() {
        out.push((rest, 1));
    }
    (unit, normalize_factors(out))
}

/// Least common multiple of the denominators, as a factor list.
pub fn lcm_of_denominators<'a, I>(items: I) -> Vec<Factor>
where
    I: IntoIterator<Item = &'a RatFunc>,
{
    let mut lcm: Vec<Factor> = Vec::new();
    for f in items {
        for (b, e) in &f.den {
            match lcm.iter_mut().find(|(x, _)| x == b) {
                Some(x) => x.1 = x.1.max(*e),
                None => lcm.push((b.clone(), *e)),
            }
        }
    }
    normalize_factors(lcm)
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc { num: p, den: Vec::new() }
    }

    /// `num / den`, reduced.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        Self::with_factors(num, vec![(den, 1)])
    }

    /// `num / Π base^e`, reduced. The bases need not be irreducible or
    /// coprime; a finer factorization only makes reduction cheaper.
    pub fn with_factors(num: MultiPoly, factors: Vec<Factor>) -> Result<Self, AlgebraError> {
        let mut num = num;
        let mut pieces = Vec::with_capacity(factors.len());
        for (b, e) in factors {
            assert_eq!(b.nvars(), num.nvars(), "variable count mismatch");
            if b.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            if e == 0 {
                continue;
            }
            let (lc, m) = b.monic();
            num = num.scale(&lc.pow(e).inv().expect("nonzero"));
            if !m.is_constant() {
                pieces.push((m, e));
            }
        }
        let (num, den) = cancel(num, normalize_factors(pieces), |_| false);
        Ok(RatFunc { num, den })
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    /// Expanded (monic) denominator.
    pub fn denom(&self) -> MultiPoly {
        expand(&self.den, self.nvars())
    }

    pub fn den_factors(&self) -> &[Factor] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn into_poly(self) -> Result<MultiPoly, RatFunc> {
        if self.den.is_empty() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// `self · Π b^e` as a polynomial; `multiple` must be a multiple of the
    /// denominator (see [`lcm_of_denominators`]).
    pub fn clear_with(&self, multiple: &[Factor]) -> MultiPoly {
        let n = self.nvars();
        let cof = multiple.iter().fold(MultiPoly::one(n), |acc, (b, e)| {
            let have = self.den.iter().find(|(x, _)| x == b).map_or(0, |x| x.1);
            assert!(have <= *e, "not a multiple of the denominator");
            &acc * &b.pow(e - have)
        });
        assert!(
            self.den.iter().all(|(b, _)| multiple.iter().any(|(x, _)| x == b)),
            "not a multiple of the denominator"
        );
        &self.num * &cof
    }

    /// Multiplication by a polynomial.
    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        let (n, d) = cancel(p.clone(), self.den.clone(), |_| false);
        RatFunc { num: &self.num * &n, den: d }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.nvars());
        }
        RatFunc {
            num: self.num.pow(e),
            den: self.den.iter().map(|(b, k)| (b.clone(), k * e)).collect(),
        }
    }

    /// Multiplicative inverse; division by zero is an error.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        self.inv_with_hints(&[])
    }

    /// Multiplicative inverse, splitting the old numerator by the given
    /// candidate factors first.
    pub fn inv_with_hints(&self, hints: &[MultiPoly]) -> Result<Self, AlgebraError> {
        if self.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (unit, pieces) = split_with_hints(&self.num, hints);
        let num = self.denom().scale(&unit.inv().expect("nonzero"));
        Ok(RatFunc { num, den: pieces })
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self, AlgebraError> {
        Ok(self * &other.inv()?)
    }

    /// Formal partial derivative (quotient rule on the factored denominator).
    pub fn partial(&self, var: usize) -> Self {
        if self.den.is_empty() {
            return Self::from_poly(self.num.partial(var));
        }
        let n = self.nvars();
        let dep: Vec<usize> = (0..self.den.len())
            .filter(|&j| self.den[j].0.degree_in(var) > 0)
            .collect();
        if dep.is_empty() {
            let (num, den) = cancel(self.num.partial(var), self.den.clone(), |_| false);
            return RatFunc { num, den };
        }
        // d(n / Π f^e) = (n'·R − n·Σ e·f'·R/f) / (Π f^e · R),  R = Π_{dep} f
        let radical = dep
            .iter()
            .fold(MultiPoly::one(n), |acc, &j| &acc * &self.den[j].0);
        let mut s = MultiPoly::zero(n);
        for &j in &dep {
            let (f, e) = &self.den[j];
            let mut t = f.partial(var).scale(&Scalar::int(*e as i64));
            for &k in &dep {
                if k != j {
                    t = &t * &self.den[k].0;
                }
            }
            s = &s + &t;
        }
        let num = &(&self.num.partial(var) * &radical) - &(&self.num * &s);
        let mut den = self.den.clone();
        for &j in &dep {
            den[j].1 += 1;
        }
        // a linear factor that depends on `var` cannot cancel, unless a
        // non-linear factor is present that it might divide
        let all_linear = self.den.iter().all(|(b, _)| is_linear(b));
        let (num, den) = cancel(num, den, |b| all_linear && b.degree_in(var) > 0);
        RatFunc { num, den }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.num != other.num {
            return false;
        }
        if self.den == other.den {
            return true;
        }
        let linear = |d: &[Factor]| d.iter().all(|(b, _)| is_linear(b));
        if linear(&self.den) && linear(&other.den) {
            // unique factorization into monic linear forms
            return false;
        }
        self.denom() == other.denom()
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: &RatFunc) -> RatFunc {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_empty() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            let (num, den) = cancel(&self.num + &rhs.num, self.den.clone(), |_| false);
            return RatFunc { num, den };
        }
        let mut lcm: Vec<Factor> = self.den.clone();
        for (b, e) in &rhs.den {
            match lcm.iter_mut().find(|(x, _)| x == b) {
                Some(x) => x.1 = x.1.max(*e),
                None => lcm.push((b.clone(), *e)),
            }
        }
        let n = self.nvars();
        let cofactor = |own: &[Factor]| {
            lcm.iter().fold(MultiPoly::one(n), |acc, (b, e)| {
                let have = own.iter().find(|(x, _)| x == b).map_or(0, |x| x.1);
                if *e > have {
                    &acc * &b.pow(e - have)
                } else {
                    acc
                }
            })
        };
        let num = &(&self.num * &cofactor(&self.den)) + &(&rhs.num * &cofactor(&rhs.den));
        let (num, den) = cancel(num, normalize_factors(lcm.clone()), |_| false);
        RatFunc { num, den }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: &RatFunc) -> RatFunc {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        if self.den.is_empty() && rhs.den.is_empty() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel; each side is already reduced
        let (n1, d2) = cancel(self.num.clone(), rhs.den.clone(), |_| false);
        let (n2, d1) = cancel(rhs.num.clone(), self.den.clone(), |_| false);
        let mut den = d1;
        den.extend(d2);
        RatFunc { num: &n1 * &n2, den: normalize_factors(den) }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    /// Panics on division by zero; see [`RatFunc::checked_div`].
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render_ratfunc(self, "X"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::arb_poly;
    use crate::text::{parse_poly, parse_ratfunc};
    use proptest::prelude::*;

    fn r(s: &str) -> RatFunc {
        parse_ratfunc(s, 2).unwrap()
    }

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn common_factor_cancels() {
        let f = RatFunc::new(p("X1^2-X2^2"), p("X1-X2")).unwrap();
        assert_eq!(f.as_poly(), Some(&p("X1+X2")));
    }

    #[test]
    fn denominator_is_monic_and_reduced() {
        let f = RatFunc::new(p("6*X1*X2"), p("4*X1^2*X2-4*X2^3")).unwrap();
        assert_eq!(f.numer(), &p("3/2*X1"));
        assert_eq!(f.denom(), p("X1^2-X2^2"));
        assert!(matches!(
            RatFunc::new(p("X1"), MultiPoly::zero(2)),
            Err(AlgebraError::DivisionByZero)
        ));
    }

    #[test]
    fn field_operations() {
        let a = r("1/(X1-X2)");
        let b = r("1/(X1+X2)");
        assert_eq!(&a + &b, r("2*X1/(X1^2-X2^2)"));
        assert_eq!(&a - &b, r("2*X2/(X1^2-X2^2)"));
        assert_eq!(&(&a * &b) * &r("X1^2-X2^2"), RatFunc::one(2));
        assert_eq!(&a / &a, RatFunc::one(2));
        assert!(r("X1").checked_div(&RatFunc::zero(2)).is_err());
    }

    #[test]
    fn hinted_inverse_splits_into_linear_factors() {
        let q = r("X1*X2*(X1-X2)*(X1+X2)");
        let hints = [p("X1"), p("X2"), p("X1-X2"), p("X1+X2")];
        let inv = q.inv_with_hints(&hints).unwrap();
        assert_eq!(inv.den_factors().len(), 4);
        assert!(inv.den_factors().iter().all(|(b, e)| b.total_degree() == Some(1) && *e == 1));
        assert_eq!(inv, q.inv().unwrap());
    }

    #[test]
    fn quotient_rule() {
        // d/dX1 of X2/(X1 (X1 - X2)) = −X2 (2 X1 − X2) / (X1² (X1 − X2)²)
        let f = r("X2/(X1*(X1-X2))");
        assert_eq!(f.partial(0), r("-X2*(2*X1-X2)/(X1^2*(X1-X2)^2)"));
        // a non-linear denominator factor goes through the gcd path
        let g = r("X1/(X1^2+X2^2)");
        assert_eq!(g.partial(0), r("(X2^2-X1^2)/(X1^2+X2^2)^2"));
        assert_eq!(g.partial(1), r("-2*X1*X2/(X1^2+X2^2)^2"));
    }

    #[test]
    fn non_linear_factor_partial_cancellation() {
        // (X1^2 - X2^2)/((X1^2 + X2^2)(X1^2 - X2^2)(X1-X2)) with the middle factor unsplit
        let f = RatFunc::with_factors(
            p("X1^2-X2^2"),
            vec![(p("X1^2+X2^2"), 1), (p("X1^3-X1^2*X2-X1*X2^2+X2^3"), 1)],
        )
        .unwrap();
        assert_eq!(f, r("1/((X1^2+X2^2)*(X1-X2))"));
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
        (arb_poly(2, 3, 2), prop::collection::vec((0i64..3, -2i64..3), 1..3)).prop_map(|(n, lin)| {
            let factors = lin
                .into_iter()
                .map(|(a, b)| (p(&format!("X1+{a}*X2+{b}")), 1))
                .collect();
            RatFunc::with_factors(n, factors).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
            // Leibniz rule
            prop_assert_eq!((&a * &b).partial(0), &(&a.partial(0) * &b) + &(&a * &b.partial(0)));
        }

        #[test]
        fn reduced_form_is_canonical(a in arb_poly(2, 3, 2), b in arb_poly(2, 3, 2), c in arb_poly(2, 2, 2)) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let x = RatFunc::new(&a * &c, &b * &c).unwrap();
            let y = RatFunc::new(a.clone(), b.clone()).unwrap();
            prop_assert_eq!(x.numer(), y.numer());
            prop_assert_eq!(x.denom(), y.denom());
        }
    }
}
