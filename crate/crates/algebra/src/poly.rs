//! Sparse multivariate polynomials over [`Scalar`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;

use crate::error::AlgebraError;
use crate::monomial::{Monomial, MAX_VARS};
use crate::scalar::Scalar;

/// A polynomial in `nvars` variables.
///
/// Terms are kept sorted by descending graded-lex order with no zero
/// coefficients, so derived equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, Scalar)>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::term(nvars, Monomial::ONE, c)
    }

    pub fn term(nvars: usize, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            debug_assert!((nvars..MAX_VARS).all(|i| m.exponent(i) == 0));
            p.terms.push((m, c));
        }
        p
    }

    /// The coordinate function `X_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::term(nvars, Monomial::var(i), Scalar::one())
    }

    /// Linear form `Σ coeffs[i]·X_{i+1}`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(i), c.clone())),
        )
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut v: Vec<(Monomial, Scalar)> = terms.into_iter().collect();
        v.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        let mut p = Self::zero(nvars);
        p.terms = out;
        p
    }

    fn from_sorted(nvars: usize, terms: Vec<(Monomial, Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn coeff(&self, m: Monomial) -> Scalar {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(var)).max().unwrap_or(0)
    }

    /// Whether every term has total degree `d` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.iter().all(|t| t.0.degree() == d)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.total_degree() {
            None => true,
            Some(d) => self.is_homogeneous_of(d),
        }
    }

    /// Indices of variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.degree_in(i) > 0).collect()
    }

    /// Same polynomial regarded in a ring with more (or equally many) variables.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        MultiPoly { nvars, terms: self.terms.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, a * c)).collect();
        Self::from_sorted(self.nvars, terms)
    }

    /// Multiplication by a single term; order is preserved.
    pub fn mul_term(&self, m: Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(t, a)| (*t * m, a * c)).collect();
        Self::from_sorted(self.nvars, terms)
    }

    /// Divides by the leading coefficient; returns that coefficient too.
    pub fn monic(&self) -> (Scalar, Self) {
        match self.leading_coeff() {
            None => (Scalar::one(), self.clone()),
            Some(c) if c.is_one() => (Scalar::one(), self.clone()),
            Some(c) => {
                let c = c.clone();
                let inv = c.inv().expect("nonzero leading coefficient");
                (c, self.scale(&inv))
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        if e == 0 {
            return acc;
        }
        let mut base = self.clone();
        loop {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e == 0 {
                return acc;
            }
            base = &base * &base;
        }
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable index out of range");
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                let m2 = m.lower(var).expect("positive exponent");
                terms.push((m2, c * &Scalar::int(e as i64)));
            }
        }
        // lowering one exponent can reorder terms of different shapes
        Self::from_terms(self.nvars, terms)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`; the result lives in the ring of
    /// the substitutes.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars, "substitution arity mismatch");
        let target = subs.first().map_or(0, |s| s.nvars);
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| {
                assert_eq!(s.nvars, target, "substitutes must share a ring");
                vec![MultiPoly::one(target), s.clone()]
            })
            .collect();
        let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = &pw[pw.len() - 1] * &subs[i];
                    pw.push(next);
                }
                t = &t * &pw[e];
            }
            for (tm, tc) in t.terms {
                acc.entry(tm)
                    .and_modify(|v| *v += &tc)
                    .or_insert(tc);
            }
        }
        MultiPoly::from_terms(target, acc)
    }

    /// Renames variable `i` to `map[i]` in a ring with `nvars` variables.
    pub fn rename_vars(&self, map: &[usize], nvars: usize) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0u32; nvars];
            for (i, &j) in map.iter().enumerate() {
                e[j] += m.exponent(i);
            }
            (Monomial::from_exponents(&e), c.clone())
        });
        MultiPoly::from_terms(nvars, terms)
    }

    /// Exact division in the polynomial ring.
    ///
    /// `Ok(None)` means `q` does not divide `self`; that is an ordinary
    /// outcome, not an error. Division by the zero polynomial is an error.
    pub fn divide_exact(&self, q: &MultiPoly) -> Result<Option<MultiPoly>, AlgebraError> {
        assert_eq!(self.nvars, q.nvars, "variable count mismatch");
        let Some((lq, lc)) = q.terms.first() else {
            return Err(AlgebraError::DivisionByZero);
        };
        if self.is_zero() {
            return Ok(Some(MultiPoly::zero(self.nvars)));
        }
        if lq.is_one() {
            return Ok(Some(self.scale(&lc.inv().expect("nonzero"))));
        }
        // cheap necessary conditions first
        let (ls, _) = &self.terms[0];
        let (ts, _) = self.terms.last().expect("nonzero");
        let (tq, _) = q.terms.last().expect("nonzero");
        if !lq.divides(*ls) || !tq.divides(*ts) {
            return Ok(None);
        }
        if q.terms.len() == 1 {
            let inv = lc.inv().expect("nonzero");
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                match m.checked_div(*lq) {
                    Some(t) => terms.push((t, c * &inv)),
                    None => return Ok(None),
                }
            }
            return Ok(Some(MultiPoly::from_sorted(self.nvars, terms)));
        }
        for v in 0..self.nvars {
            if q.degree_in(v) > self.degree_in(v) {
                return Ok(None);
            }
        }
        let inv = lc.inv().expect("nonzero");
        let mut rem: BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        let tail = &q.terms[1..];
        while let Some((m, c)) = rem.pop_last() {
            let Some(t) = m.checked_div(*lq) else {
                return Ok(None);
            };
            let k = &c * &inv;
            for (qm, qc) in tail {
                let key = t * *qm;
                let delta = &k * qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= &delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                }
            }
            quot.push((t, k));
            if let Some((rm, _)) = rem.first_key_value() {
                // every term still to be subtracted has degree >= deg(tq)
                if rm.degree() < tq.degree() {
                    return Ok(None);
                }
            }
        }
        Ok(Some(MultiPoly::from_sorted(self.nvars, quot)))
    }

    /// Coefficients with respect to one variable: pairs `(exponent, coeff)`
    /// with `coeff` free of that variable, highest exponent first.
    pub fn coefficients_in(&self, var: usize) -> Vec<(u32, MultiPoly)> {
        let mut groups: BTreeMap<u32, Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.exponent(var))
                .or_default()
                .push((m.without(var), c.clone()));
        }
        groups
            .into_iter()
            .rev()
            .map(|(e, ts)| (e, MultiPoly::from_terms(self.nvars, ts)))
            .collect()
    }

    /// A deterministic total order used to canonicalize collections of
    /// polynomials (not a ring ordering).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then_with(|| {
                for ((m1, _), (m2, _)) in self.terms.iter().zip(&other.terms) {
                    match m2.cmp(m1) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| {
                for ((_, c1), (_, c2)) in self.terms.iter().zip(&other.terms) {
                    if c1 != c2 {
                        return c1.to_string().cmp(&c2.to_string());
                    }
                }
                Ordering::Equal
            })
    }
}

fn merge(a: &MultiPoly, b: &MultiPoly, negate_b: bool) -> MultiPoly {
    assert_eq!(a.nvars, b.nvars, "variable count mismatch");
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let bt = |c: &Scalar| if negate_b { -c } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        match ma.cmp(mb) {
            Ordering::Greater => {
                out.push((*ma, ca.clone()));
                i += 1;
            }
            Ordering::Less => {
                out.push((*mb, bt(cb)));
                j += 1;
            }
            Ordering::Equal => {
                let s = if negate_b { ca - cb } else { ca + cb };
                if !s.is_zero() {
                    out.push((*ma, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(m, c)| (*m, bt(c))));
    MultiPoly::from_sorted(a.nvars, out)
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        merge(self, rhs, true)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            return large.mul_term(*m, c);
        }
        let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
        acc.reserve(large.terms.len() * 2);
        for (ms, cs) in &small.terms {
            for (ml, cl) in &large.terms {
                let p = cs * cl;
                match acc.entry(*ms * *ml) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += &p,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, Scalar)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MultiPoly::from_sorted(self.nvars, terms)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        MultiPoly::from_sorted(self.nvars, terms)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render_poly(self, "X"))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> (MultiPoly, MultiPoly) {
        (MultiPoly::var(2, 0), MultiPoly::var(2, 1))
    }

    #[test]
    fn difference_of_squares() {
        let (x, y) = xy();
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &(&x * &x) - &(&y * &y));
        assert_eq!(p.to_string(), "X1^2-X2^2");
    }

    #[test]
    fn identities() {
        let (x, y) = xy();
        let p = &(&x * &y) + &x;
        assert_eq!(&p + &MultiPoly::zero(2), p);
        assert_eq!(&p * &MultiPoly::one(2), p);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn partial_derivatives() {
        let (x, y) = xy();
        let x2y2 = &(&x * &x) * &(&y * &y);
        assert_eq!(x2y2.partial(0), (&x * &(&y * &y)).scale(&Scalar::int(2)));
        assert_eq!((&(&x * &x) + &(&y * &y)).partial(1), y.scale(&Scalar::int(2)));
        // Euler: X ∂_X p + Y ∂_Y p = 4p for p homogeneous of degree 4
        let euler = &(&x * &x2y2.partial(0)) + &(&y * &x2y2.partial(1));
        assert_eq!(euler, x2y2.scale(&Scalar::int(4)));
    }

    #[test]
    fn exact_division() {
        let (x, y) = xy();
        // −2XY(X−Y) / (X−Y) = −2XY
        let xy = &x * &y;
        let p = &xy.scale(&Scalar::int(-2)) * &(&x - &y);
        assert_eq!(
            p.divide_exact(&(&x - &y)).unwrap(),
            Some(xy.scale(&Scalar::int(-2)))
        );
        // X² + Y² is not divisible by X − Y
        let s = &(&x * &x) + &(&y * &y);
        assert_eq!(s.divide_exact(&(&x - &y)).unwrap(), None);
        assert_eq!(
            MultiPoly::zero(2).divide_exact(&(&x - &y)).unwrap(),
            Some(MultiPoly::zero(2))
        );
        assert!(matches!(
            s.divide_exact(&MultiPoly::zero(2)),
            Err(AlgebraError::DivisionByZero)
        ));
    }

    #[test]
    fn composition() {
        let (x, y) = xy();
        let p = &(&x * &x) * &y;
        // X ↦ X + Y, Y ↦ X − Y
        let q = p.compose(&[&x + &y, &x - &y]);
        assert_eq!(q, &(&(&x + &y) * &(&x + &y)) * &(&x - &y));
        let v = p.eval(&[Scalar::int(3), Scalar::int(-2)]);
        assert_eq!(v, Scalar::int(-18));
    }

    #[test]
    fn coefficient_groups() {
        let (x, y) = xy();
        let p = &(&(&x * &x) * &y) + &(&y + &x);
        let cs = p.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], (2, y.clone()));
        assert_eq!(cs[1], (1, MultiPoly::one(2)));
        assert_eq!(cs[2], (0, y));
    }

    pub(crate) fn arb_poly(nvars: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_exp, nvars), -6i64..=6, 1i64..=3),
            0..=max_terms,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(
                nvars,
                ts.into_iter()
                    .map(|(e, n, d)| (Monomial::from_exponents(&e), Scalar::frac(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(3, 5, 3), q in arb_poly(3, 5, 3), r in arb_poly(3, 4, 2)) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) - &q, p.clone());
            if let (Some(a), Some(b)) = (p.total_degree(), q.total_degree()) {
                prop_assert_eq!((&p * &q).total_degree(), Some(a + b));
            }
        }

        #[test]
        fn mixed_partials_commute(p in arb_poly(3, 6, 4)) {
            prop_assert_eq!(p.partial(0).partial(2), p.partial(2).partial(0));
            prop_assert_eq!(p.partial(1).partial(0), p.partial(0).partial(1));
        }

        #[test]
        fn exact_division_recovers_factor(p in arb_poly(3, 5, 3), q in arb_poly(3, 4, 2)) {
            prop_assume!(!q.is_zero());
            let prod = &p * &q;
            prop_assert_eq!(prod.divide_exact(&q).unwrap(), Some(p));
        }
    }
}
