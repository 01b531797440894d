//! Exact scalars: elements of ℚ or of a real quadratic field ℚ(√d).
//!
//! A value with zero irrational part is always stored as `Rat`, so the
//! representation is canonical. Mixing two different radicands in one
//! operation is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::rational::{square_free_split, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    /// `a + b·√d`, `b ≠ 0`, `d > 1` square-free.
    Quad(Box<Quadratic>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quadratic {
    pub a: Rational,
    pub b: Rational,
    pub d: u32,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(Rational::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::Rat(Rational::new(n, d))
    }

    /// `a + b·√d`. `d` must be positive; square factors are pulled out.
    pub fn quadratic(a: Rational, b: Rational, d: u32) -> Self {
        assert!(d > 0, "radicand must be positive");
        let (k, d) = square_free_split(d as u64);
        let b = &b * &Rational::from_int(k as i64);
        if d == 1 {
            return Scalar::Rat(&a + &b);
        }
        Self::from_parts(a, b, d as u32)
    }

    /// `√n` for a positive integer `n`.
    pub fn sqrt(n: u32) -> Self {
        Self::quadratic(Rational::zero(), Rational::one(), n)
    }

    fn from_parts(a: Rational, b: Rational, d: u32) -> Self {
        if b.is_zero() {
            Scalar::Rat(a)
        } else {
            Scalar::Quad(Box::new(Quadratic { a, b, d }))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    /// Radicand of the field this value lives in (1 for ℚ).
    pub fn radicand(&self) -> u32 {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Quad(q) => q.d,
        }
    }

    /// Rational and irrational parts `(a, b)`.
    pub fn parts(&self) -> (Rational, Rational) {
        match self {
            Scalar::Rat(r) => (r.clone(), Rational::zero()),
            Scalar::Quad(q) => (q.a.clone(), q.b.clone()),
        }
    }

    fn common_d(x: &Scalar, y: &Scalar) -> u32 {
        match (x, y) {
            (Scalar::Quad(p), Scalar::Quad(q)) => {
                assert_eq!(p.d, q.d, "scalars from different quadratic fields");
                p.d
            }
            (Scalar::Quad(p), _) | (_, Scalar::Quad(p)) => p.d,
            _ => 1,
        }
    }

    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Quad(q) => Self::from_parts(q.a.clone(), -&q.b, q.d),
        }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        match self {
            Scalar::Rat(r) => r * r,
            Scalar::Quad(q) => &(&q.a * &q.a) - &(&(&q.b * &q.b) * &Rational::from_int(q.d as i64)),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => r.inv().map(Scalar::Rat),
            Scalar::Quad(_) => {
                let n = self.norm().inv()?;
                Some(&self.conjugate() * &Scalar::Rat(n))
            }
        }
    }

    /// Sign of the real number this scalar denotes (√d taken positive).
    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Rat(r) => r.signum(),
            Scalar::Quad(q) => {
                let (sa, sb) = (q.a.signum(), q.b.signum());
                if sa == 0 || sa == sb {
                    return sb;
                }
                // opposite signs: compare a² with d·b²
                let a2 = &q.a * &q.a;
                let db2 = &(&q.b * &q.b) * &Rational::from_int(q.d as i64);
                match a2.cmp(&db2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => {
                let d = Scalar::common_d(self, rhs);
                let (a, b) = self.parts();
                let (c, e) = rhs.parts();
                Scalar::from_parts(&a + &c, &b + &e, d)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => self + &(-rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Rat(x), Scalar::Quad(q)) | (Scalar::Quad(q), Scalar::Rat(x)) => {
                Scalar::from_parts(x * &q.a, x * &q.b, q.d)
            }
            (Scalar::Quad(p), Scalar::Quad(q)) => {
                let d = Scalar::common_d(self, rhs);
                let dr = Rational::from_int(d as i64);
                let a = &(&p.a * &q.a) + &(&(&p.b * &q.b) * &dr);
                let b = &(&p.a * &q.b) + &(&p.b * &q.a);
                Scalar::from_parts(a, b, d)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x / y),
            _ => self * &rhs.inv().expect("scalar division by zero"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::from_parts(-&q.a, -&q.b, q.d),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => *x += y,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => *x -= y,
            _ => *self = &*self - rhs,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rat(x), Scalar::Rat(y)) => *x *= y,
            _ => *self = &*self * rhs,
        }
    }
}

fn fmt_sqrt(b: &Rational, d: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if b.is_one() {
        write!(f, "sqrt({d})")
    } else if (-b).is_one() {
        write!(f, "-sqrt({d})")
    } else {
        write!(f, "{b}*sqrt({d})")
    }
}

/// Canonical text: `p/q`, `p/q+r/s*sqrt(d)` or `r/s*sqrt(d)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Quad(q) => {
                if q.a.is_zero() {
                    return fmt_sqrt(&q.b, q.d, f);
                }
                write!(f, "{}", q.a)?;
                if q.b.signum() > 0 {
                    write!(f, "+")?;
                }
                fmt_sqrt(&q.b, q.d, f)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
