//! Canonical text format for polynomials and rational functions.
//!
//! Terms are written in descending graded-lex order, monomials as
//! `X1^a*X2^b`, scalars as `p/q` or `p/q+r/s*sqrt(d)`, e.g.
//! `4*X1^3*X2-4*X1*X2^3`. The parser is whitespace-insensitive and accepts
//! general expressions built from `+ - * / ^`, parentheses, integers,
//! `sqrt(n)` and variables `X1 … Xn` (any alphabetic prefix is accepted).

use num_bigint::BigInt;

use crate::error::AlgebraError;
use crate::poly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::rational::Rational;
use crate::scalar::Scalar;

fn render_term(c: &Scalar, mono: Option<String>) -> String {
    match mono {
        None => c.to_string(),
        Some(m) => {
            if c.is_one() {
                m
            } else if (-c).is_one() {
                format!("-{m}")
            } else {
                match c {
                    Scalar::Quad(q) if !q.a.is_zero() => format!("({c})*{m}"),
                    _ => format!("{c}*{m}"),
                }
            }
        }
    }
}

/// Renders `p` with variables named `{prefix}1 … {prefix}n`.
pub fn render_poly(p: &MultiPoly, prefix: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let t = render_term(c, m.render(prefix));
        if i > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    out
}

/// Renders a rational function as `num` or `(num)/(den)`.
pub fn render_ratfunc(f: &RatFunc, prefix: &str) -> String {
    if f.is_polynomial() {
        render_poly(f.numer(), prefix)
    } else {
        format!(
            "({})/({})",
            render_poly(f.numer(), prefix),
            render_poly(&f.denom(), prefix)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Sqrt,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            let word = &s[start..i];
            if word == "sqrt" {
                out.push((start, Tok::Sqrt));
                continue;
            }
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = s[ds..i].parse().map_err(|_| AlgebraError::Parse {
                pos: start,
                msg: format!("expected variable index after `{word}`"),
            })?;
            if idx == 0 {
                return Err(AlgebraError::Parse { pos: start, msg: "variables are numbered from 1".into() });
            }
            out.push((start, Tok::Var(idx - 1)));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err(&self, msg: impl Into<String>) -> AlgebraError {
        AlgebraError::Parse { pos: self.here(), msg: msg.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, AlgebraError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let at = self.here();
                let d = self.factor()?;
                acc = acc.checked_div(&d).map_err(|_| AlgebraError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, AlgebraError> {
        // unary minus inside products, e.g. `2*-X1`
        if self.eat('-') {
            return Ok(-&self.factor()?);
        }
        let base = self.primary()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some((_, Tok::Num(n))) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<RatFunc, AlgebraError> {
        let n = self.nvars;
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(v))) => {
                self.pos += 1;
                Ok(RatFunc::constant(n, Scalar::Rat(Rational::from(v))))
            }
            Some((p, Tok::Var(i))) => {
                self.pos += 1;
                if i >= n {
                    return Err(AlgebraError::Parse {
                        pos: p,
                        msg: format!("variable index {} exceeds ring with {n} variables", i + 1),
                    });
                }
                Ok(RatFunc::from_poly(MultiPoly::var(n, i)))
            }
            Some((_, Tok::Sqrt)) => {
                self.pos += 1;
                if !self.eat('(') {
                    return Err(self.err("expected `(` after sqrt"));
                }
                let v = match self.toks.get(self.pos).cloned() {
                    Some((_, Tok::Num(v))) => v,
                    _ => return Err(self.err("sqrt takes a positive integer")),
                };
                self.pos += 1;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                let d: u32 = v
                    .try_into()
                    .ok()
                    .filter(|&d: &u32| d > 0)
                    .ok_or_else(|| self.err("sqrt takes a positive integer"))?;
                Ok(RatFunc::constant(n, Scalar::sqrt(d)))
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable, sqrt or `(`")),
        }
    }
}

/// Parses a rational function in `nvars` variables.
pub fn parse_ratfunc(s: &str, nvars: usize) -> Result<RatFunc, AlgebraError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, nvars, end: s.len() };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_poly(s: &str, nvars: usize) -> Result<MultiPoly, AlgebraError> {
    let r = parse_ratfunc(s, nvars)?;
    r.into_poly().map_err(|r| AlgebraError::NotPolynomial(render_ratfunc(&r, "X")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::arb_poly;
    use proptest::prelude::*;

    #[test]
    fn canonical_rendering() {
        let p = parse_poly("4*X1^3*X2 - 4*X1*X2^3", 2).unwrap();
        assert_eq!(p.to_string(), "4*X1^3*X2-4*X1*X2^3");
        let q = parse_poly("(1/2 + 1/2*sqrt(5))*X1^2 - sqrt(5)*X2 + 3/4", 2).unwrap();
        assert_eq!(q.to_string(), "(1/2+1/2*sqrt(5))*X1^2-sqrt(5)*X2+3/4");
        assert_eq!(parse_poly("-X1 + X1", 1).unwrap().to_string(), "0");
        assert_eq!(render_poly(&parse_poly("P1^2*P2", 2).unwrap(), "P"), "P1^2*P2");
    }

    #[test]
    fn whitespace_and_errors() {
        let a = parse_poly(" X1 ^ 2 *X2+ 2 * X2", 2).unwrap();
        let b = parse_poly("X1^2*X2+2*X2", 2).unwrap();
        assert_eq!(a, b);
        assert!(parse_poly("X3", 2).is_err());
        assert!(parse_poly("X1 +", 2).is_err());
        assert!(parse_poly("1/X1", 2).is_err());
        assert!(parse_poly("X1/0", 2).is_err());
        assert!(parse_ratfunc("1/X1", 2).is_ok());
    }

    #[test]
    fn rational_function_text() {
        let f = parse_ratfunc("(X1^2-X2^2)/(X1-X2)", 2).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(render_ratfunc(&f, "X"), "X1+X2");
        let g = parse_ratfunc("(2*X1)/(4*X1*X2+4*X2^2)", 2).unwrap();
        assert_eq!(render_ratfunc(&g, "X"), "(1/2*X1)/(X1*X2+X2^2)");
        assert_eq!(parse_ratfunc(&render_ratfunc(&g, "X"), 2).unwrap(), g);
    }

    proptest! {
        #[test]
        fn round_trip(p in arb_poly(3, 6, 4)) {
            prop_assert_eq!(parse_poly(&p.to_string(), 3).unwrap(), p);
        }
    }
}
