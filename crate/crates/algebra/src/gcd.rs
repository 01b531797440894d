//! Multivariate gcd over the scalar field by recursive primitive
//! pseudo-remainder sequences.
//!
//! This is the general fallback. Rational functions avoid calling it for
//! denominator factors that are known to be irreducible (linear forms), so in
//! practice it only runs on small inputs.

use crate::poly::MultiPoly;

/// Monic greatest common divisor; zero iff both inputs are zero.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    gcd_rec(a, b).monic().1
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let n = a.nvars();
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(n);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if let Ok(Some(_)) = large.divide_exact(small) {
        return small.clone();
    }

    let va = a.variables();
    let vb = b.variables();
    // a variable present in only one argument can only occur in that
    // argument's content with respect to it
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_rec(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_rec(a, &content_in(b, v));
    }
    let v = *va
        .iter()
        .min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has a variable");

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.divide_exact(&ca).unwrap().expect("content divides");
    let pb = b.divide_exact(&cb).unwrap().expect("content divides");
    let g = primitive_prs(pa, pb, v);
    &c * &g
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.nvars());
    for (_, c) in p.coefficients_in(v) {
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one(p.nvars());
        }
    }
    acc.monic().1
}

fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    let c = content_in(p, v);
    let q = p.divide_exact(&c).unwrap().expect("content divides");
    q.monic().1
}

fn leading_in(p: &MultiPoly, v: usize) -> (u32, MultiPoly) {
    p.coefficients_in(v)
        .into_iter()
        .next()
        .unwrap_or((0, MultiPoly::zero(p.nvars())))
}

/// Sparse pseudo-remainder of `f` by `g` with respect to `v`.
fn prem(f: &MultiPoly, g: &MultiPoly, v: usize) -> MultiPoly {
    let (dg, lg) = leading_in(g, v);
    let mut r = f.clone();
    while !r.is_zero() {
        let (dr, lr) = leading_in(&r, v);
        if dr < dg {
            break;
        }
        let shift = crate::monomial::Monomial::var_pow(v, dr - dg);
        let sub = &(&lr * g).mul_term(shift, &crate::scalar::Scalar::one());
        r = &(&lg * &r) - sub;
    }
    r
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    if g.degree_in(v) == 0 {
        return MultiPoly::one(f.nvars());
    }
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return primitive_part(&g, v);
        }
        if r.degree_in(v) == 0 {
            return MultiPoly::one(f.nvars());
        }
        f = g;
        g = primitive_part(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::tests::arb_poly;
    use crate::text::parse_poly;
    use proptest::prelude::*;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, 3).unwrap()
    }

    #[test]
    fn known_gcds() {
        assert_eq!(gcd(&p("X1^2-X2^2"), &p("X1^2-2*X1*X2+X2^2")), p("X1-X2"));
        assert_eq!(gcd(&p("2*X1*X2"), &p("4*X1*X3")), p("X1"));
        assert_eq!(gcd(&p("X1+1"), &p("X2+1")), p("1"));
        assert_eq!(gcd(&p("X1^2+X2^2"), &p("X1-X2")), p("1"));
        assert_eq!(gcd(&p("0"), &p("3*X2")), p("X2"));
        let f = p("(X1+X2*X3)^2*(X1-X3)*(X2^2+X3+1)");
        let g = p("(X1+X2*X3)*(X2^2+X3+1)^2*(X3-2)");
        assert_eq!(gcd(&f, &g), p("(X1+X2*X3)*(X2^2+X3+1)").monic().1);
    }

    #[test]
    fn quadratic_field_coefficients() {
        let f = parse_poly("(X1 - sqrt(5)*X2)*(X1+X2)", 2).unwrap();
        let g = parse_poly("(X1 - sqrt(5)*X2)*(X1-X2)", 2).unwrap();
        assert_eq!(gcd(&f, &g), parse_poly("X1 - sqrt(5)*X2", 2).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn common_factor_is_found(a in arb_poly(3, 3, 2), b in arb_poly(3, 3, 2), c in arb_poly(3, 3, 2)) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let g = gcd(&(&a * &c), &(&b * &c));
            // c divides the gcd, and the gcd divides both products
            prop_assert!(g.divide_exact(&c).unwrap().is_some());
            prop_assert!((&a * &c).divide_exact(&g).unwrap().is_some());
            prop_assert!((&b * &c).divide_exact(&g).unwrap().is_some());
        }
    }
}
