use coxfilt_algebra::{parse_poly, parse_ratfunc, render_poly, MultiPoly, PolyMatrix, RatFunc, Scalar};
use proptest::prelude::*;

fn p(s: &str) -> MultiPoly {
    parse_poly(s, 3).unwrap()
}

/// Permutation expansion, independent of the elimination used by `det`.
fn leibniz(m: &[Vec<MultiPoly>]) -> MultiPoly {
    fn perms(n: usize) -> Vec<(Vec<usize>, i64)> {
        if n == 0 {
            return vec![(vec![], 1)];
        }
        let mut out = Vec::new();
        for (perm, sign) in perms(n - 1) {
            for pos in 0..n {
                let mut q = perm.clone();
                q.insert(pos, n - 1);
                let s = if (n - 1 - pos).is_multiple_of(2) { sign } else { -sign };
                out.push((q, s));
            }
        }
        out
    }
    let n = m.len();
    let nv = m[0][0].nvars();
    perms(n).into_iter().fold(MultiPoly::zero(nv), |acc, (perm, s)| {
        let prod = (0..n).fold(MultiPoly::one(nv), |a, i| &a * &m[i][perm[i]]);
        &acc + &prod.scale(&Scalar::int(s))
    })
}

fn small_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..=4), 0..4).prop_map(|terms| {
        terms.into_iter().fold(MultiPoly::zero(3), |acc, ((a, b, c), k)| {
            &acc + &parse_poly(&format!("{k}*X1^{a}*X2^{b}*X3^{c}"), 3).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn det_matches_permutation_expansion(entries in prop::collection::vec(small_poly(), 9)) {
        let rows: Vec<Vec<MultiPoly>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let m = PolyMatrix::from_poly_rows(3, rows.clone()).unwrap();
        prop_assert_eq!(m.det().unwrap(), RatFunc::from_poly(leibniz(&rows)));
    }

    #[test]
    fn render_parse_round_trip(f in small_poly()) {
        prop_assert_eq!(parse_poly(&render_poly(&f, "X"), 3).unwrap(), f);
    }

    #[test]
    fn euler_identity(f in small_poly(), d in 0u32..4) {
        let h = MultiPoly::from_terms(3, f.terms().iter().filter(|t| t.0.degree() == d).cloned().collect::<Vec<_>>());
        let e = (0..3).fold(MultiPoly::zero(3), |acc, i| &acc + &(&MultiPoly::var(3, i) * &h.partial(i)));
        prop_assert_eq!(e, h.scale(&Scalar::int(d as i64)));
    }
}

#[test]
fn golden_ratio_field() {
    let s5 = Scalar::sqrt(5);
    let phi = &(&Scalar::one() + &s5) * &Scalar::frac(1, 2);
    assert_eq!(&phi * &phi, &phi + &Scalar::one());
    assert_eq!(phi.inv().unwrap(), &phi - &Scalar::one());
    assert_eq!(phi.norm(), (-1).into());
    let f = MultiPoly::linear(&[phi.clone(), Scalar::one(), Scalar::zero()]);
    let g = MultiPoly::linear(&[phi.conjugate(), Scalar::one(), Scalar::zero()]);
    assert_eq!(&f * &g, p("-X1^2+X1*X2+X2^2"));
}

#[test]
fn rational_function_normalization() {
    let r = parse_ratfunc("(X1^2-X2^2)/(X1-X2)", 3).unwrap();
    assert!(r.is_polynomial());
    assert_eq!(r, parse_ratfunc("X1+X2", 3).unwrap());
    let q = parse_ratfunc("(2*X1+2*X2)/(2*X1*X2-2*X2^2)", 3).unwrap();
    assert_eq!(q.denom().leading_coeff(), Some(&Scalar::one()));
    assert_eq!(q.partial(2), RatFunc::zero(3));
}

#[test]
fn exact_division() {
    assert_eq!(p("-2*X1^2*X2+2*X1*X2^2").divide_exact(&p("X1-X2")).unwrap(), Some(p("-2*X1*X2")));
    assert_eq!(p("X1^2+X2^2").divide_exact(&p("X1-X2")).unwrap(), None);
    assert_eq!(MultiPoly::zero(3).divide_exact(&p("X3+1")).unwrap(), Some(MultiPoly::zero(3)));
}
