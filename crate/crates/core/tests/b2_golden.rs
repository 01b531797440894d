use coxfilt_algebra::{parse_ratfunc, PolyMatrix, RatFunc};
use coxfilt_core::coxeter::{basic_invariants, realize, CoxeterType};
use coxfilt_core::derivations::Derivation;
use coxfilt_core::filtration::FiltrationContext;

fn b2() -> FiltrationContext {
    let d = realize(CoxeterType::B2).unwrap();
    let inv = basic_invariants(&d).unwrap();
    FiltrationContext::new(d, inv, false).unwrap()
}

fn mat(rows: &[&[&str]]) -> PolyMatrix {
    PolyMatrix::from_rows(2, rows.iter().map(|r| r.iter().map(|s| parse_ratfunc(s, 2).unwrap()).collect()).collect())
        .unwrap()
}

/// Rewrites a matrix whose entries are polynomials in `P1 = X1^2 + X2^2`,
/// `P2 = X1^2 X2^2` from the X-coordinates.
fn in_p(ctx: &FiltrationContext, m: &PolyMatrix) -> PolyMatrix {
    m.map(|f| {
        let p = coxfilt_core::filtration::express_in_invariants(f.as_poly().unwrap(), &ctx.inv).unwrap().unwrap();
        RatFunc::from_poly(p)
    })
}

#[test]
fn gram_of_invariants() {
    let ctx = b2();
    assert_eq!(in_p(&ctx, &ctx.g), mat(&[&["4*X1", "8*X2"], &["8*X2", "4*X1*X2"]]));
    assert_eq!(in_p(&ctx, ctx.dg()), mat(&[&["0", "8"], &["8", "4*X1"]]));
}

#[test]
fn b_matrices() {
    let ctx = b2();
    let b1 = ctx.b_matrix(1).unwrap();
    let b2m = ctx.b_matrix(2).unwrap();
    assert_eq!(in_p(&ctx, &b1), mat(&[&["0", "6"], &["2", "2*X1"]]));
    assert_eq!(in_p(&ctx, &b2m), mat(&[&["0", "14"], &["10", "6*X1"]]));
    assert_eq!(b1.det().unwrap(), RatFunc::constant(2, (-12).into()));
    assert_eq!(b2m.det().unwrap(), RatFunc::constant(2, (-140).into()));
}

#[test]
fn bracket_in_invariant_frame() {
    let ctx = b2();
    let xi = ctx.xi_basis(1).unwrap();
    let br = ctx.d.bracket(&xi[1]);
    let p = ctx.frame.to_p(&br);
    let p = Derivation::new(
        p
            .iter()
            .map(|f| {
                RatFunc::from_poly(
                    coxfilt_core::filtration::express_in_invariants(f.as_poly().unwrap(), &ctx.inv).unwrap().unwrap(),
                )
            })
            .collect(),
    );
    assert_eq!(p, Derivation::new(vec![parse_ratfunc("8", 2).unwrap(), parse_ratfunc("4*X1", 2).unwrap()]));
}

#[test]
fn every_check_passes() {
    let ctx = b2();
    let reports = ctx.run_all(3, 7);
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(reports.len() > 40);
}

#[test]
fn perturbed_basis_is_caught_downstream() {
    let d = realize(CoxeterType::B2).unwrap();
    let inv = basic_invariants(&d).unwrap();
    let ctx = FiltrationContext::new(d, inv, true).unwrap();
    let reports = ctx.run_all(1, 3);
    for id in ["basis_membership", "odd_basis_equality", "bracket_frame"] {
        assert!(reports.iter().any(|r| r.identity == id && !r.passed()), "{id} did not fail");
    }
}
