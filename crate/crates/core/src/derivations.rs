//! Derivations of the fraction field, stored in the coordinate frame
//! `(∂1, …, ∂l)`.
//!
//! Because `I(∂i, ∂j)` is constant in these coordinates, the flat connection
//! is `∇_ξ η = Σ ξ(η(Xi)) ∂i`. The `∂/∂P` frame is a view obtained through the
//! Jacobian of the basic invariants.

use std::fmt;

use coxfilt_algebra::{parse_ratfunc, render_ratfunc, MultiPoly, PolyMatrix, RatFunc, Scalar};

use crate::coxeter::{CoxeterDatum, InvariantSet};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Derivation {
    coeffs: Vec<RatFunc>,
}

impl Derivation {
    /// `coeffs[i] = θ(X_{i+1})`.
    pub fn new(coeffs: Vec<RatFunc>) -> Self {
        let n = coeffs.len();
        assert!(n > 0, "derivation needs at least one coordinate");
        assert!(coeffs.iter().all(|c| c.nvars() == n), "variable count mismatch");
        Derivation { coeffs }
    }

    pub fn from_polys(coeffs: Vec<MultiPoly>) -> Self {
        Self::new(coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![RatFunc::zero(n); n])
    }

    /// `∂_{i+1}`.
    pub fn partial(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i] = RatFunc::one(n);
        d
    }

    /// `E = Σ Xi ∂i`.
    pub fn euler(n: usize) -> Self {
        Self::new((0..n).map(|i| RatFunc::from_poly(MultiPoly::var(n, i))).collect())
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_polynomial)
    }

    /// `θ(f) = Σ θ(Xi) ∂i f`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero(self.nvars());
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let df = f.partial(i);
            if !df.is_zero() {
                acc = &acc + &(c * &df);
            }
        }
        acc
    }

    pub fn apply_poly(&self, f: &MultiPoly) -> RatFunc {
        self.apply(&RatFunc::from_poly(f.clone()))
    }

    /// `∇_self η`.
    pub fn nabla(&self, eta: &Derivation) -> Derivation {
        Derivation::new(eta.coeffs.iter().map(|c| self.apply(c)).collect())
    }

    /// `[self, η]`.
    pub fn bracket(&self, eta: &Derivation) -> Derivation {
        self.nabla(eta).sub(&eta.nabla(self))
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        Derivation::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, f: &RatFunc) -> Derivation {
        Derivation::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation::new(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    /// `∇_ξ` applied `k` times.
    pub fn nabla_pow(&self, k: usize, eta: &Derivation) -> Derivation {
        (0..k).fold(eta.clone(), |acc, _| self.nabla(&acc))
    }

    /// One `<tag> <coefficient>` line per coordinate.
    pub fn render_lines(coeffs: &[RatFunc], tag: &str) -> String {
        coeffs.iter().map(|c| format!("{tag} {}\n", render_ratfunc(c, "X"))).collect()
    }

    /// Text form in the coordinate frame (`dX` lines).
    pub fn render(&self) -> String {
        Self::render_lines(&self.coeffs, "dX")
    }

    /// Parses `dX` or `dP` lines; returns the frame tag and coefficients.
    pub fn parse_lines(text: &str, nvars: usize) -> Result<(String, Vec<RatFunc>)> {
        let mut tag: Option<String> = None;
        let mut coeffs = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (t, body) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            if t != "dX" && t != "dP" {
                return Err(Error::InvariantFile { path: "<derivation>".into(), msg: format!("unknown frame tag `{t}`") });
            }
            if tag.as_deref().is_some_and(|x| x != t) {
                return Err(Error::InvariantFile { path: "<derivation>".into(), msg: "mixed frame tags".into() });
            }
            tag = Some(t.to_string());
            coeffs.push(parse_ratfunc(body, nvars)?);
        }
        if coeffs.len() != nvars {
            return Err(Error::InvariantFile {
                path: "<derivation>".into(),
                msg: format!("{} coefficients for {nvars} variables", coeffs.len()),
            });
        }
        Ok((tag.expect("nonempty"), coeffs))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn apply(theta: &Derivation, f: &RatFunc) -> RatFunc {
    theta.apply(f)
}

pub fn nabla(xi: &Derivation, eta: &Derivation) -> Derivation {
    xi.nabla(eta)
}

pub fn bracket(xi: &Derivation, eta: &Derivation) -> Derivation {
    xi.bracket(eta)
}

/// Matrix whose column `j` holds the coefficients of `family[j]`.
pub fn family_matrix(family: &[Derivation]) -> PolyMatrix {
    let n = family[0].nvars();
    PolyMatrix::from_fn(n, family.len(), n, |i, j| family[j].coeff(i).clone())
}

/// Inverse of [`family_matrix`].
pub fn family_from_matrix(m: &PolyMatrix) -> Vec<Derivation> {
    (0..m.cols()).map(|j| Derivation::new(m.column(j))).collect()
}

/// `I(η, ζ) = Σ ηi A′ij ζj` for the constant Gram matrix `A′`.
pub fn metric(gram_inv: &[Vec<Scalar>], eta: &Derivation, zeta: &Derivation) -> RatFunc {
    let n = eta.nvars();
    let mut acc = RatFunc::zero(n);
    for i in 0..n {
        for j in 0..n {
            if !gram_inv[i][j].is_zero() {
                acc = &acc + &(eta.coeff(i) * zeta.coeff(j)).scale(&gram_inv[i][j]);
            }
        }
    }
    acc
}

/// Conversion between the coordinate frame and the `∂/∂P` frame.
#[derive(Clone, Debug)]
pub struct PFrame {
    /// `J(P)`, with `J_ij = ∂Pj/∂Xi`.
    pub jac: PolyMatrix,
    /// `J(P)⁻ᵀ`; column `j` is `∂/∂Pj` in the coordinate frame.
    pub jac_inv_t: PolyMatrix,
}

impl PFrame {
    pub fn new(datum: &CoxeterDatum, inv: &InvariantSet) -> Result<Self> {
        let jac = inv.jacobian();
        let jac_inv_t = jac
            .inverse_with_hints(&datum.hyperplanes)
            .map_err(|_| Error::Singular { what: "J(P)".into() })?
            .transpose();
        Ok(PFrame { jac, jac_inv_t })
    }

    /// `(θ(P1), …, θ(Pl)) = J(P)ᵀ θ`.
    pub fn to_p(&self, theta: &Derivation) -> Vec<RatFunc> {
        let n = theta.nvars();
        (0..n)
            .map(|i| {
                let mut acc = RatFunc::zero(n);
                for j in 0..n {
                    let (a, b) = (self.jac.get(j, i), theta.coeff(j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `Σ c_i ∂/∂Pi`.
    pub fn from_p(&self, c: &[RatFunc]) -> Derivation {
        let n = c.len();
        Derivation::new(
            (0..n)
                .map(|i| {
                    let mut acc = RatFunc::zero(n);
                    for (j, cj) in c.iter().enumerate() {
                        let a = self.jac_inv_t.get(i, j);
                        if !a.is_zero() && !cj.is_zero() {
                            acc = &acc + &(a * cj);
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `∂/∂P_{j+1}` in the coordinate frame.
    pub fn partial_p(&self, j: usize) -> Derivation {
        Derivation::new(self.jac_inv_t.column(j))
    }

    /// Matrix whose column `j` is the `∂/∂P` coordinates of `family[j]`.
    pub fn family_to_p(&self, family: &[Derivation]) -> PolyMatrix {
        let cols: Vec<Vec<RatFunc>> = family.iter().map(|t| self.to_p(t)).collect();
        let n = cols[0].len();
        PolyMatrix::from_fn(n, cols.len(), n, |i, j| cols[j][i].clone())
    }
}

/// The derivation `D` with `D(Pi) = 0` for `i < l` and `D(Pl) = 1`.
pub fn primitive_derivation(frame: &PFrame, inv: &InvariantSet) -> Result<Derivation> {
    let n = inv.p.len();
    let e_last: Vec<RatFunc> = (0..n)
        .map(|i| if i + 1 == n { RatFunc::one(n) } else { RatFunc::zero(n) })
        .collect();
    let d = frame.from_p(&e_last);
    for (i, p) in inv.p.iter().enumerate() {
        if d.apply_poly(p) != e_last[i] {
            return Err(Error::InvalidInvariants(format!("D(P{}) is not {}", i + 1, e_last[i])));
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{basic_invariants, realize, CoxeterType};
    use coxfilt_algebra::parse_poly;
    use proptest::prelude::*;

    fn r(s: &str) -> RatFunc {
        parse_ratfunc(s, 2).unwrap()
    }

    fn der(a: &str, b: &str) -> Derivation {
        Derivation::new(vec![r(a), r(b)])
    }

    fn b2() -> (PFrame, InvariantSet, Derivation) {
        let d = realize(CoxeterType::B2).unwrap();
        let inv = basic_invariants(&d).unwrap();
        let f = PFrame::new(&d, &inv).unwrap();
        let prim = primitive_derivation(&f, &inv).unwrap();
        (f, inv, prim)
    }

    #[test]
    fn application() {
        assert_eq!(Derivation::euler(2).apply(&r("X1^2*X2^2")), r("4*X1^2*X2^2"));
        assert_eq!(Derivation::partial(2, 0).apply(&r("X1+X2")), RatFunc::one(2));
    }

    #[test]
    fn connection_and_bracket() {
        let eta = der("2*X1*X2^2", "2*X1^2*X2");
        assert_eq!(eta.nabla(&Derivation::euler(2)), eta);
        let dx = Derivation::partial(2, 0);
        let dy = Derivation::partial(2, 1);
        assert_eq!(dx.nabla(&dy.mul(&r("X1^2"))), dy.mul(&r("2*X1")));
        assert!(dx.bracket(&dy).is_zero());
        assert_eq!(Derivation::euler(2).bracket(&dx), dx.scale(&Scalar::int(-1)));
    }

    #[test]
    fn b2_primitive_derivation() {
        let (frame, inv, d) = b2();
        assert_eq!(d, der("-2*X2/(4*X1^3*X2-4*X1*X2^3)", "2*X1/(4*X1^3*X2-4*X1*X2^3)"));
        assert!(d.apply_poly(&inv.p[0]).is_zero());
        assert_eq!(d.apply_poly(&inv.p[1]), RatFunc::one(2));
        assert_eq!(Derivation::euler(2).nabla(&Derivation::euler(2)), Derivation::euler(2));
        assert_eq!(d.nabla(&Derivation::euler(2)), d);
        assert_eq!(frame.to_p(&d), vec![RatFunc::zero(2), RatFunc::one(2)]);
    }

    #[test]
    fn b2_frames() {
        let (frame, inv, _) = b2();
        let p1 = RatFunc::from_poly(inv.p[0].clone());
        let p2 = RatFunc::from_poly(inv.p[1].clone());
        let e = Derivation::euler(2);
        assert_eq!(frame.to_p(&e), vec![p1.scale(&Scalar::int(2)), p2.scale(&Scalar::int(4))]);
        let xi1 = e.scale(&Scalar::int(2));
        assert_eq!(frame.to_p(&xi1), vec![p1.scale(&Scalar::int(4)), p2.scale(&Scalar::int(8))]);
        assert_eq!(frame.from_p(&frame.to_p(&xi1)), xi1);
        for j in 0..2 {
            let pj = frame.to_p(&frame.partial_p(j));
            for (i, c) in pj.iter().enumerate() {
                assert_eq!(c.as_constant(), Some(Scalar::int((i == j) as i64)));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let d = der("X1^2", "-1/(X1-X2)");
        let text = d.render();
        assert_eq!(text, "dX X1^2\ndX (-1)/(X1-X2)\n");
        let (tag, c) = Derivation::parse_lines(&text, 2).unwrap();
        assert_eq!(tag, "dX");
        assert_eq!(Derivation::new(c), d);
        assert!(Derivation::parse_lines("dX 1\ndP 1\n", 2).is_err());
    }

    fn arb_der() -> impl Strategy<Value = Derivation> {
        let coeff = prop::collection::vec((-3i64..4, 0u32..3, 0u32..3), 1..4).prop_map(|ts| {
            let s: Vec<String> = ts.iter().map(|(c, a, b)| format!("({c})*X1^{a}*X2^{b}")).collect();
            parse_poly(&s.join("+"), 2).unwrap()
        });
        (coeff.clone(), coeff).prop_map(|(a, b)| Derivation::from_polys(vec![a, b]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn torsion_free(x in arb_der(), y in arb_der()) {
            prop_assert_eq!(x.nabla(&y).sub(&y.nabla(&x)), x.bracket(&y));
        }

        #[test]
        fn leibniz(x in arb_der(), f in arb_der(), g in arb_der()) {
            let (f, g) = (f.coeff(0).clone(), g.coeff(1).clone());
            prop_assert_eq!(x.apply(&(&f * &g)), &(&f * &x.apply(&g)) + &(&g * &x.apply(&f)));
        }

        #[test]
        fn metric_compatible(x in arb_der(), y in arb_der(), z in arb_der()) {
            let a = realize(CoxeterType::A2).unwrap();
            let lhs = x.apply(&metric(&a.gram_inv, &y, &z));
            let rhs = &metric(&a.gram_inv, &x.nabla(&y), &z) + &metric(&a.gram_inv, &y, &x.nabla(&z));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn flat_with_primitive_derivation(x in arb_der(), y in arb_der()) {
            let (_, _, d) = b2();
            let lhs = d.nabla(&x.nabla(&y)).sub(&x.nabla(&d.nabla(&y)));
            prop_assert_eq!(lhs, d.bracket(&x).nabla(&y));
        }
    }
}
