//! The bases `ξ^(m)` of the contact-order filtration, the matrices `G` and
//! `B^(k)`, the inverse image `∇_D^{-k} E`, and exact checks of the
//! identities that relate them.
//!
//! A [`FiltrationContext`] is built once per group and then only read. Every
//! derived object is memoized per index behind a `OnceLock`, so concurrent
//! readers share one computation.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use coxfilt_algebra::{Monomial, MultiPoly, PolyMatrix, RatFunc, RowEchelon, Scalar, Solution};

use crate::coxeter::{CoxeterDatum, InvariantSet};
use crate::derivations::{family_from_matrix, family_matrix, primitive_derivation, Derivation, PFrame};
use crate::error::{Error, Result};
use crate::report::{all, compare_families, compare_matrices, Outcome, VerificationReport};

type Shared<T> = Result<Arc<T>>;

struct Memo<T> {
    cells: Mutex<HashMap<usize, Arc<OnceLock<T>>>>,
}

impl<T: Clone> Memo<T> {
    fn new() -> Self {
        Memo { cells: Mutex::new(HashMap::new()) }
    }

    fn get_or(&self, key: usize, f: impl FnOnce() -> T) -> T {
        let cell = self.cells.lock().expect("memo lock").entry(key).or_default().clone();
        cell.get_or_init(f).clone()
    }
}

/// `J(fs)_ij = ∂fj/∂Xi`.
pub fn jacobian(fs: &[RatFunc]) -> PolyMatrix {
    let n = fs.len();
    PolyMatrix::from_fn(n, n, n, |i, j| fs[j].partial(i))
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Exponent vectors `a` with `Σ a_i d_i = w`.
pub fn weighted_monomials(degrees: &[u32], w: u32) -> Vec<Vec<u32>> {
    fn rec(ds: &[u32], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&d, rest)) = ds.split_first() else {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        };
        for e in 0..=left / d {
            cur.push(e);
            rec(rest, left - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, w, &mut Vec::new(), &mut out);
    out
}

fn p_monomial(inv: &InvariantSet, a: &[u32]) -> MultiPoly {
    let n = inv.q.nvars();
    a.iter()
        .zip(&inv.p)
        .fold(MultiPoly::one(n), |acc, (&e, p)| if e == 0 { acc } else { &acc * &p.pow(e) })
}

/// Rewrites an invariant polynomial `f(X)` as a polynomial in `P1 … Pl`
/// (variables `X1 … Xl` of the result stand for `P1 … Pl`). `None` if `f` is
/// not in `ℚ[P]`.
pub fn express_in_invariants(f: &MultiPoly, inv: &InvariantSet) -> Result<Option<MultiPoly>> {
    let n = inv.q.nvars();
    let degrees: Vec<u32> = inv.p.iter().map(|p| p.total_degree().expect("nonzero")).collect();
    let mut by_degree: HashMap<u32, Vec<(Monomial, Scalar)>> = HashMap::new();
    for (m, c) in f.terms() {
        by_degree.entry(m.degree()).or_default().push((*m, c.clone()));
    }
    let mut out = MultiPoly::zero(n);
    for (w, terms) in by_degree {
        let part = MultiPoly::from_terms(n, terms);
        let cands = weighted_monomials(&degrees, w);
        let polys: Vec<MultiPoly> = cands.iter().map(|a| p_monomial(inv, a)).collect();
        let mut monos: BTreeSet<Monomial> = part.terms().iter().map(|t| t.0).collect();
        for p in &polys {
            monos.extend(p.terms().iter().map(|t| t.0));
        }
        let mut ech = RowEchelon::new(cands.len());
        for m in monos {
            ech.push(polys.iter().map(|p| p.coeff(m)).collect(), part.coeff(m));
        }
        match ech.solve() {
            Solution::Unique(x) => {
                for (a, c) in cands.iter().zip(x) {
                    out = &out + &MultiPoly::term(n, Monomial::from_exponents(a), c);
                }
            }
            Solution::Inconsistent => return Ok(None),
            Solution::Underdetermined => {
                return Err(Error::InvalidInvariants("invariant monomials are linearly dependent".into()))
            }
        }
    }
    Ok(Some(out))
}

/// `θ(α)` for a linear form `α`.
fn apply_linear(theta: &Derivation, alpha: &MultiPoly) -> Result<MultiPoly> {
    let v = theta.apply_poly(alpha);
    v.into_poly().map_err(|_| Error::NotPolynomial { what: "derivation".into() })
}

/// `None` if `θ(α_H)` is divisible by `α_H^m` for every hyperplane, otherwise
/// a witness naming the first failing hyperplane.
pub fn membership_witness(theta: &Derivation, m: usize, hyperplanes: &[MultiPoly]) -> Result<Option<String>> {
    if !theta.is_polynomial() {
        return Err(Error::NotPolynomial { what: "derivation".into() });
    }
    for alpha in hyperplanes {
        let mut v = apply_linear(theta, alpha)?;
        for e in 0..m {
            if v.is_zero() {
                break;
            }
            match v.divide_exact(alpha)? {
                Some(q) => v = q,
                None => {
                    return Ok(Some(format!(
                        "theta({alpha}) = {} is divisible by ({alpha})^{e} but not ^{m}",
                        apply_linear(theta, alpha)?
                    )))
                }
            }
        }
    }
    Ok(None)
}

/// Whether `θ ∈ D^(m)(𝒜)`.
pub fn membership_check(theta: &Derivation, m: usize, hyperplanes: &[MultiPoly]) -> Result<bool> {
    Ok(membership_witness(theta, m, hyperplanes)?.is_none())
}

/// The constant `c` with `det[θj(Xi)] = c·Q^m`, if the determinant has that
/// form with `c ≠ 0`.
pub fn determinant_constant(family: &[Derivation], m: usize, q: &MultiPoly) -> Result<Option<Scalar>> {
    let det = family_matrix(family)
        .det()?
        .into_poly()
        .map_err(|_| Error::NotPolynomial { what: "coefficient determinant".into() })?;
    if det.is_zero() {
        return Ok(None);
    }
    Ok(match det.divide_exact(&q.pow(m as u32))? {
        Some(c) => c.as_constant().filter(|c| !c.is_zero()),
        _ => None,
    })
}

/// `None` if `det[θj(Xi)] = c·Q^m` with `c ≠ 0`, otherwise a witness.
pub fn saito_ziegler_witness(family: &[Derivation], m: usize, q: &MultiPoly) -> Result<Option<String>> {
    if determinant_constant(family, m, q)?.is_some() {
        return Ok(None);
    }
    let det = family_matrix(family).det()?;
    Ok(Some(if det.is_zero() {
        "coefficient determinant is 0".into()
    } else {
        format!("coefficient determinant {det} is not a constant multiple of Q^{m}")
    }))
}

pub fn saito_ziegler_check(family: &[Derivation], m: usize, q: &MultiPoly) -> Result<bool> {
    Ok(saito_ziegler_witness(family, m, q)?.is_none())
}

/// Solution of `∇_D^k ζ = E` in the ansatz space.
#[derive(Clone, Debug)]
pub struct Zeta {
    pub zeta: Derivation,
    /// Size of the ansatz space.
    pub unknowns: usize,
}

pub struct FiltrationContext {
    pub datum: CoxeterDatum,
    pub inv: InvariantSet,
    pub frame: PFrame,
    /// The primitive derivation.
    pub d: Derivation,
    /// `G = J(P)ᵀ A J(P)`.
    pub g: PolyMatrix,
    /// `A` as a constant matrix.
    pub gram: PolyMatrix,
    perturb: bool,
    dg: OnceLock<PolyMatrix>,
    d_pow_x: Memo<Arc<Vec<RatFunc>>>,
    jac_d: Memo<Arc<PolyMatrix>>,
    jac_d_inv: Memo<Shared<PolyMatrix>>,
    xi: Memo<Shared<Vec<Derivation>>>,
    b: Memo<Shared<PolyMatrix>>,
    nabla_d_xi: Memo<Shared<Vec<Derivation>>>,
    zeta: Memo<Shared<Zeta>>,
}

fn label_err(what: &str, e: impl std::fmt::Display) -> String {
    format!("{what}: {e}")
}

impl FiltrationContext {
    /// With `perturb`, the leading term of the first nonzero coefficient of
    /// `ξ_2^(1)` is negated, so downstream checks must fail.
    pub fn new(datum: CoxeterDatum, inv: InvariantSet, perturb: bool) -> Result<Self> {
        let n = datum.rank;
        let frame = PFrame::new(&datum, &inv)?;
        let d = primitive_derivation(&frame, &inv)?;
        let gram = PolyMatrix::from_scalars(n, &datum.gram)?;
        let g = frame.jac.transpose().mul(&gram)?.mul(&frame.jac)?;
        Ok(FiltrationContext {
            datum,
            inv,
            frame,
            d,
            g,
            gram,
            perturb,
            dg: OnceLock::new(),
            d_pow_x: Memo::new(),
            jac_d: Memo::new(),
            jac_d_inv: Memo::new(),
            xi: Memo::new(),
            b: Memo::new(),
            nabla_d_xi: Memo::new(),
            zeta: Memo::new(),
        })
    }

    pub fn label(&self) -> String {
        self.datum.label()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// `(D^k(X1), …, D^k(Xl))`.
    pub fn d_pow_x(&self, k: usize) -> Arc<Vec<RatFunc>> {
        self.d_pow_x.get_or(k, || {
            let n = self.rank();
            if k == 0 {
                return Arc::new((0..n).map(|i| RatFunc::from_poly(MultiPoly::var(n, i))).collect());
            }
            let prev = self.d_pow_x(k - 1);
            Arc::new(prev.iter().map(|f| self.d.apply(f)).collect())
        })
    }

    /// `J(D^k[X])`.
    pub fn jac_d(&self, k: usize) -> Arc<PolyMatrix> {
        self.jac_d.get_or(k, || Arc::new(jacobian(&self.d_pow_x(k))))
    }

    /// `J(D^k[X])⁻¹`.
    pub fn jac_d_inv(&self, k: usize) -> Shared<PolyMatrix> {
        self.jac_d_inv.get_or(k, || {
            if k == 0 {
                return Ok(Arc::new(PolyMatrix::identity(self.rank(), self.rank())));
            }
            self.jac_d(k)
                .inverse_with_hints(&self.datum.hyperplanes)
                .map(Arc::new)
                .map_err(|_| Error::Singular { what: format!("J(D^{k}[X])") })
        })
    }

    /// `(∂/∂P) J(P)ᵀ A J(D^k[X])⁻¹`, times `J(P)` on the right for odd `m`.
    pub fn xi_basis(&self, m: usize) -> Shared<Vec<Derivation>> {
        self.xi.get_or(m, || {
            let k = m / 2;
            let mut coeffs = self.frame.jac.transpose().mul(&self.gram)?.mul(&*self.jac_d_inv(k)?)?;
            if m % 2 == 1 {
                coeffs = coeffs.mul(&self.frame.jac)?;
            }
            let xs = self.frame.jac_inv_t.mul(&coeffs)?;
            if !xs.is_polynomial() {
                return Err(Error::NotPolynomial { what: format!("xi^({m})") });
            }
            let mut family = family_from_matrix(&xs);
            if self.perturb && m == 1 && family.len() > 1 {
                family[1] = perturbed(&family[1]);
            }
            Ok(Arc::new(family))
        })
    }

    /// `D[G]`, entrywise.
    pub fn dg(&self) -> &PolyMatrix {
        self.dg.get_or_init(|| self.g.map(|f| self.d.apply(f)))
    }

    /// `B^(k) = −J(P)ᵀ A J(D^k[X]) J(D^{k−1}[X])⁻¹ J(P)`.
    pub fn b_matrix(&self, k: usize) -> Shared<PolyMatrix> {
        assert!(k >= 1, "B^(k) is defined for k >= 1");
        self.b.get_or(k, || {
            let n = self.rank();
            let lhs = self.frame.jac.transpose().mul(&self.gram)?.mul(&self.jac_d(k))?;
            let b = lhs
                .mul(&*self.jac_d_inv(k - 1)?)?
                .mul(&self.frame.jac)?
                .scale(&RatFunc::constant(n, Scalar::int(-1)));
            if !b.is_polynomial() {
                return Err(Error::NotPolynomial { what: format!("B^({k})") });
            }
            Ok(Arc::new(b))
        })
    }

    /// `(∇_D^s ξ_1^(m), …, ∇_D^s ξ_l^(m))`.
    pub fn nabla_d_xi(&self, m: usize, s: usize) -> Shared<Vec<Derivation>> {
        self.nabla_d_xi.get_or(m * 1024 + s, || {
            if s == 0 {
                return self.xi_basis(m);
            }
            let prev = self.nabla_d_xi(m, s - 1)?;
            Ok(Arc::new(prev.iter().map(|x| self.d.nabla(x)).collect()))
        })
    }

    /// Weighted degree of the coefficient of `ξ_j^(2k−1)` in the ansatz.
    fn ansatz_weight(&self, j: usize) -> Option<u32> {
        let h = self.datum.coxeter_number();
        (h + 2).checked_sub(self.datum.degrees[j])
    }

    /// `ζ` with `∇_D^k ζ = E`, found as `Σ tj ξj^(2k−1)` with each `tj` a
    /// ℚ-combination of invariant monomials of the homogeneous weight. The
    /// Leibniz rule `∇_D^k(tξ) = Σ C(k,r) D^r(t) ∇_D^{k−r} ξ` with
    /// `D = ∂/∂Pl` on invariants turns this into a linear system.
    pub fn nabla_d_inverse_e(&self, k: usize) -> Shared<Zeta> {
        self.zeta.get_or(k, || {
            let n = self.rank();
            let e = Derivation::euler(n);
            if k == 0 {
                return Ok(Arc::new(Zeta { zeta: e, unknowns: 0 }));
            }
            let m = 2 * k - 1;
            let basis = self.xi_basis(m)?;
            let powers: Vec<Arc<Vec<Derivation>>> =
                (0..=k).map(|s| self.nabla_d_xi(m, s)).collect::<Result<_>>()?;
            let last = n - 1;
            let mut unknowns: Vec<(usize, Vec<u32>)> = Vec::new();
            let mut images: Vec<Derivation> = Vec::new();
            for j in 0..n {
                let Some(w) = self.ansatz_weight(j) else { continue };
                for a in weighted_monomials(&self.datum.degrees, w) {
                    let mut v = Derivation::zero(n);
                    for r in 0..=k.min(a[last] as usize) {
                        // ∂^r/∂Pl^r of P^a
                        let mut b = a.clone();
                        b[last] -= r as u32;
                        let falling: i64 = (0..r as i64).map(|i| a[last] as i64 - i).product();
                        let c = Scalar::int(binomial(k, r) * falling);
                        let t = RatFunc::from_poly(p_monomial(&self.inv, &b).scale(&c));
                        v = v.add(&powers[k - r][j].mul(&t));
                    }
                    unknowns.push((j, a));
                    images.push(v);
                }
            }
            let x = solve_combination(&images, &e, k)?;
            let mut zeta = Derivation::zero(n);
            for ((j, a), c) in unknowns.iter().zip(&x) {
                if c.is_zero() {
                    continue;
                }
                let t = RatFunc::from_poly(p_monomial(&self.inv, a).scale(c));
                zeta = zeta.add(&basis[*j].mul(&t));
            }
            Ok(Arc::new(Zeta { zeta, unknowns: unknowns.len() }))
        })
    }

    fn expected_degree(&self, m: usize, j: usize) -> u32 {
        let k = (m / 2) as u32;
        let h = self.datum.coxeter_number();
        if m.is_multiple_of(2) {
            k * h
        } else {
            k * h + self.datum.degrees[j] - 1
        }
    }

    fn report(&self, identity: &str, params: &[(&str, usize)], outcome: Outcome) -> VerificationReport {
        VerificationReport::new(&self.label(), identity, params, outcome)
    }

    /// Membership, determinant, degree law and containment in the previous
    /// filtration step for `ξ^(m)`.
    pub fn certify_basis(&self, m: usize) -> Vec<VerificationReport> {
        let p = [("m", m)];
        let basis = match self.xi_basis(m) {
            Ok(b) => b,
            Err(e) => {
                let w = Err(label_err(&format!("xi^({m})"), e));
                return ["basis_membership", "basis_determinant", "degree_law", "containment"]
                    .iter()
                    .map(|id| self.report(id, &p, w.clone()))
                    .collect();
            }
        };
        let hyper = &self.datum.hyperplanes;
        let membership = all(basis.iter().enumerate().map(|(j, x)| match membership_witness(x, m, hyper) {
            Ok(None) => Ok(()),
            Ok(Some(w)) => Err(format!("xi_{}^({m}): {w}", j + 1)),
            Err(e) => Err(e.to_string()),
        }));
        let det = match saito_ziegler_witness(&basis, m, &self.inv.q) {
            Ok(None) => Ok(()),
            Ok(Some(w)) => Err(w),
            Err(e) => Err(e.to_string()),
        };
        let degrees = all(basis.iter().enumerate().flat_map(|(j, x)| {
            let want = self.expected_degree(m, j);
            x.coeffs().iter().enumerate().map(move |(i, c)| {
                let p = c.as_poly().expect("certified polynomial");
                if p.is_zero() || p.is_homogeneous_of(want) {
                    Ok(())
                } else {
                    Err(format!("xi_{}^({m}) coefficient {} is not homogeneous of degree {want}", j + 1, i + 1))
                }
            })
        }));
        let containment = if m == 0 {
            Ok(())
        } else {
            all(basis.iter().enumerate().map(|(j, x)| match membership_witness(x, m - 1, hyper) {
                Ok(None) => Ok(()),
                Ok(Some(w)) => Err(format!("xi_{}^({m}) not in D^({}): {w}", j + 1, m - 1)),
                Err(e) => Err(e.to_string()),
            }))
        };
        vec![
            self.report("basis_membership", &p, membership),
            self.report("basis_determinant", &p, det),
            self.report("degree_law", &p, degrees),
            self.report("containment", &p, containment),
        ]
    }

    fn b_in_t(&self, b: &PolyMatrix) -> Outcome {
        let last = self.rank() - 1;
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let f = b.get(i, j);
                let p = f.as_poly().expect("B is polynomial");
                match express_in_invariants(p, &self.inv).map_err(|e| e.to_string())? {
                    None => return Err(format!("entry ({},{}) = {p} is not a polynomial in P", i + 1, j + 1)),
                    Some(q) if q.degree_in(last) > 0 => {
                        return Err(format!(
                            "entry ({},{}) = {} involves P{}",
                            i + 1,
                            j + 1,
                            coxfilt_algebra::render_poly(&q, "P"),
                            last + 1
                        ))
                    }
                    Some(_) => {}
                }
                let df = self.d.apply(f);
                if !df.is_zero() {
                    return Err(format!("D applied to entry ({},{}) gives {df}", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// For each `k ≤ k_max`: entries of `B^(k)` lie in `T` and are killed by
    /// `D`; `det B^(k)` is a nonzero constant; `B^(k) + B^(k)ᵀ = (2k−1) D[G]`;
    /// `B^(k+1) = B^(1) + k D[G]`.
    pub fn verify_b_identities(&self, k_max: usize) -> Vec<VerificationReport> {
        let n = self.rank();
        let mut out = Vec::new();
        for k in 1..=k_max {
            let p = [("k", k)];
            let b = match self.b_matrix(k) {
                Ok(b) => b,
                Err(e) => {
                    let w = Err(label_err(&format!("B^({k})"), e));
                    for id in ["b_in_t", "b_det_unit", "dg_split", "b_recursion"] {
                        out.push(self.report(id, &p, w.clone()));
                    }
                    continue;
                }
            };
            out.push(self.report("b_in_t", &p, self.b_in_t(&b)));
            let det = match b.det() {
                Ok(d) => match d.as_constant() {
                    Some(c) if !c.is_zero() => Ok(()),
                    _ => Err(format!("det B^({k}) = {d}")),
                },
                Err(e) => Err(e.to_string()),
            };
            out.push(self.report("b_det_unit", &p, det));
            let sym = b.add(&b.transpose()).expect("square");
            let want = self.dg().scale(&RatFunc::constant(n, Scalar::int(2 * k as i64 - 1)));
            out.push(self.report("dg_split", &p, compare_matrices("B + B^T vs (2k-1) D[G]", &sym, &want)));
            let rec = match (self.b_matrix(k + 1), self.b_matrix(1)) {
                (Ok(next), Ok(b1)) => {
                    let rhs = b1
                        .add(&self.dg().scale(&RatFunc::constant(n, Scalar::int(k as i64))))
                        .expect("square");
                    compare_matrices(&format!("B^({}) vs B^(1) + k D[G]", k + 1), &next, &rhs)
                }
                (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
            };
            out.push(self.report("b_recursion", &p, rec));
        }
        out
    }

    /// `(∇_D^k ξ^(2k−1))` in the `∂/∂P` frame equals `(−1)^{k−1} B^(k)`.
    pub fn verify_nabla_power_identity(&self, k: usize) -> VerificationReport {
        let n = self.rank();
        let outcome = (|| -> std::result::Result<Outcome, Error> {
            let lhs = self.frame.family_to_p(&self.nabla_d_xi(2 * k - 1, k)?);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let rhs = self.b_matrix(k)?.scale(&RatFunc::constant(n, Scalar::int(sign)));
            Ok(compare_matrices("P-frame of nabla_D^k xi^(2k-1) vs (-1)^(k-1) B^(k)", &lhs, &rhs))
        })();
        self.report("nabla_power", &[("k", k)], outcome.unwrap_or_else(|e| Err(e.to_string())))
    }

    /// Unique solvability, `∇_D^k ζ = E` by forward application, and
    /// `ζ ∈ D^(2k−1)(𝒜)`.
    pub fn verify_nabla_inverse(&self, k: usize) -> VerificationReport {
        let n = self.rank();
        let outcome = match self.nabla_d_inverse_e(k) {
            Err(e) => Err(e.to_string()),
            Ok(z) => {
                let forward = self.d.nabla_pow(k, &z.zeta);
                let fwd = compare_families("nabla_D^k zeta vs E", &[forward], &[Derivation::euler(n)]);
                let mem = if k == 0 {
                    Ok(())
                } else {
                    match membership_witness(&z.zeta, 2 * k - 1, &self.datum.hyperplanes) {
                        Ok(None) => Ok(()),
                        Ok(Some(w)) => Err(w),
                        Err(e) => Err(e.to_string()),
                    }
                };
                all([fwd, mem])
            }
        };
        self.report("nabla_inverse", &[("k", k)], outcome)
    }

    /// `(∇_{ξ_j^(1)} ζ_k)` family.
    pub fn odd_family(&self, k: usize) -> Result<Vec<Derivation>> {
        let zeta = self.nabla_d_inverse_e(k)?;
        let sign = Scalar::int(if k.is_multiple_of(2) { 1 } else { -1 });
        Ok(self.xi_basis(1)?.iter().map(|x| x.nabla(&zeta.zeta).scale(&sign)).collect())
    }

    /// `(Σ_i A_ij ∇_{∂i} ζ_k)` family.
    pub fn even_family(&self, k: usize) -> Result<Vec<Derivation>> {
        let n = self.rank();
        let zeta = self.nabla_d_inverse_e(k)?;
        let partials: Vec<Derivation> = (0..n).map(|i| Derivation::partial(n, i).nabla(&zeta.zeta)).collect();
        let sign = RatFunc::constant(n, Scalar::int(if k.is_multiple_of(2) { 1 } else { -1 }));
        let m = family_matrix(&partials).mul(&self.gram)?.scale(&sign);
        Ok(family_from_matrix(&m))
    }

    fn family_basis(&self, family: &[Derivation], m: usize) -> Outcome {
        let hyper = &self.datum.hyperplanes;
        let mem = all(family.iter().enumerate().map(|(j, x)| match membership_witness(x, m, hyper) {
            Ok(None) => Ok(()),
            Ok(Some(w)) => Err(format!("member {}: {w}", j + 1)),
            Err(e) => Err(e.to_string()),
        }));
        mem?;
        match saito_ziegler_witness(family, m, &self.inv.q) {
            Ok(None) => Ok(()),
            Ok(Some(w)) => Err(w),
            Err(e) => Err(e.to_string()),
        }
    }

    /// `ξ^(2k+1) = (−1)^k (∇_{ξ^(1)} ζ_k)` and `ξ^(2k) = (−1)^k (∇_∂ ζ_k) A`;
    /// both right-hand families are certified as bases independently; and
    /// `∇_D^{k+1}` of the odd family reproduces `(−1)^k B^(k+1)`.
    pub fn verify_basis_equality(&self, k: usize) -> Vec<VerificationReport> {
        let n = self.rank();
        let p = [("k", k)];
        let odd = self.odd_family(k);
        let even = self.even_family(k);
        let eq = |fam: &Result<Vec<Derivation>>, m: usize| -> Outcome {
            let fam = fam.as_ref().map_err(|e| e.to_string())?;
            let xi = self.xi_basis(m).map_err(|e| e.to_string())?;
            compare_families(&format!("xi^({m}) vs right-hand family"), &xi, fam)
        };
        let basis = |fam: &Result<Vec<Derivation>>, m: usize| -> Outcome {
            let fam = fam.as_ref().map_err(|e| e.to_string())?;
            self.family_basis(fam, m)
        };
        let chain = (|| -> std::result::Result<Outcome, Error> {
            let fam = odd.as_ref().map_err(Clone::clone)?;
            let lifted: Vec<Derivation> = fam.iter().map(|x| self.d.nabla_pow(k + 1, x)).collect();
            let lhs = self.frame.family_to_p(&lifted);
            let sign = Scalar::int(if k.is_multiple_of(2) { 1 } else { -1 });
            let rhs = self.b_matrix(k + 1)?.scale(&RatFunc::constant(n, sign));
            Ok(compare_matrices("P-frame of nabla_D^(k+1) of odd family vs (-1)^k B^(k+1)", &lhs, &rhs))
        })();
        vec![
            self.report("odd_basis_equality", &p, eq(&odd, 2 * k + 1)),
            self.report("even_basis_equality", &p, eq(&even, 2 * k)),
            self.report("odd_family_basis", &p, basis(&odd, 2 * k + 1)),
            self.report("even_family_basis", &p, basis(&even, 2 * k)),
            self.report("theorem_chain", &p, chain.unwrap_or_else(|e| Err(e.to_string()))),
        ]
    }

    /// `∇_D^k ∇_ξ − ∇_ξ ∇_D^k = k ∇_D^{k−1} ∇_{[D,ξ]}` on `E` and `ζ_k` for
    /// every `ξ = ξ_j^(1)`, for `k ≤ k_max`; and `[D, [D, ξ]] = 0`.
    pub fn verify_commutator_identity(&self, k_max: usize) -> Vec<VerificationReport> {
        let n = self.rank();
        let mut out = Vec::new();
        let xi = match self.xi_basis(1) {
            Ok(x) => x,
            Err(e) => {
                let w = Err(e.to_string());
                out.push(self.report("double_bracket", &[], w.clone()));
                for k in 1..=k_max {
                    out.push(self.report("commutator", &[("k", k)], w.clone()));
                }
                return out;
            }
        };
        let brackets: Vec<Derivation> = xi.iter().map(|x| self.d.bracket(x)).collect();
        let double = all(brackets.iter().enumerate().map(|(j, b)| {
            let bb = self.d.bracket(b);
            if bb.is_zero() {
                Ok(())
            } else {
                Err(format!("[D,[D,xi_{}]] = {bb:?}", j + 1))
            }
        }));
        out.push(self.report("double_bracket", &[], double));
        for k in 1..=k_max {
            let mut samples = vec![Derivation::euler(n)];
            let outcome = match self.nabla_d_inverse_e(k) {
                Ok(z) => {
                    samples.push(z.zeta.clone());
                    all(xi.iter().zip(&brackets).enumerate().flat_map(|(j, (x, br))| {
                        samples.iter().enumerate().map(move |(s, eta)| {
                            let lhs = self.d.nabla_pow(k, &x.nabla(eta)).sub(&x.nabla(&self.d.nabla_pow(k, eta)));
                            let rhs = self
                                .d
                                .nabla_pow(k - 1, &br.nabla(eta))
                                .scale(&Scalar::int(k as i64));
                            compare_families(&format!("xi_{}, sample {}", j + 1, s + 1), &[lhs], &[rhs])
                        })
                    }))
                }
                Err(e) => Err(e.to_string()),
            };
            out.push(self.report("commutator", &[("k", k)], outcome));
        }
        out
    }

    /// `([D, ξ_j])` in the `∂/∂P` frame equals `D[G]`, and equals
    /// `(∇_D ξ_j)(B^(1))⁻¹ D[G]` with `∇_D ξ` also in the `∂/∂P` frame.
    pub fn verify_bracket_identity(&self) -> VerificationReport {
        let outcome = (|| -> std::result::Result<Outcome, Error> {
            let xi = self.xi_basis(1)?;
            let brackets: Vec<Derivation> = xi.iter().map(|x| self.d.bracket(x)).collect();
            let lhs = self.frame.family_to_p(&brackets);
            let first = compare_matrices("P-frame of [D, xi] vs D[G]", &lhs, self.dg());
            let nd = self.frame.family_to_p(&self.nabla_d_xi(1, 1)?);
            let b1_inv = self.b_matrix(1)?.inverse()?;
            let rhs = nd.mul(&b1_inv)?.mul(self.dg())?;
            let second = compare_matrices("P-frame of [D, xi] vs (nabla_D xi) B1^-1 D[G]", &lhs, &rhs);
            Ok(all([first, second]))
        })();
        self.report("bracket_frame", &[], outcome.unwrap_or_else(|e| Err(e.to_string())))
    }

    /// `(∇_{ξ_j} η) = (∇_{∂_i} η) A J(P)` for each sample `η`.
    pub fn verify_frame_change(&self, samples: &[Derivation]) -> Vec<VerificationReport> {
        let n = self.rank();
        samples
            .iter()
            .enumerate()
            .map(|(s, eta)| {
                let outcome = (|| -> std::result::Result<Outcome, Error> {
                    let xi = self.xi_basis(1)?;
                    let lhs: Vec<Derivation> = xi.iter().map(|x| x.nabla(eta)).collect();
                    let partials: Vec<Derivation> = (0..n).map(|i| Derivation::partial(n, i).nabla(eta)).collect();
                    let rhs = family_matrix(&partials).mul(&self.gram)?.mul(&self.frame.jac)?;
                    Ok(compare_families("nabla_xi eta vs (nabla_d eta) A J(P)", &lhs, &family_from_matrix(&rhs)))
                })();
                self.report("frame_change", &[("sample", s + 1)], outcome.unwrap_or_else(|e| Err(e.to_string())))
            })
            .collect()
    }

    /// Default samples `E`, `D`, `∇_D^{-1} E` (the last when solvable).
    pub fn frame_change_samples(&self) -> Vec<Derivation> {
        let n = self.rank();
        let mut s = vec![Derivation::euler(n), self.d.clone()];
        if let Ok(z) = self.nabla_d_inverse_e(1) {
            s.push(z.zeta.clone());
        }
        s
    }

    /// Every check in dependency order: basis certificates for `m ≤ m_max`,
    /// then the `B^(k)` identities, `∇_D` powers, inverse images, basis
    /// equalities and commutator identities for `k ≤ k_max`, then the bracket
    /// and frame-change identities.
    pub fn run_all(&self, k_max: usize, m_max: usize) -> Vec<VerificationReport> {
        let mut out = Vec::new();
        for m in 0..=m_max {
            out.extend(self.certify_basis(m));
        }
        out.extend(self.verify_b_identities(k_max));
        for k in 1..=k_max {
            out.push(self.verify_nabla_power_identity(k));
        }
        for k in 1..=k_max {
            out.push(self.verify_nabla_inverse(k));
        }
        for k in 0..=k_max {
            out.extend(self.verify_basis_equality(k));
        }
        out.extend(self.verify_commutator_identity(k_max));
        out.push(self.verify_bracket_identity());
        out.extend(self.verify_frame_change(&self.frame_change_samples()));
        out
    }
}

/// Negates the leading term of the first nonzero coefficient.
fn perturbed(theta: &Derivation) -> Derivation {
    let mut coeffs = theta.coeffs().to_vec();
    if let Some(c) = coeffs.iter_mut().find(|c| !c.is_zero()) {
        let p = c.as_poly().expect("polynomial basis").clone();
        let (m, a) = p.leading().expect("nonzero").clone();
        let lead = MultiPoly::term(p.nvars(), m, a);
        *c = RatFunc::from_poly(&p - &lead.scale(&Scalar::int(2)));
    }
    Derivation::new(coeffs)
}

/// Scalars `x` with `Σ x_c images[c] = target`, by matching monomial
/// coefficients after clearing a common denominator.
fn solve_combination(images: &[Derivation], target: &Derivation, k: usize) -> Result<Vec<Scalar>> {
    let n = target.nvars();
    let all_coeffs: Vec<&RatFunc> = images
        .iter()
        .flat_map(|d| d.coeffs().iter())
        .chain(target.coeffs().iter())
        .collect();
    let lcm = coxfilt_algebra::ratfunc::lcm_of_denominators(all_coeffs.iter().copied());
    let mut ech = RowEchelon::new(images.len());
    for i in 0..n {
        let cols: Vec<MultiPoly> = images.iter().map(|d| d.coeff(i).clear_with(&lcm)).collect();
        let rhs = target.coeff(i).clear_with(&lcm);
        let mut monos: BTreeSet<Monomial> = rhs.terms().iter().map(|t| t.0).collect();
        for c in &cols {
            monos.extend(c.terms().iter().map(|t| t.0));
        }
        for m in monos {
            ech.push(cols.iter().map(|c| c.coeff(m)).collect(), rhs.coeff(m));
        }
    }
    match ech.solve() {
        Solution::Unique(x) => Ok(x),
        Solution::Inconsistent => Err(Error::Inconsistent { k }),
        Solution::Underdetermined => Err(Error::Underdetermined { k }),
    }
}
