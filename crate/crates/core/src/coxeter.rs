//! Concrete realizations of the supported finite Coxeter groups, their
//! reflecting hyperplanes, and a basic-invariant search.
//!
//! Coordinates `X1 … Xl` form a basis of V*, with constant Gram matrix
//! `A = [I*(Xi, Xj)]`. Crystallographic types use simple-root coordinates so
//! everything stays over ℚ; the non-crystallographic ones are realized over
//! ℚ(√3) or ℚ(√5). A group element is stored as the matrix `M` of the
//! substitution `X ↦ M X`, so `(p ∘ g)(X) = p(M X)`.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use coxfilt_algebra::{parse_poly, MultiPoly, PolyMatrix, Rational, Scalar};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::smat::{self, ScalarMatrix};

/// Closure stops with an error past this many elements.
pub const GROUP_BOUND: usize = 10_000;

/// Bumped whenever the invariant search can produce a different family.
pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterType {
    A2,
    A3,
    B2,
    B3,
    G2,
    H3,
    /// Dihedral group of order 2m, m ∈ {3, 4, 5, 6}.
    I2(u32),
}

impl CoxeterType {
    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A3 | CoxeterType::B3 | CoxeterType::H3 => 3,
            _ => 2,
        }
    }

    pub fn degrees(self) -> Vec<u32> {
        match self {
            CoxeterType::A2 => vec![2, 3],
            CoxeterType::A3 => vec![2, 3, 4],
            CoxeterType::B2 => vec![2, 4],
            CoxeterType::B3 => vec![2, 4, 6],
            CoxeterType::G2 => vec![2, 6],
            CoxeterType::H3 => vec![2, 6, 10],
            CoxeterType::I2(m) => vec![2, m],
        }
    }

    pub fn order(self) -> usize {
        self.degrees().iter().map(|&d| d as usize).product()
    }

    /// File-name friendly form, e.g. `I2_5`.
    pub fn slug(self) -> String {
        match self {
            CoxeterType::I2(m) => format!("I2_{m}"),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A2 => f.write_str("A2"),
            CoxeterType::A3 => f.write_str("A3"),
            CoxeterType::B2 => f.write_str("B2"),
            CoxeterType::B3 => f.write_str("B3"),
            CoxeterType::G2 => f.write_str("G2"),
            CoxeterType::H3 => f.write_str("H3"),
            CoxeterType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for CoxeterType {
    type Err = Error;

    /// Accepts `A2`, `b3`, `I2(5)`, `I2_5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let unsupported = |reason: &str| Error::Unsupported { label: s.trim().to_string(), reason: reason.into() };
        if let Some(rest) = t.strip_prefix("I2") {
            let m = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix('_'))
                .and_then(|r| r.parse::<u32>().ok())
                .ok_or_else(|| Error::UnknownLabel(s.to_string()))?;
            return match m {
                3..=6 => Ok(CoxeterType::I2(m)),
                0..=2 => Err(unsupported("a dihedral group needs m >= 3")),
                _ => Err(unsupported(&format!(
                    "cos(pi/{m}) lies in no real quadratic field, so the group cannot be realized over Q or Q(sqrt(d))"
                ))),
            };
        }
        match t.as_str() {
            "A2" => Ok(CoxeterType::A2),
            "A3" => Ok(CoxeterType::A3),
            "B2" => Ok(CoxeterType::B2),
            "B3" => Ok(CoxeterType::B3),
            "G2" => Ok(CoxeterType::G2),
            "H3" => Ok(CoxeterType::H3),
            "A1" | "B1" => Err(unsupported("rank 1 has a single hyperplane and no filtration to study")),
            _ => {
                let family = t.chars().next().filter(|c| "ABCDEFH".contains(*c));
                let rank = t.get(1..).and_then(|r| r.parse::<usize>().ok());
                match (family, rank) {
                    (Some(_), Some(r)) if r >= 4 => Err(unsupported("only ranks 2 and 3 are supported")),
                    _ => Err(Error::UnknownLabel(s.to_string())),
                }
            }
        }
    }
}

/// A realized reflection group.
#[derive(Clone, Debug)]
pub struct CoxeterDatum {
    pub kind: CoxeterType,
    pub rank: usize,
    /// `A = [I*(Xi, Xj)]`.
    pub gram: ScalarMatrix,
    /// `A′ = A⁻¹ = [I(∂i, ∂j)]`.
    pub gram_inv: ScalarMatrix,
    /// Coefficient vectors of the simple roots in the `Xi` basis.
    pub simple_roots: Vec<Vec<Scalar>>,
    /// Substitution matrices of the simple reflections.
    pub generators: Vec<ScalarMatrix>,
    /// Monic linear forms, one per reflecting hyperplane, in canonical order.
    pub hyperplanes: Vec<MultiPoly>,
    pub degrees: Vec<u32>,
    /// Radicand of the scalar field, 1 for ℚ.
    pub field: u32,
    group: Vec<ScalarMatrix>,
}

fn int_rows(rows: &[&[i64]]) -> ScalarMatrix {
    rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect()
}

fn golden() -> Scalar {
    Scalar::quadratic(Rational::new(1, 2), Rational::new(1, 2), 5)
}

fn half_sqrt(d: u32) -> Scalar {
    Scalar::quadratic(Rational::zero(), Rational::new(1, 2), d)
}

/// Matrix of `X ↦ s(X)` for the reflection in the root `a`:
/// `M = I − 2 (A a) aᵀ / (aᵀ A a)`.
fn reflection(gram: &ScalarMatrix, a: &[Scalar]) -> ScalarMatrix {
    let aa = smat::mul_vec(gram, a);
    let q = smat::dot(a, &aa);
    let f = &Scalar::int(-2) / &q;
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let base = if i == j { Scalar::one() } else { Scalar::zero() };
                    &base + &(&f * &(&aa[i] * &a[j]))
                })
                .collect()
        })
        .collect()
}

/// Closure of the generators under multiplication.
pub fn generate_group(generators: &[ScalarMatrix], bound: usize) -> Result<Vec<ScalarMatrix>> {
    let n = generators.first().map_or(0, Vec::len);
    let id = smat::identity(n);
    let mut seen: HashSet<ScalarMatrix> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut frontier = 0;
    while frontier < out.len() {
        let g = out[frontier].clone();
        frontier += 1;
        for s in generators {
            let h = smat::mul(&g, s);
            if seen.insert(h.clone()) {
                out.push(h);
                if out.len() > bound {
                    return Err(Error::GroupTooLarge(bound));
                }
            }
        }
    }
    Ok(out)
}

/// Builds the datum for a supported group.
pub fn realize(kind: CoxeterType) -> Result<CoxeterDatum> {
    let e = |n: usize, i: usize| -> Vec<Scalar> {
        (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()
    };
    let ints = |v: &[i64]| -> Vec<Scalar> { v.iter().map(|&x| Scalar::int(x)).collect() };
    let (gram, roots, field): (ScalarMatrix, Vec<Vec<Scalar>>, u32) = match kind {
        CoxeterType::A2 => (int_rows(&[&[2, -1], &[-1, 2]]), vec![e(2, 0), e(2, 1)], 1),
        CoxeterType::A3 => (
            int_rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]),
            vec![e(3, 0), e(3, 1), e(3, 2)],
            1,
        ),
        CoxeterType::B2 | CoxeterType::I2(4) => (smat::identity(2), vec![ints(&[1, -1]), e(2, 1)], 1),
        CoxeterType::B3 => (smat::identity(3), vec![ints(&[1, -1, 0]), ints(&[0, 1, -1]), e(3, 2)], 1),
        CoxeterType::G2 => (int_rows(&[&[2, -3], &[-3, 6]]), vec![e(2, 0), e(2, 1)], 1),
        CoxeterType::I2(3) => (
            smat::identity(2),
            vec![e(2, 0), vec![Scalar::frac(-1, 2), half_sqrt(3)]],
            3,
        ),
        CoxeterType::I2(5) => {
            let phi = golden();
            (vec![vec![Scalar::int(2), -phi.clone()], vec![-phi, Scalar::int(2)]], vec![e(2, 0), e(2, 1)], 5)
        }
        CoxeterType::I2(6) => (
            smat::identity(2),
            vec![e(2, 0), vec![-half_sqrt(3), Scalar::frac(1, 2)]],
            3,
        ),
        CoxeterType::H3 => {
            let phi = golden();
            let half = Scalar::frac(-1, 2);
            let a2 = vec![&half * &phi, half.clone(), &half * &(&phi - &Scalar::one())];
            (smat::identity(3), vec![e(3, 0), a2, e(3, 1)], 5)
        }
        CoxeterType::I2(m) => {
            return Err(Error::Unsupported { label: kind.to_string(), reason: format!("I2({m}) has no realization here") })
        }
    };
    let rank = kind.rank();
    let (_, gram_inv) = smat::det_inverse(&gram);
    let gram_inv = gram_inv.ok_or_else(|| Error::Singular { what: "Gram matrix".into() })?;
    let generators: Vec<ScalarMatrix> = roots.iter().map(|a| reflection(&gram, a)).collect();
    let group = generate_group(&generators, GROUP_BOUND)?;
    if group.len() != kind.order() {
        return Err(Error::GroupOrder { label: kind.to_string(), found: group.len(), expected: kind.order() });
    }
    // hyperplanes: the orbit of the simple roots; g acts on V* by Mᵀ
    let mut forms: HashSet<MultiPoly> = HashSet::new();
    for g in &group {
        let gt = smat::transpose(g);
        for a in &roots {
            let v = smat::mul_vec(&gt, a);
            forms.insert(MultiPoly::linear(&v).monic().1);
        }
    }
    let mut hyperplanes: Vec<MultiPoly> = forms.into_iter().collect();
    hyperplanes.sort_by(|a, b| b.canonical_cmp(a));
    let datum = CoxeterDatum {
        kind,
        rank,
        gram,
        gram_inv,
        simple_roots: roots,
        generators,
        hyperplanes,
        degrees: kind.degrees(),
        field,
        group,
    };
    datum.validate()?;
    Ok(datum)
}

impl CoxeterDatum {
    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    pub fn coxeter_number(&self) -> u32 {
        *self.degrees.last().expect("rank >= 1")
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.degrees.iter().map(|d| d - 1).collect()
    }

    pub fn group(&self) -> &[ScalarMatrix] {
        &self.group
    }

    /// `Q = Π α_H`.
    pub fn defining_polynomial(&self) -> MultiPoly {
        self.hyperplanes
            .iter()
            .fold(MultiPoly::one(self.rank), |acc, a| &acc * a)
    }

    /// Images of `X1 … Xl` under the substitution `X ↦ M X`.
    pub fn substitution(&self, g: &ScalarMatrix) -> Vec<MultiPoly> {
        g.iter().map(|row| MultiPoly::linear(row)).collect()
    }

    /// `p ∘ g`.
    pub fn act(&self, p: &MultiPoly, g: &ScalarMatrix) -> MultiPoly {
        p.compose(&self.substitution(g))
    }

    /// Checks the structural invariants of the realization.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInvariants(format!("{}: {msg}", self.kind)));
        let n = self.rank;
        if smat::transpose(&self.gram) != self.gram {
            return bad("Gram matrix is not symmetric".into());
        }
        for k in 1..=n {
            let minor: ScalarMatrix = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if smat::det(&minor).signum() <= 0 {
                return bad(format!("leading principal minor {k} is not positive"));
            }
        }
        let id = smat::identity(n);
        for g in &self.generators {
            if smat::mul(g, g) != id {
                return bad("a generator is not an involution".into());
            }
            if smat::mul(&smat::mul(g, &self.gram), &smat::transpose(g)) != self.gram {
                return bad("a generator does not preserve the Gram matrix".into());
            }
        }
        let expected: u32 = self.exponents().iter().sum();
        if self.hyperplanes.len() != expected as usize {
            return bad(format!("{} hyperplanes, expected {expected}", self.hyperplanes.len()));
        }
        Ok(())
    }
}

/// `|W|⁻¹ Σ_g p ∘ g`.
pub fn reynolds(datum: &CoxeterDatum, p: &MultiPoly) -> MultiPoly {
    let n = datum.rank;
    let sum = datum
        .group()
        .par_iter()
        .map(|g| datum.act(p, g))
        .reduce(|| MultiPoly::zero(n), |a, b| &a + &b);
    sum.scale(&Scalar::frac(1, datum.group().len() as i64))
}

/// Basic invariants `P1 … Pl` with their Jacobian determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSet {
    pub p: Vec<MultiPoly>,
    /// `Δ = det J(P)`.
    pub delta: MultiPoly,
    /// `Q = Π α_H`.
    pub q: MultiPoly,
    /// The constant with `Δ = c·Q`.
    pub c: Scalar,
}

/// `J(fs)_ij = ∂fj/∂Xi`.
pub fn poly_jacobian(fs: &[MultiPoly], nvars: usize) -> PolyMatrix {
    PolyMatrix::from_fn(nvars, fs.len(), nvars, |i, j| fs[j].partial(i).into())
}

impl InvariantSet {
    /// Validates a candidate family against the datum.
    pub fn new(datum: &CoxeterDatum, p: Vec<MultiPoly>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidInvariants(format!("{}: {msg}", datum.kind)));
        let n = datum.rank;
        if p.len() != n {
            return bad(format!("{} polynomials for rank {n}", p.len()));
        }
        for (i, (pi, &d)) in p.iter().zip(&datum.degrees).enumerate() {
            if pi.nvars() != n || !pi.is_homogeneous_of(d) {
                return bad(format!("P{} is not homogeneous of degree {d}", i + 1));
            }
            for g in &datum.generators {
                if datum.act(pi, g) != *pi {
                    return bad(format!("P{} is not invariant", i + 1));
                }
            }
        }
        let delta = poly_jacobian(&p, n)
            .det()?
            .into_poly()
            .expect("determinant of a polynomial matrix is a polynomial");
        if delta.is_zero() {
            return bad("the Jacobian determinant vanishes".into());
        }
        let q = datum.defining_polynomial();
        let c = match delta.divide_exact(&q)?.and_then(|r| r.as_constant()) {
            Some(c) => c,
            None => return bad(format!("Jacobian determinant {delta} is not a multiple of Q")),
        };
        for g in &datum.generators {
            let sign = smat::det(g);
            if datum.act(&delta, g) != delta.scale(&sign) {
                return bad("the Jacobian determinant is not anti-invariant".into());
            }
        }
        Ok(InvariantSet { p, delta, q, c })
    }

    pub fn jacobian(&self) -> PolyMatrix {
        poly_jacobian(&self.p, self.q.nvars())
    }
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<MultiPoly> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut exps = Vec::new();
    rec(nvars, d, &mut Vec::new(), &mut exps);
    exps.into_iter()
        .map(|e| MultiPoly::term(nvars, coxfilt_algebra::Monomial::from_exponents(&e), Scalar::one()))
        .collect()
}

fn seed_forms(nvars: usize) -> Vec<MultiPoly> {
    const FORMS: [[i64; 3]; 6] = [[1, 1, 1], [1, 2, 3], [1, -1, 2], [3, 1, -2], [1, 3, 9], [2, -3, 5]];
    FORMS
        .iter()
        .map(|f| MultiPoly::linear(&f[..nvars].iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>()))
        .collect()
}

/// Searches seeds (monomials, then powers of fixed linear forms) of each
/// degree. A seed is admissible when its monic Reynolds average raises the
/// rank of the Jacobian; among admissible seeds the one with the fewest terms
/// wins, ties going to the earlier seed.
pub fn basic_invariants(datum: &CoxeterDatum) -> Result<InvariantSet> {
    let n = datum.rank;
    let mut chosen: Vec<MultiPoly> = Vec::new();
    for &d in &datum.degrees {
        let mut seeds = monomials_of_degree(n, d);
        seeds.extend(seed_forms(n).iter().map(|l| l.pow(d)));
        let mut cands: Vec<(usize, usize, MultiPoly)> = seeds
            .par_iter()
            .enumerate()
            .filter_map(|(i, s)| {
                let r = reynolds(datum, s);
                (!r.is_zero()).then(|| (r.len(), i, r.monic().1))
            })
            .collect();
        cands.sort_by_key(|c| (c.0, c.1));
        let mut seen = HashSet::new();
        let pick = cands.into_iter().map(|c| c.2).filter(|c| seen.insert(c.clone())).find(|c| {
            let mut fam = chosen.clone();
            fam.push(c.clone());
            poly_jacobian(&fam, n).rank() == fam.len()
        });
        chosen.push(pick.ok_or(Error::SearchExhausted(d))?);
    }
    InvariantSet::new(datum, chosen)
}

fn cache_path(dir: &Path, kind: CoxeterType) -> PathBuf {
    dir.join(format!("{}.v{CACHE_VERSION}.inv", kind.slug()))
}

/// Text form: `label`, `field` and `degrees` header lines, then `P<i> <poly>`.
pub fn render_invariants(datum: &CoxeterDatum, inv: &InvariantSet) -> String {
    let degrees: Vec<String> = datum.degrees.iter().map(u32::to_string).collect();
    let mut s = format!("label {}\nfield {}\ndegrees {}\n", datum.kind, datum.field, degrees.join(" "));
    for (i, p) in inv.p.iter().enumerate() {
        s.push_str(&format!("P{} {}\n", i + 1, p));
    }
    s
}

/// Parses and validates an invariant file for `datum`.
pub fn parse_invariants(datum: &CoxeterDatum, text: &str, origin: &str) -> Result<InvariantSet> {
    let err = |msg: String| Error::InvariantFile { path: origin.to_string(), msg };
    let mut polys: Vec<Option<MultiPoly>> = vec![None; datum.rank];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let value = value.trim();
        match key {
            "label" => {
                let kind: CoxeterType = value.parse().map_err(|e: Error| err(e.to_string()))?;
                if kind != datum.kind {
                    return Err(err(format!("file is for {kind}, not {}", datum.kind)));
                }
            }
            "field" => {
                if value.parse::<u32>().ok() != Some(datum.field) {
                    return Err(err(format!("scalar field {value} does not match {}", datum.field)));
                }
            }
            "degrees" => {
                let ds: Vec<u32> = value.split_whitespace().filter_map(|x| x.parse().ok()).collect();
                if ds != datum.degrees {
                    return Err(err(format!("degrees {value} do not match {:?}", datum.degrees)));
                }
            }
            _ => {
                let idx = key
                    .strip_prefix('P')
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|&i| (1..=datum.rank).contains(&i))
                    .ok_or_else(|| err(format!("line {}: unexpected key `{key}`", lineno + 1)))?;
                let p = parse_poly(value, datum.rank).map_err(|e| err(format!("line {}: {e}", lineno + 1)))?;
                polys[idx - 1] = Some(p);
            }
        }
    }
    let p: Vec<MultiPoly> = polys
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| err(format!("missing P{}", i + 1))))
        .collect::<Result<_>>()?;
    InvariantSet::new(datum, p)
}

pub fn load_invariants(datum: &CoxeterDatum, path: &Path) -> Result<InvariantSet> {
    let text = fs::read_to_string(path)?;
    parse_invariants(datum, &text, &path.display().to_string())
}

/// Loads the cached family for `datum`, or searches and writes it.
pub fn cached_basic_invariants(datum: &CoxeterDatum, cache_dir: Option<&Path>) -> Result<InvariantSet> {
    let Some(dir) = cache_dir else {
        return basic_invariants(datum);
    };
    let path = cache_path(dir, datum.kind);
    if let Ok(inv) = load_invariants(datum, &path) {
        return Ok(inv);
    }
    let inv = basic_invariants(datum)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, render_invariants(datum, &inv))?;
    fs::rename(&tmp, &path)?;
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> MultiPoly {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn labels() {
        assert_eq!("b2".parse::<CoxeterType>().unwrap(), CoxeterType::B2);
        assert_eq!("I2(5)".parse::<CoxeterType>().unwrap(), CoxeterType::I2(5));
        assert_eq!("I2_6".parse::<CoxeterType>().unwrap(), CoxeterType::I2(6));
        assert_eq!(CoxeterType::I2(5).to_string(), "I2(5)");
        let e = "I2(7)".parse::<CoxeterType>().unwrap_err().to_string();
        assert!(e.contains("quadratic field"), "{e}");
        assert!(matches!("F4".parse::<CoxeterType>(), Err(Error::Unsupported { .. })));
        assert!(matches!("Z9".parse::<CoxeterType>(), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn b2_realization() {
        let d = realize(CoxeterType::B2).unwrap();
        assert_eq!(d.gram, smat::identity(2));
        assert_eq!(d.group().len(), 8);
        let mut forms: Vec<String> = d.hyperplanes.iter().map(|h| h.to_string()).collect();
        forms.sort();
        assert_eq!(forms, ["X1", "X1+X2", "X1-X2", "X2"]);
        assert_eq!(d.coxeter_number(), 4);
    }

    #[test]
    fn a2_realization() {
        let d = realize(CoxeterType::A2).unwrap();
        assert_eq!(d.gram, int_rows(&[&[2, -1], &[-1, 2]]));
        assert_eq!(d.group().len(), 6);
        assert_eq!(d.hyperplanes.len(), 3);
        assert_eq!(d.degrees, [2, 3]);
    }

    #[test]
    fn group_orders_and_hyperplane_counts() {
        for (kind, order, hyperplanes) in [
            (CoxeterType::A3, 24, 6),
            (CoxeterType::B3, 48, 9),
            (CoxeterType::G2, 12, 6),
            (CoxeterType::I2(3), 6, 3),
            (CoxeterType::I2(5), 10, 5),
            (CoxeterType::I2(6), 12, 6),
            (CoxeterType::H3, 120, 15),
        ] {
            let d = realize(kind).unwrap();
            assert_eq!(d.group().len(), order, "{kind}");
            assert_eq!(d.hyperplanes.len(), hyperplanes, "{kind}");
        }
    }

    #[test]
    fn group_permutes_hyperplanes() {
        for kind in [CoxeterType::A3, CoxeterType::G2, CoxeterType::H3] {
            let d = realize(kind).unwrap();
            let set: HashSet<MultiPoly> = d.hyperplanes.iter().cloned().collect();
            for g in d.group() {
                for h in &d.hyperplanes {
                    assert!(set.contains(&d.act(h, g).monic().1), "{kind}");
                }
            }
        }
    }

    #[test]
    fn closure_bound() {
        let d = realize(CoxeterType::B3).unwrap();
        assert!(matches!(generate_group(&d.generators, 10), Err(Error::GroupTooLarge(10))));
    }

    #[test]
    fn reynolds_on_b2() {
        let d = realize(CoxeterType::B2).unwrap();
        assert_eq!(reynolds(&d, &p("X1^2", 2)), p("1/2*X1^2+1/2*X2^2", 2));
        assert!(reynolds(&d, &p("X1", 2)).is_zero());
        let inv = p("X1^2*X2^2", 2);
        assert_eq!(reynolds(&d, &inv), inv);
    }

    #[test]
    fn b2_invariants() {
        let d = realize(CoxeterType::B2).unwrap();
        let inv = basic_invariants(&d).unwrap();
        assert_eq!(inv.p, [p("X1^2+X2^2", 2), p("X1^2*X2^2", 2)]);
        assert_eq!(inv.delta, p("4*X1^3*X2-4*X1*X2^3", 2));
        assert_eq!(inv.c, Scalar::int(4));
    }

    #[test]
    fn invariant_degrees_and_determinants() {
        for kind in [CoxeterType::A2, CoxeterType::A3, CoxeterType::B3, CoxeterType::G2, CoxeterType::I2(5)] {
            let d = realize(kind).unwrap();
            let inv = basic_invariants(&d).unwrap();
            let total: u32 = d.exponents().iter().sum();
            assert_eq!(inv.delta.total_degree(), Some(total), "{kind}");
            assert!(!inv.c.is_zero());
            let sq = &inv.delta * &inv.delta;
            for g in d.group() {
                assert_eq!(d.act(&sq, g), sq, "{kind}");
            }
        }
    }

    #[test]
    fn rejects_dependent_or_wrong_families() {
        let d = realize(CoxeterType::B2).unwrap();
        let dep = InvariantSet::new(&d, vec![p("X1^2+X2^2", 2), p("X1^4+2*X1^2*X2^2+X2^4", 2)]);
        assert!(matches!(dep, Err(Error::InvalidInvariants(_))));
        let notinv = InvariantSet::new(&d, vec![p("X1^2+X2^2", 2), p("X1^4", 2)]);
        assert!(matches!(notinv, Err(Error::InvalidInvariants(_))));
    }

    #[test]
    fn invariant_file_round_trip() {
        let d = realize(CoxeterType::G2).unwrap();
        let inv = basic_invariants(&d).unwrap();
        let text = render_invariants(&d, &inv);
        assert_eq!(parse_invariants(&d, &text, "mem").unwrap(), inv);
        let other = realize(CoxeterType::A2).unwrap();
        assert!(parse_invariants(&other, &text, "mem").is_err());
        let dir = tempfile::tempdir().unwrap();
        let a = cached_basic_invariants(&d, Some(dir.path())).unwrap();
        assert!(cache_path(dir.path(), d.kind).exists());
        let b = cached_basic_invariants(&d, Some(dir.path())).unwrap();
        assert_eq!(a, b);
    }
}
