//! Dense matrices over the fraction field.
//!
//! Determinants clear denominators row by row and then run Bareiss
//! fraction-free elimination on the polynomial matrix, so every intermediate
//! entry is a polynomial and every division is exact. Inverses use the
//! polynomial adjugate divided by the determinant.

use std::fmt;

use crate::error::AlgebraError;
use crate::poly::MultiPoly;
use crate::ratfunc::{lcm_of_denominators, Factor, RatFunc};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<RatFunc>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, data: vec![RatFunc::zero(nvars); rows * cols] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        Self::from_fn(n, n, nvars, |i, j| {
            if i == j {
                RatFunc::one(nvars)
            } else {
                RatFunc::zero(nvars)
            }
        })
    }

    pub fn from_fn<F>(rows: usize, cols: usize, nvars: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> RatFunc,
    {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert_eq!(v.nvars(), nvars, "variable count mismatch");
                data.push(v);
            }
        }
        PolyMatrix { rows, cols, nvars, data }
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<RatFunc>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        let data: Vec<RatFunc> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| v.nvars() != nvars) {
            return Err(AlgebraError::Shape("variable count mismatch".into()));
        }
        Ok(PolyMatrix { rows: r, cols: c, nvars, data })
    }

    pub fn from_poly_rows(nvars: usize, rows: Vec<Vec<MultiPoly>>) -> Result<Self, AlgebraError> {
        Self::from_rows(
            nvars,
            rows.into_iter().map(|r| r.into_iter().map(RatFunc::from_poly).collect()).collect(),
        )
    }

    pub fn from_scalars(nvars: usize, rows: &[Vec<Scalar>]) -> Result<Self, AlgebraError> {
        Self::from_rows(
            nvars,
            rows.iter()
                .map(|r| r.iter().map(|c| RatFunc::constant(nvars, c.clone())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert_eq!(v.nvars(), self.nvars, "variable count mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<RatFunc> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RatFunc> {
        self.data.iter()
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: FnMut(&RatFunc) -> RatFunc,
    {
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.nvars, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, self.nvars, |i, j| {
            let mut acc = RatFunc::zero(self.nvars);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    fn same_shape(&self, other: &PolyMatrix) -> Result<(), AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::Shape(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<Self, AlgebraError> {
        self.same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, self.nvars, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<Self, AlgebraError> {
        self.same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, self.nvars, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        self.map(|v| v * c)
    }

    pub fn is_polynomial(&self) -> bool {
        self.data.iter().all(RatFunc::is_polynomial)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFunc::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn square(&self) -> Result<usize, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    /// Polynomial rows `L_i · row_i` with `L_i` the row's denominator lcm.
    fn cleared_rows(&self) -> (Vec<Vec<MultiPoly>>, Vec<Vec<Factor>>) {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let lcm = lcm_of_denominators(row);
                (row.iter().map(|v| v.clear_with(&lcm)).collect(), lcm)
            })
            .unzip()
    }

    pub fn det(&self) -> Result<RatFunc, AlgebraError> {
        self.square()?;
        let (rows, lcms) = self.cleared_rows();
        let d = bareiss_det(rows, self.nvars);
        let den: Vec<Factor> = lcms.into_iter().flatten().collect();
        RatFunc::with_factors(d, den)
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        self.inverse_with_hints(&[])
    }

    /// Inverse; `hints` are candidate factors of the determinant used to
    /// keep the new denominators factored.
    pub fn inverse_with_hints(&self, hints: &[MultiPoly]) -> Result<Self, AlgebraError> {
        let n = self.square()?;
        let (rows, lcms) = self.cleared_rows();
        let det_n = bareiss_det(rows.clone(), self.nvars);
        if det_n.is_zero() {
            return Err(AlgebraError::Singular { det: "0".into() });
        }
        // M = diag(1/L) N, so M^{-1} = adj(N) diag(L) / det N
        let mut all_hints: Vec<MultiPoly> = hints.to_vec();
        for l in &lcms {
            all_hints.extend(l.iter().map(|(b, _)| b.clone()));
        }
        let inv_det = RatFunc::from_poly(det_n).inv_with_hints(&all_hints)?;
        let lcm_polys: Vec<MultiPoly> = lcms
            .iter()
            .map(|l| l.iter().fold(MultiPoly::one(self.nvars), |acc, (b, e)| &acc * &b.pow(*e)))
            .collect();
        let mut out = PolyMatrix::zeros(n, n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                // adj(N)_ij = (-1)^{i+j} det(N without row j and column i)
                let minor: Vec<Vec<MultiPoly>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| rows[r][c].clone()).collect())
                    .collect();
                let mut c = bareiss_det(minor, self.nvars);
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                if c.is_zero() {
                    continue;
                }
                let v = (&RatFunc::from_poly(c) * &inv_det).mul_poly(&lcm_polys[j]);
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        let (rows, _) = self.cleared_rows();
        bareiss_rank(rows, self.nvars)
    }
}

fn exact(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    p.divide_exact(q)
        .expect("pivot is nonzero")
        .expect("Bareiss division is exact")
}

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn bareiss_det(mut a: Vec<Vec<MultiPoly>>, nvars: usize) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one(nvars);
    }
    let mut negate = false;
    let mut prev = MultiPoly::one(nvars);
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return MultiPoly::zero(nvars);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if prev.is_one() { t } else { exact(&t, &prev) };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank of a polynomial matrix by Bareiss elimination with full pivoting.
pub fn bareiss_rank(mut a: Vec<Vec<MultiPoly>>, nvars: usize) -> usize {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = MultiPoly::one(nvars);
    for k in 0..m.min(n) {
        let pivot = (k..m).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else {
            return k;
        };
        a.swap(pi, k);
        for row in a.iter_mut() {
            row.swap(pj, k);
        }
        for i in k + 1..m {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = if prev.is_one() { t } else { exact(&t, &prev) };
            }
            a[i][k] = MultiPoly::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    m.min(n)
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
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

    fn m(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            2,
            rows.iter()
                .map(|r| r.iter().map(|s| parse_ratfunc(s, 2).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn jacobian_determinant() {
        let j = m(&[&["2*X1", "2*X1*X2^2"], &["2*X2", "2*X1^2*X2"]]);
        assert_eq!(j.det().unwrap(), parse_ratfunc("4*X1^3*X2-4*X1*X2^3", 2).unwrap());
        assert_eq!(PolyMatrix::identity(3, 2).det().unwrap(), RatFunc::one(2));
        let rep = m(&[&["X1+X2", "X2^2"], &["X1+X2", "X2^2"]]);
        assert!(rep.det().unwrap().is_zero());
        assert!(PolyMatrix::zeros(2, 3, 2).det().is_err());
    }

    #[test]
    fn adjugate_inverse() {
        let a = m(&[&["2*X1", "2*X2"], &["2*X1*X2^2", "2*X1^2*X2"]]);
        let expected = m(&[
            &["2*X1^2*X2/(4*X1^3*X2-4*X1*X2^3)", "-2*X2/(4*X1^3*X2-4*X1*X2^3)"],
            &["-2*X1*X2^2/(4*X1^3*X2-4*X1*X2^3)", "2*X1/(4*X1^3*X2-4*X1*X2^3)"],
        ]);
        assert_eq!(a.inverse().unwrap(), expected);
        let hints = [parse_poly("X1", 2).unwrap(), parse_poly("X2", 2).unwrap(), parse_poly("X1-X2", 2).unwrap(), parse_poly("X1+X2", 2).unwrap()];
        assert_eq!(a.inverse_with_hints(&hints).unwrap(), expected);
        assert_eq!(PolyMatrix::identity(2, 2).inverse().unwrap(), PolyMatrix::identity(2, 2));
        let d = m(&[&["X1", "0"], &["0", "X1"]]);
        assert_eq!(d.inverse().unwrap(), m(&[&["1/X1", "0"], &["0", "1/X1"]]));
        assert!(matches!(
            m(&[&["X1", "X2"], &["2*X1", "2*X2"]]).inverse(),
            Err(AlgebraError::Singular { .. })
        ));
    }

    #[test]
    fn rational_entries() {
        let a = m(&[&["1/X1", "X2/(X1-X2)"], &["1", "1/(X1+X2)"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a).unwrap(), PolyMatrix::identity(2, 2));
        assert_eq!(a.rank(), 2);
        assert_eq!(m(&[&["1/X1", "X2/X1"], &["X1", "X1*X2"]]).rank(), 1);
        assert_eq!(PolyMatrix::zeros(2, 2, 2).rank(), 0);
    }

    fn arb_matrix() -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec(arb_poly(2, 2, 2), 9).prop_map(|v| {
            let rows = v.chunks(3).map(|c| c.to_vec()).collect();
            PolyMatrix::from_poly_rows(2, rows).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn determinant_is_multiplicative(a in arb_matrix(), b in arb_matrix()) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }

        #[test]
        fn inverse_is_two_sided(a in arb_matrix()) {
            prop_assume!(!a.det().unwrap().is_zero());
            let inv = a.inverse().unwrap();
            prop_assert_eq!(inv.mul(&a).unwrap(), PolyMatrix::identity(3, 2));
            prop_assert_eq!(a.mul(&inv).unwrap(), PolyMatrix::identity(3, 2));
            prop_assert_eq!(a.rank(), 3);
        }
    }
}
