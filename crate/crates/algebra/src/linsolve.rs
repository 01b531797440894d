//! Exact linear systems over the scalar field.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    Inconsistent,
    Underdetermined,
}

/// Reduced row echelon form built one equation at a time, so tall systems
/// never need to be stored in full.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    ncols: usize,
    // (pivot column, row with pivot coefficient 1, right-hand side)
    rows: Vec<(usize, Vec<Scalar>, Scalar)>,
    inconsistent: bool,
}

impl RowEchelon {
    pub fn new(ncols: usize) -> Self {
        RowEchelon { ncols, rows: Vec::new(), inconsistent: false }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Adds the equation `row · x = rhs`.
    pub fn push(&mut self, mut row: Vec<Scalar>, mut rhs: Scalar) {
        assert_eq!(row.len(), self.ncols, "equation length mismatch");
        if self.inconsistent {
            return;
        }
        for (p, r, b) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let f = row[*p].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            rhs = &rhs - &(&f * b);
        }
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = row[p].inv().expect("pivot is nonzero");
        for x in row.iter_mut() {
            *x = &*x * &inv;
        }
        rhs = &rhs * &inv;
        for (_, r, b) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            *b = &*b - &(&f * &rhs);
        }
        self.rows.push((p, row, rhs));
    }

    pub fn solve(&self) -> Solution {
        if self.inconsistent {
            return Solution::Inconsistent;
        }
        if self.rows.len() < self.ncols {
            return Solution::Underdetermined;
        }
        let mut x = vec![Scalar::zero(); self.ncols];
        for (p, _, b) in &self.rows {
            x[*p] = b.clone();
        }
        Solution::Unique(x)
    }
}

/// Solves `a · x = b` exactly.
pub fn solve_linear_scalar(a: &[Vec<Scalar>], b: &[Scalar]) -> Solution {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let ncols = a.first().map_or(0, Vec::len);
    let mut e = RowEchelon::new(ncols);
    for (row, rhs) in a.iter().zip(b) {
        e.push(row.clone(), rhs.clone());
    }
    e.solve()
}
