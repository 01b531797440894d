//! Small dense matrices over the scalar field.

use coxfilt_algebra::Scalar;

pub type ScalarMatrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> ScalarMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub fn mul(a: &ScalarMatrix, b: &ScalarMatrix) -> ScalarMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &ScalarMatrix) -> ScalarMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul_vec(a: &ScalarMatrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y)))
        .collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// Determinant and inverse by Gauss-Jordan elimination; `None` if singular.
pub fn det_inverse(a: &ScalarMatrix) -> (Scalar, Option<ScalarMatrix>) {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a.clone();
    let mut inv = identity(n);
    let mut det = Scalar::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return (Scalar::zero(), None);
        };
        if p != k {
            m.swap(p, k);
            inv.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det = &det * &piv;
        let pinv = piv.inv().expect("nonzero pivot");
        for j in 0..n {
            m[k][j] = &m[k][j] * &pinv;
            inv[k][j] = &inv[k][j] * &pinv;
        }
        for r in 0..n {
            if r == k || m[r][k].is_zero() {
                continue;
            }
            let f = m[r][k].clone();
            for j in 0..n {
                let (mk, ik) = (m[k][j].clone(), inv[k][j].clone());
                m[r][j] = &m[r][j] - &(&f * &mk);
                inv[r][j] = &inv[r][j] - &(&f * &ik);
            }
        }
    }
    (det, Some(inv))
}

pub fn det(a: &ScalarMatrix) -> Scalar {
    det_inverse(a).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ScalarMatrix {
        rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect()
    }

    #[test]
    fn inverse_of_cartan_matrix() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let (d, inv) = det_inverse(&a);
        assert_eq!(d, Scalar::int(4));
        assert_eq!(mul(&a, &inv.unwrap()), identity(3));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), Scalar::zero());
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), Scalar::int(-1));
    }
}
