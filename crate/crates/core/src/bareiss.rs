//! Fraction-free elimination over exact integers.
//!
//! Every division performed here is exact (Sylvester's identity), so the
//! machine-integer instantiation only fails on overflow, never on rounding.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) trait ExactInt: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn negate(&self) -> Option<Self>;
    fn add(&self, rhs: &Self) -> Option<Self>;
    fn sub(&self, rhs: &Self) -> Option<Self>;
    /// `(a*b - c*d) / e`, where the division is known to be exact.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
}

macro_rules! machine_exact_int {
    ($t:ty) => {
        impl ExactInt for $t {
            fn zero() -> Self {
                0
            }
            fn one() -> Self {
                1
            }
            fn is_zero(&self) -> bool {
                *self == 0
            }
            fn negate(&self) -> Option<Self> {
                self.checked_neg()
            }
            fn add(&self, rhs: &Self) -> Option<Self> {
                self.checked_add(*rhs)
            }
            fn sub(&self, rhs: &Self) -> Option<Self> {
                self.checked_sub(*rhs)
            }
            fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
                let lhs = a.checked_mul(*b)?;
                let rhs = c.checked_mul(*d)?;
                let num = lhs.checked_sub(rhs)?;
                debug_assert_eq!(num % e, 0, "inexact Bareiss division");
                Some(num / e)
            }
        }
    };
}

machine_exact_int!(i64);
machine_exact_int!(i128);

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn negate(&self) -> Option<Self> {
        Some(-self)
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        Some((a * b - c * d) / e)
    }
}

/// Determinant of a square matrix by Bareiss elimination with row pivoting.
/// Returns `None` only if the integer type overflows.
pub(crate) fn determinant<T: ExactInt>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Some(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = T::cross_div(&m[k][k], &m[i][j], &m[i][k], &m[k][j], &prev)?;
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.negate()
    } else {
        Some(det)
    }
}

/// Fraction-free Gauss-Jordan on `[A | I]`. For a matrix whose leading
/// principal minors are all non-zero (any positive definite matrix, e.g. a
/// grounded Laplacian of a connected graph) this ends with `[det·I | adj A]`.
///
/// Returns `(det, adj)` with `adj` row-major, or `None` on overflow or when a
/// zero pivot shows up.
pub(crate) fn adjugate<T: ExactInt>(a: &[Vec<T>]) -> Option<(T, Vec<Vec<T>>)> {
    let n = a.len();
    if n == 0 {
        return Some((T::one(), Vec::new()));
    }
    let width = 2 * n;
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            return None;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..width {
                if j == k {
                    continue;
                }
                m[i][j] = T::cross_div(&m[k][k], &m[i][j], &m[i][k], &m[k][j], &prev)?;
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    // Every diagonal entry has telescoped to the last pivot, which is det A.
    let det = prev;
    let adj = m.into_iter().map(|r| r[n..].to_vec()).collect();
    Some((det, adj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Cofactor (Laplace) expansion along the first row.
    fn cofactor_det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * cofactor_det(&minor)
            })
            .sum()
    }

    fn cofactor_adj(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let n = m.len();
        let mut adj = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i128>> = m
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != j)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != i)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[i][j] = sign * cofactor_det(&minor);
            }
        }
        adj
    }

    fn to_big(m: &[Vec<i128>]) -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn singular_and_pivoting() {
        assert_eq!(determinant(vec![vec![0i128, 1], vec![1, 0]]), Some(-1));
        assert_eq!(determinant(vec![vec![1i128, 2], vec![2, 4]]), Some(0));
        assert_eq!(determinant::<i128>(vec![]), Some(1));
    }

    #[test]
    fn overflow_is_reported() {
        let big = i128::MAX / 2;
        assert_eq!(determinant(vec![vec![big, big], vec![-big, big]]), None);
    }

    fn spd_matrix() -> impl Strategy<Value = Vec<Vec<i128>>> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec(-4i128..5, n * n).prop_map(move |v| {
                // B^T B + I is positive definite.
                let b: Vec<Vec<i128>> = v.chunks(n).map(|c| c.to_vec()).collect();
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                (0..n).map(|k| b[k][i] * b[k][j]).sum::<i128>() + (i == j) as i128
                            })
                            .collect()
                    })
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor(v in proptest::collection::vec(-6i128..7, 25), n in 1usize..6) {
            let m: Vec<Vec<i128>> = (0..n).map(|i| v[i * 5..i * 5 + n].to_vec()).collect();
            let expect = cofactor_det(&m);
            prop_assert_eq!(determinant(m.clone()), Some(expect));
            prop_assert_eq!(determinant(to_big(&m)), Some(BigInt::from(expect)));
        }

        #[test]
        fn adjugate_matches_cofactor(m in spd_matrix()) {
            let (det, adj) = adjugate(&m).unwrap();
            prop_assert_eq!(det, cofactor_det(&m));
            prop_assert_eq!(&adj, &cofactor_adj(&m));
            let (bdet, badj) = adjugate(&to_big(&m)).unwrap();
            prop_assert_eq!(bdet, BigInt::from(det));
            prop_assert_eq!(badj, to_big(&adj));
        }
    }
}
