//! Small exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// The unique solution of `a x = b`, or `None` when the system is
/// inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut m);
    if piv.contains(&n) || piv.len() < n {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}

/// A basis of the right kernel of `a`.
pub fn kernel(a: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (r, &c) in piv.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for k in c..n {
                let v = &m[c][k] * &f;
                m[i][k] -= v;
            }
        }
    }
    d
}

pub fn det_int(a: &[Vec<i64>]) -> BigInt {
    let m: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect();
    det(&m).to_integer()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_solve() {
        let a = qm(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&a), q_int(1));
        let x = solve_unique(&a, &[q_int(3), q_int(2)]).unwrap();
        assert_eq!(x, vec![q_int(1), q_int(1)]);
        assert!(solve_unique(&qm(&[&[1, 1], &[2, 2]]), &[q_int(1), q_int(2)]).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let k = kernel(&qm(&[&[1, 1, 1]]), 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(v.iter().sum::<Q>().is_zero());
        }
    }
}
