//! Exact rational Gaussian elimination on small dense matrices.

use num_traits::{One, Zero};

use crate::Q;

/// Reduced row echelon form; returns the reduced rows and pivot columns.
pub fn rref(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = Q::one() / m[r][c];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..ncols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f];
            }
            v
        })
        .collect()
}

pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if pr != c {
            m.swap(pr, c);
            d = -d;
        }
        d *= m[c][c];
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = m[c][j];
                m[i][j] -= f * v;
            }
        }
    }
    d
}

pub fn dot(a: &[Q], b: &[i64]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, &y)| acc + *x * Q::from_integer(y))
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x)).collect()
}

/// Scales a nonzero rational vector to a primitive integer vector.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    use num_integer::Integer;
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (*x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    ints.iter().map(|&x| Q::from_integer(x / g.max(1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Q> {
        to_q(v)
    }

    #[test]
    fn nullspace_and_rank() {
        let rows = vec![q(&[1, 2, 3]), q(&[2, 4, 6])];
        assert_eq!(rank(&rows, 3), 1);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&v, &[1, 2, 3]).is_zero());
        }
        assert_eq!(nullspace(&[], 2).len(), 2);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(vec![q(&[2, 1]), q(&[1, 3])]), Q::from_integer(5));
        assert_eq!(det(vec![q(&[0, 1]), q(&[1, 0])]), Q::from_integer(-1));
    }
}
