//! Dense exact linear algebra over ℚ.

use num_traits::{One, Zero};

use crate::Rational;

/// Row-reduces `m` in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let sub = &factor * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some solution of `a x = b`, if one exists.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn kernel(a: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve(&a, &[q(2), q(0)]), Some(vec![q(1), q(1)]));
        let b = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(solve(&b, &[q(1), q(3)]), None);
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(m in prop::collection::vec(prop::collection::vec(-5i64..5, 4), 0..4)) {
            let a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
            let ker = kernel(&a, 4);
            let mut r = a.clone();
            let rank = rref(&mut r).len();
            prop_assert_eq!(ker.len() + rank, 4);
            for v in ker {
                for row in &a {
                    let dot: Rational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
