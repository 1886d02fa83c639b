//! Dense exact linear algebra over the rationals (Gauss-Jordan elimination).

use num_traits::{One, Zero};

use crate::rational::{Rational, RationalVector};

pub(crate) type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place. Returns the pivot columns.
pub(crate) fn rref(m: &mut Matrix) -> Vec<usize> {
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
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[RationalVector]) -> usize {
    let mut m: Matrix = rows.iter().map(|r| r.coords().to_vec()).collect();
    rref(&mut m).len()
}

/// Basis of the row space of `rows` (rows of the reduced echelon form).
pub(crate) fn row_space_basis(rows: &[RationalVector]) -> Vec<RationalVector> {
    let mut m: Matrix = rows.iter().map(|r| r.coords().to_vec()).collect();
    let k = rref(&mut m).len();
    m.truncate(k);
    m.into_iter().map(RationalVector::new).collect()
}

/// Basis of `{x : row · x = 0 for every row}` in dimension `cols`.
pub(crate) fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m: Matrix = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub(crate) fn determinant(rows: &[RationalVector]) -> Rational {
    let n = rows.len();
    let mut m: Matrix = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        let pivot = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for (x, y) in row[c..n].iter_mut().zip(&pivot[c..n]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Solves `A x = b` for square invertible `A` given by rows; `None` if singular.
pub(crate) fn solve(rows: &[RationalVector], rhs: &[Rational]) -> Option<RationalVector> {
    let n = rows.len();
    let mut m: Matrix = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.coords().to_vec();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(RationalVector::new(m.into_iter().map(|row| row[n].clone()).collect()))
}

/// The dual basis of a square invertible matrix given by rows: vectors `u_i`
/// with `u_i · rows[j] = δ_ij`.
pub(crate) fn dual_basis(rows: &[RationalVector]) -> Option<Vec<RationalVector>> {
    let n = rows.len();
    (0..n)
        .map(|i| {
            let rhs: Vec<Rational> = (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect();
            solve(rows, &rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    #[test]
    fn determinant_of_small_matrices() {
        assert_eq!(determinant(&[v(&[1, 0]), v(&[1, 2])]), int(2));
        assert_eq!(determinant(&[v(&[0, 1]), v(&[1, 0])]), int(-1));
        assert_eq!(determinant(&[v(&[1, 2]), v(&[2, 4])]), int(0));
        assert_eq!(determinant(&[]), int(1));
    }

    #[test]
    fn dual_basis_is_inverse_transpose() {
        let rows = [v(&[0, 1]), v(&[-1, -1])];
        let dual = dual_basis(&rows).unwrap();
        assert_eq!(dual, vec![v(&[-1, 1]), v(&[-1, 0])]);
        for (i, u) in dual.iter().enumerate() {
            for (j, r) in rows.iter().enumerate() {
                assert_eq!(u.dot(r), if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&[vec![int(1), int(1), int(1)]], 3);
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert_eq!(&x[0] + &x[1] + &x[2], int(0));
        }
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 0])]), 2);
    }
}
