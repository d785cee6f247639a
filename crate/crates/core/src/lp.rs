//! Exact simplex over big rationals for `max c.x` subject to `A x <= b`,
//! `x >= 0`, with `b >= 0` so the slack basis is feasible. Bland's rule
//! prevents cycling.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub objective: BigRational,
    pub primal: Vec<BigRational>,
    /// Optimal dual prices, one per constraint row.
    pub dual: Vec<BigRational>,
    pub pivots: usize,
}

pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> Result<LpSolution> {
    let (m, n) = (a.len(), c.len());
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("LP dimensions disagree".into()));
    }
    if b.iter().any(|x| x.is_negative()) {
        return Err(Error::Precondition("LP right-hand side must be nonnegative".into()));
    }
    let width = n + m;
    let zero = BigRational::zero();
    // Row i: [A_i | e_i | b_i]; last row: [-c | 0 | 0].
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..m).map(|j| if i == j { BigRational::from_integer(1.into()) } else { zero.clone() }));
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut z: Vec<BigRational> = c.iter().map(|x| -x).collect();
    z.extend(std::iter::repeat_n(zero.clone(), m + 1));
    let mut basis: Vec<usize> = (n..width).collect();
    let mut pivots = 0;
    while let Some(enter) = (0..width).find(|&j| z[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (r, _) = leave.ok_or_else(|| Error::Precondition("LP is unbounded".into()))?;
        let piv = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for (x, p) in z.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[r] = enter;
        pivots += 1;
    }
    let mut primal = vec![zero.clone(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            primal[j] = t[i][width].clone();
        }
    }
    Ok(LpSolution {
        objective: z[width].clone(),
        primal,
        dual: z[n..width].to_vec(),
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn r(n: i64) -> BigRational {
        big(n, 1)
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let c = [r(3), r(5)];
        let a = vec![vec![r(1), r(0)], vec![r(0), r(2)], vec![r(3), r(2)]];
        let b = [r(4), r(12), r(18)];
        let s = maximize(&c, &a, &b).unwrap();
        assert_eq!(s.objective, r(36));
        assert_eq!(s.primal, vec![r(2), r(6)]);
        // Dual (0, 3/2, 1) has the same value.
        assert_eq!(s.dual, vec![r(0), big(3, 2), r(1)]);
    }

    #[test]
    fn fractional_optimum() {
        // Triangle edge packing: x_ab + x_ac <= 1 etc. -> 3/2.
        let c = [r(1), r(1), r(1)];
        let a = vec![vec![r(1), r(1), r(0)], vec![r(1), r(0), r(1)], vec![r(0), r(1), r(1)]];
        let s = maximize(&c, &a, &[r(1), r(1), r(1)]).unwrap();
        assert_eq!(s.objective, big(3, 2));
    }

    #[test]
    fn unbounded_and_bad_input() {
        assert!(maximize(&[r(1)], &[vec![r(-1)]], &[r(1)]).is_err());
        assert!(maximize(&[r(1)], &[vec![r(1)]], &[r(-1)]).is_err());
        assert!(maximize(&[r(1)], &[vec![r(1), r(2)]], &[r(1)]).is_err());
    }
}
