//! Exact rank by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Rank of the matrix whose rows are given. Rows are cleared of denominators
/// first, so elimination runs over the integers.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    row_echelon(rows).len()
}

/// Non-zero rows of a fraction-free echelon form; they span the row space.
pub fn row_echelon(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|x| !x.is_zero()))
        .collect();
    let r = bareiss_rank(&mut m);
    m.truncate(r);
    m
}

/// Rank of an integer matrix, reducing it in place to echelon form (the
/// first `rank` rows).
pub fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c..ncols {
                // Division is exact by Sylvester's identity.
                row[j] = (pivot * &row[j] - &factor * &pivot_row[j]) / &prev;
            }
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_frac};
    use proptest::prelude::*;

    /// Plain Gaussian elimination over the rationals.
    fn rank_by_fractions(rows: &[Vec<Rational>]) -> usize {
        let mut m = rows.to_vec();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            for i in r + 1..m.len() {
                let f = &m[i][c] / &m[r][c];
                for j in c..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[vec![rat(0), rat(0)]]), 0);
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat_frac(1, 2), rat(1), rat_frac(3, 2)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank(&m), 2);
    }

    proptest! {
        #[test]
        fn matches_rational_elimination(entries in proptest::collection::vec((-3i64..=3, 1i64..=3), 20), ncols in 1usize..5) {
            let cells: Vec<Rational> = entries.iter().map(|&(n, d)| rat_frac(n, d)).collect();
            let rows: Vec<Vec<Rational>> = cells.chunks(ncols).filter(|c| c.len() == ncols).map(|c| c.to_vec()).collect();
            prop_assert_eq!(rank(&rows), rank_by_fractions(&rows));
        }
    }
}
