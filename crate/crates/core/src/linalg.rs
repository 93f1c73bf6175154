//! Gaussian elimination over `Q(ζ_n)` and over `Q`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::Cyclotomic;
use crate::error::{FbrError, Result};

/// Row-reduces `m` in place and returns `(rank, determinant factor)`, where
/// the factor is the product of the pivots times the sign of the row swaps.
fn eliminate(m: &mut [Vec<Cyclotomic>]) -> Result<(usize, Cyclotomic)> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let level = m.first().and_then(|r| r.first()).map_or(1, |c| c.level());
    let mut det = Cyclotomic::one(level);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            det = det.neg();
        }
        let pivot = m[rank][col].clone();
        det = det.mul(&pivot);
        let inv = pivot
            .inverse()
            .ok_or_else(|| FbrError::invariant("nonzero pivot has no inverse"))?;
        let pivot_row: Vec<Cyclotomic> = m[rank].iter().map(|x| x.mul(&inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    Ok((rank, det))
}

/// Rank over `Q(ζ_n)`.
pub fn rank(rows: &[Vec<Cyclotomic>]) -> Result<usize> {
    let mut m = rows.to_vec();
    Ok(eliminate(&mut m)?.0)
}

/// Determinant of a square matrix over `Q(ζ_n)`.
pub fn determinant(rows: &[Vec<Cyclotomic>]) -> Result<Cyclotomic> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(FbrError::input("determinant of a non-square matrix"));
    }
    let level = rows.first().and_then(|r| r.first()).map_or(1, |c| c.level());
    let mut m = rows.to_vec();
    let (rank, det) = eliminate(&mut m)?;
    Ok(if rank < n { Cyclotomic::zero(level) } else { det })
}

/// Reduced row echelon form over `Q`, without zero rows.
pub fn rational_rref(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let nrows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let inv = BigRational::one() / &m[rank][col];
        for x in m[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &f * y;
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: u64, v: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n, v)
    }

    #[test]
    fn small_determinants() {
        let m = vec![
            vec![int(2, 2), int(2, 1), int(2, 1)],
            vec![int(2, 0), int(2, 1), int(2, 1)],
            vec![int(2, 0), int(2, 1), int(2, -1)],
        ];
        assert_eq!(determinant(&m).unwrap(), int(2, -4));
        assert_eq!(rank(&m).unwrap(), 3);
        let z = Cyclotomic::zeta_pow(4, 1);
        // [[1, i], [i, -1]] is singular
        let s = vec![vec![int(4, 1), z.clone()], vec![z.clone(), int(4, -1)]];
        assert!(determinant(&s).unwrap().is_zero());
        assert_eq!(rank(&s).unwrap(), 1);
        let t = vec![vec![int(4, 1), z.clone()], vec![z.clone(), int(4, 1)]];
        assert_eq!(determinant(&t).unwrap(), int(4, 2));
    }

    #[test]
    fn rref_over_q() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let r = rational_rref(&[vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(1)]]);
        assert_eq!(r, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }
}
