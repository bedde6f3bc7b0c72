use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{lcm_denominators, Rat};

/// Row echelon form computed with Bareiss fraction-free elimination on an
/// integer matrix obtained by clearing each row's denominators.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_rows(m: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = lcm_denominators(row.iter());
            row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
        })
        .collect()
}

fn echelon(m: &[Vec<Rat>], ncols: usize) -> Echelon {
    let mut a = integer_rows(m);
    for row in &mut a {
        row.resize(ncols, BigInt::zero());
    }
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    for row in &mut a {
        let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
    }
    Echelon { rows: a, pivots }
}

fn rref(m: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let e = echelon(m, ncols);
    let mut rows: Vec<Vec<Rat>> = e
        .rows
        .iter()
        .zip(&e.pivots)
        .map(|(row, &p)| {
            let lead = Rat::from_integer(row[p].clone());
            row.iter().map(|x| Rat::from_integer(x.clone()) / &lead).collect()
        })
        .collect();
    for k in (0..rows.len()).rev() {
        let p = e.pivots[k];
        for i in 0..k {
            if rows[i][p].is_zero() {
                continue;
            }
            let f = rows[i][p].clone();
            for j in p..ncols {
                let v = &rows[k][j] * &f;
                rows[i][j] -= v;
            }
        }
    }
    (rows, e.pivots)
}

pub fn rank(m: &[Vec<Rat>], ncols: usize) -> usize {
    echelon(m, ncols).pivots.len()
}

/// Basis of {x : M x = 0}, one vector per free column.
pub fn nullspace(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let (rows, pivots) = rref(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some x with M x = b, if one exists.
pub fn solve(m: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.resize(ncols, Rat::zero());
            r.push(bi.clone());
            r
        })
        .collect();
    let (rows, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn apply(m: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
        m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(apply(&m, &ns[0]).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn rational_entries() {
        let m = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 6)]];
        assert_eq!(rank(&m, 2), 1);
        let x = solve(&m, &[int(1), rat(1, 2)], 2).unwrap();
        assert_eq!(apply(&m, &x), vec![int(1), rat(1, 2)]);
        assert!(solve(&m, &[int(1), int(1)], 2).is_none());
    }

    #[test]
    fn empty_and_zero() {
        assert_eq!(rank(&[], 4), 0);
        assert_eq!(nullspace(&[], 2).len(), 2);
        assert_eq!(nullspace(&mat(&[&[0, 0]]), 2).len(), 2);
    }
}
