//! Exact integer linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Characteristic polynomial `det(xI − A)`, coefficients from the leading 1 down,
/// by Berkowitz's division-free recurrence.
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let big: Vec<Vec<BigInt>> = a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut v = vec![BigInt::one()];
    for r in 0..n {
        // q = [1, -a_rr, -R·C, -R·A·C, …] for the leading r×r block A, row R, column C.
        let mut q = Vec::with_capacity(r + 2);
        q.push(BigInt::one());
        q.push(-big[r][r].clone());
        let mut w: Vec<BigInt> = (0..r).map(|i| big[i][r].clone()).collect();
        for _ in 0..r {
            let rc: BigInt = (0..r).map(|j| &big[r][j] * &w[j]).sum();
            q.push(-rc);
            w = (0..r).map(|i| (0..r).map(|j| &big[i][j] * &w[j]).sum()).collect();
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &q[i - j] * &v[j]).sum())
            .collect();
        v = next;
    }
    v
}

/// Characteristic polynomial over the rationals, same convention as [`charpoly`].
pub fn charpoly_rational(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mut v = vec![BigRational::one()];
    for r in 0..n {
        let mut q = Vec::with_capacity(r + 2);
        q.push(BigRational::one());
        q.push(-a[r][r].clone());
        let mut w: Vec<BigRational> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rc: BigRational = (0..r).map(|j| &a[r][j] * &w[j]).sum();
            q.push(-rc);
            w = (0..r).map(|i| (0..r).map(|j| &a[i][j] * &w[j]).sum()).collect();
        }
        v = (0..r + 2).map(|i| (0..=i.min(r)).map(|j| &q[i - j] * &v[j]).sum()).collect();
    }
    v
}

/// Inverse by Gauss–Jordan; `None` when singular.
pub fn inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Divides by `(x − root)`; `None` when the remainder is nonzero.
pub fn divide_linear(p: &[BigInt], root: &BigInt) -> Option<Vec<BigInt>> {
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    let mut acc = BigInt::zero();
    for c in p {
        acc = &acc * root + c;
        out.push(acc.clone());
    }
    let rem = out.pop()?;
    rem.is_zero().then_some(out)
}

/// Multiplicity of an integer root together with the deflated cofactor.
pub fn root_multiplicity(p: &[BigInt], root: &BigInt) -> (usize, Vec<BigInt>) {
    let mut cur = p.to_vec();
    let mut m = 0;
    while cur.len() > 1 {
        match divide_linear(&cur, root) {
            Some(q) => {
                cur = q;
                m += 1;
            }
            None => break,
        }
    }
    (m, cur)
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    match rows.first() {
        Some(r) => r.len() - nullspace(rows, r.len()).len(),
        None => 0,
    }
}

/// Basis of the rational nullspace of `rows` (as integer vectors, content removed).
pub fn nullspace(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for j in 0..cols {
            m[row][j] = &m[row][j] * &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = &m[row][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.into_iter().map(|x| if g.is_zero() { x } else { x / &g }).collect()
        })
        .collect()
}

pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn is_perfect_square(x: u64) -> Option<u64> {
    let r = (x as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|s| s * s == x)
}

/// Distinct prime divisors by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
