//! Irreducible characters over a prime field `F_p` with `p ≡ 1 (mod exp G)`.
//!
//! Non-abelian groups go through the class-algebra eigenvector method: the central
//! characters `ω(C_j) = |C_j| χ(g_j) / χ(1)` are the common eigenvectors of the class
//! multiplication matrices. Abelian groups are built directly as homomorphisms into the
//! `exp(G)`-th roots of unity.

use crate::error::{Error, Result};
use crate::grouptheory::group::{Group, Subgroup};

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Smallest prime `p ≡ 1 (mod exponent)` with `p > 2√order`, so that degrees are recovered
/// uniquely from their squares.
pub fn field_prime(exponent: u64, order: u64) -> u64 {
    let mut p = exponent + 1;
    while !(is_prime(p) && p * p > 4 * order) {
        p += exponent;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let factors = crate::linalg::prime_factors((p - 1) as u128);
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q as u64, p) != 1)).unwrap_or(1)
}

/// Character table of a subgroup `K`, values in `F_p`.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub p: u64,
    /// Conjugacy classes of `K`; the identity class first.
    pub classes: Vec<Vec<u16>>,
    /// `class_of[x]` for `x ∈ K`, `usize::MAX` outside.
    pub class_of: Vec<usize>,
    /// `values[χ][class]`; the trivial character first, then by degree.
    pub values: Vec<Vec<u64>>,
    pub degrees: Vec<u64>,
}

impl CharacterTable {
    pub fn value(&self, chi: usize, x: usize) -> u64 {
        self.values[chi][self.class_of[x]]
    }

    /// The character whose class values equal `v`, if exactly one does.
    pub fn find(&self, v: &[u64]) -> Option<usize> {
        let mut hits = self.values.iter().enumerate().filter(|(_, row)| row.as_slice() == v).map(|(i, _)| i);
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }
}

pub fn character_table(g: &Group, k: &Subgroup, p: u64) -> Result<CharacterTable> {
    let classes = g.classes_of(k);
    let mut class_of = vec![usize::MAX; g.order()];
    for (c, class) in classes.iter().enumerate() {
        for &x in class {
            class_of[x as usize] = c;
        }
    }
    let values = if classes.len() == k.order() {
        abelian_characters(g, k, p, &class_of)
    } else {
        dixon(g, k, p, &classes, &class_of)?
    };
    let mut rows: Vec<(u64, Vec<u64>)> = values.into_iter().map(|v| (v[0], v)).collect();
    rows.sort();
    let degrees: Vec<u64> = rows.iter().map(|r| r.0).collect();
    let values: Vec<Vec<u64>> = rows.into_iter().map(|r| r.1).collect();

    let sum: u64 = degrees.iter().map(|d| d * d).sum();
    if sum != k.order() as u64 || degrees.len() != classes.len() {
        return Err(Error::CharacterMatchFailed(format!("degrees {degrees:?} do not fit a group of order {}", k.order())));
    }
    Ok(CharacterTable { p, classes, class_of, values, degrees })
}

/// Characters of an abelian `K`, extended one cyclic step at a time as exponent maps into
/// `Z/e`, then evaluated at a primitive `e`-th root of unity.
fn abelian_characters(g: &Group, k: &Subgroup, p: u64, class_of: &[usize]) -> Vec<Vec<u64>> {
    let e = k.elements.iter().fold(1u64, |acc, &x| num_integer::lcm(acc, g.element_order(x as usize) as u64));
    let zeta = pow_mod(primitive_root(p), (p - 1) / e, p);
    let n = g.order();
    let mut inside = vec![false; n];
    inside[0] = true;
    let mut members = vec![0usize];
    // chars[c][x] exponent for x in `members`, indexed by group element.
    let mut chars: Vec<Vec<u64>> = vec![vec![0; n]];
    for &x in &k.elements {
        let x = x as usize;
        if inside[x] {
            continue;
        }
        let mut m = 1;
        let mut xm = x;
        while !inside[xm] {
            xm = g.mul(xm, x);
            m += 1;
        }
        let old = members.clone();
        let mut powers = vec![0usize];
        for i in 1..m {
            powers.push(g.mul(powers[i - 1], x));
        }
        for &xi in &powers[1..] {
            for &a in &old {
                let y = g.mul(xi, a);
                inside[y] = true;
                members.push(y);
            }
        }
        let mut next = Vec::with_capacity(chars.len() * m);
        for chi in &chars {
            let t0 = chi[xm] / m as u64;
            for s in 0..m as u64 {
                let t = (t0 + s * e / m as u64) % e;
                let mut ext = chi.clone();
                for (i, &xi) in powers.iter().enumerate().skip(1) {
                    for &a in &old {
                        ext[g.mul(xi, a)] = (i as u64 * t + chi[a]) % e;
                    }
                }
                next.push(ext);
            }
        }
        chars = next;
    }
    let ncl = k.order();
    chars
        .into_iter()
        .map(|chi| {
            let mut row = vec![0u64; ncl];
            for &x in &k.elements {
                row[class_of[x as usize]] = pow_mod(zeta, chi[x as usize], p);
            }
            row
        })
        .collect()
}

fn dixon(g: &Group, k: &Subgroup, p: u64, classes: &[Vec<u16>], class_of: &[usize]) -> Result<Vec<Vec<u64>>> {
    let kk = classes.len();
    // m[j][s][r] = #{x ∈ C_j : x⁻¹ z_r ∈ C_s}; then M_j ω = ω_j ω for each central character.
    let mut m = vec![vec![vec![0u64; kk]; kk]; kk];
    for r in 0..kk {
        let z = classes[r][0] as usize;
        for &x in &k.elements {
            let x = x as usize;
            let s = class_of[g.mul(g.inv(x), z)];
            m[class_of[x]][s][r] += 1;
        }
    }
    let identity: Vec<Vec<u64>> = (0..kk).map(|i| (0..kk).map(|j| (i == j) as u64).collect()).collect();
    let mut spaces = vec![identity];
    for mj in m.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for w in spaces {
            if w.len() == 1 {
                next.push(w);
                continue;
            }
            next.extend(split(&w, mj, p)?);
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::CharacterMatchFailed("class matrices do not separate the characters".into()));
    }
    let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
    let inverse_class: Vec<usize> = classes.iter().map(|c| class_of[g.inv(c[0] as usize)]).collect();
    let order = k.order() as u64;
    let mut out = Vec::new();
    for s in spaces {
        let v = &s[0];
        if v[0] == 0 {
            return Err(Error::CharacterMatchFailed("central character vanishes at the identity".into()));
        }
        let scale = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|x| x * scale % p).collect();
        let denom = (0..kk).fold(0u64, |acc, j| (acc + w[j] * w[inverse_class[j]] % p * inv_mod(sizes[j] % p, p)) % p);
        if denom == 0 {
            return Err(Error::CharacterMatchFailed("degenerate central character".into()));
        }
        let d2 = order % p * inv_mod(denom, p) % p;
        let d = (1..).take_while(|d| d * d <= order).find(|d| d * d % p == d2).ok_or_else(|| {
            Error::CharacterMatchFailed(format!("no degree squares to {d2} mod {p}"))
        })?;
        out.push((0..kk).map(|j| w[j] * d % p * inv_mod(sizes[j] % p, p) % p).collect());
    }
    Ok(out)
}

/// Splits the invariant subspace spanned by the reduced rows `w` into eigenspaces of `a`.
fn split(w: &[Vec<u64>], a: &[Vec<u64>], p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let d = w.len();
    let pivots: Vec<usize> = w.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    let apply = |v: &[u64]| -> Vec<u64> {
        a.iter().map(|row| row.iter().zip(v).fold(0u64, |acc, (x, y)| (acc + x * y) % p)).collect()
    };
    // restricted[c][b]: coordinate c of a·w_b.
    let images: Vec<Vec<u64>> = w.iter().map(|row| apply(row)).collect();
    let restricted: Vec<Vec<u64>> = (0..d).map(|c| (0..d).map(|b| images[b][pivots[c]]).collect()).collect();
    let poly = charpoly_mod(&restricted, p);
    let roots: Vec<u64> = (0..p).filter(|&x| poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0).collect();
    if roots.len() <= 1 {
        return Ok(vec![w.to_vec()]);
    }
    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in roots {
        let shifted: Vec<Vec<u64>> = (0..d)
            .map(|c| (0..d).map(|b| (restricted[c][b] + if b == c { p - lambda } else { 0 }) % p).collect())
            .collect();
        let kernel = nullspace_mod(&shifted, p);
        total += kernel.len();
        let vectors: Vec<Vec<u64>> = kernel
            .iter()
            .map(|coords| {
                let mut v = vec![0u64; w[0].len()];
                for (c, &x) in coords.iter().enumerate() {
                    for (vi, wi) in v.iter_mut().zip(&w[c]) {
                        *vi = (*vi + x * wi) % p;
                    }
                }
                v
            })
            .collect();
        parts.push(rref_mod(vectors, p));
    }
    if total != d {
        return Err(Error::CharacterMatchFailed("class matrix is not diagonalizable mod p".into()));
    }
    Ok(parts)
}

fn rref_mod(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let s = inv_mod(rows[r][c], p);
        rows[r].iter_mut().for_each(|x| *x = *x * s % p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p - f * rows[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn nullspace_mod(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let rows = rref_mod(a.to_vec(), p);
    let pivots: Vec<usize> = rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; n];
            v[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = (p - row[free]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI − a)` mod `p`, coefficients from the constant term up,
/// via reduction to Hessenberg form.
fn charpoly_mod(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&i| h[i][col] != 0) else { continue };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = inv_mod(h[col + 1][col], p);
        for i in col + 2..n {
            let f = h[i][col] * inv % p;
            if f == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + p - f * h[col + 1][j] % p) % p;
            }
            for row in h.iter_mut() {
                row[col + 1] = (row[col + 1] + f * row[i]) % p;
            }
        }
    }
    // polys[m] = charpoly of the leading m×m block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + (p - h[m][m]) * c) % p;
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = prod * h[i + 1][i] % p;
            let coef = h[i][m] * prod % p;
            for (t, &c) in polys[i].iter().enumerate() {
                next[t] = (next[t] + (p - coef) * c) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Character degrees of `k`, ascending.
pub fn character_degrees(g: &Group, k: &Subgroup) -> Result<Vec<u64>> {
    let e = k.elements.iter().fold(1u64, |acc, &x| num_integer::lcm(acc, g.element_order(x as usize) as u64));
    let table = character_table(g, k, field_prime(e, k.order() as u64))?;
    let linear = table.degrees.iter().filter(|&&d| d == 1).count();
    let abelianization = k.order() / g.derived_subgroup(k).order();
    if linear != abelianization {
        return Err(Error::CharacterMatchFailed(format!("{linear} linear characters but [K:K'] = {abelianization}")));
    }
    Ok(table.degrees)
}
