//! Candidate types and dualities for a global FPdim.

use crate::ring::TypeVector;

#[derive(Debug, Clone, Copy, Default)]
pub struct TypeOptions {
    /// Every `d_i` divides the global FPdim.
    pub one_frobenius: bool,
    /// Odd rank, odd dimensions, `d_{2j} = d_{2j+1}`.
    pub mnsd: bool,
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All nondecreasing `[1, d_2, …, d_r]` with `Σ d_i² = fpdim`.
pub fn types_for_fpdim(fpdim: u64, rank: usize, opts: TypeOptions) -> Vec<TypeVector> {
    if rank == 0 || fpdim < rank as u64 {
        return vec![];
    }
    if opts.mnsd && (rank.is_multiple_of(2) || fpdim.is_multiple_of(2)) {
        return vec![];
    }
    let top = isqrt(fpdim - 1);
    let candidates: Vec<u64> = (1..=top)
        .filter(|&d| !opts.one_frobenius || fpdim.is_multiple_of(d))
        .filter(|&d| !opts.mnsd || d % 2 == 1)
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![1];
    let (step, slots) = if opts.mnsd { (2, (rank - 1) / 2) } else { (1, rank - 1) };
    rec(fpdim - 1, slots, step, 0, &candidates, &mut cur, &mut out);
    out
}

fn rec(rem: u64, slots: usize, step: u64, from: usize, cands: &[u64], cur: &mut Vec<u64>, out: &mut Vec<TypeVector>) {
    if slots == 0 {
        if rem == 0 {
            out.push(TypeVector { dims: cur.clone() });
        }
        return;
    }
    for (idx, &d) in cands.iter().enumerate().skip(from) {
        let sq = step * d * d;
        if sq * slots as u64 > rem {
            break;
        }
        if slots == 1 && sq != rem {
            continue;
        }
        for _ in 0..step {
            cur.push(d);
        }
        rec(rem - sq, slots - 1, step, idx, cands, cur, out);
        cur.truncate(cur.len() - step as usize);
    }
}

/// Involutions fixing 0 and preserving dimensions, one per conjugacy class under
/// dimension-preserving relabelling. Within each block of equal dimensions the
/// representative pairs the first free indices as `(b, b+1)(b+2, b+3)…` and fixes
/// the rest (the lexicographically least cycle form).
pub fn duality_candidates(ty: &TypeVector) -> Vec<Vec<usize>> {
    duality_candidates_with(ty, false)
}

/// With `mnsd`, only the involutions without nontrivial fixed points.
pub fn duality_candidates_with(ty: &TypeVector, mnsd: bool) -> Vec<Vec<usize>> {
    let blocks = free_blocks(ty);
    let mut out = vec![(0..ty.rank()).collect::<Vec<usize>>()];
    for b in &blocks {
        let m = b.len();
        let counts: Vec<usize> = if mnsd {
            if m % 2 == 1 {
                return vec![];
            }
            vec![m / 2]
        } else {
            (0..=m / 2).collect()
        };
        let mut next = Vec::new();
        for base in &out {
            for &t in &counts {
                next.push(pair_first(base.clone(), b, t));
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Index ranges of equal dimension, with the unit removed.
pub(crate) fn free_blocks(ty: &TypeVector) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, &d) in ty.dims.iter().enumerate().skip(1) {
        match blocks.last_mut() {
            Some(b) if ty.dims[b[0]] == d => b.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    blocks
}

fn pair_first(mut duality: Vec<usize>, block: &[usize], t: usize) -> Vec<usize> {
    for p in 0..t {
        let (a, b) = (block[2 * p], block[2 * p + 1]);
        duality[a] = b;
        duality[b] = a;
    }
    duality
}

/// Canonical representative of the class of `duality` (same per-block pairing count).
pub fn canonical_duality(ty: &TypeVector, duality: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = (0..ty.rank()).collect();
    for b in free_blocks(ty) {
        let t = b.iter().filter(|&&i| duality[i] != i).count() / 2;
        out = pair_first(out, &b, t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: &[u64]) -> TypeVector {
        TypeVector { dims: d.to_vec() }
    }

    #[test]
    fn small_types() {
        assert_eq!(types_for_fpdim(6, 3, TypeOptions::default()), vec![t(&[1, 1, 2])]);
        assert!(types_for_fpdim(4, 3, TypeOptions::default()).is_empty());
        let mnsd = TypeOptions { mnsd: true, ..Default::default() };
        assert!(types_for_fpdim(39, 7, mnsd).contains(&t(&[1, 1, 1, 3, 3, 3, 3])));
        let both = TypeOptions { mnsd: true, one_frobenius: true };
        assert!(types_for_fpdim(57, 21, both).is_empty());
        assert!(types_for_fpdim(105, 21, both).is_empty());
    }

    #[test]
    fn dualities() {
        assert_eq!(duality_candidates(&t(&[1])), vec![vec![0]]);
        assert_eq!(duality_candidates(&t(&[1, 1, 2])), vec![vec![0, 1, 2]]);
        assert_eq!(duality_candidates(&t(&[1, 1, 1])), vec![vec![0, 1, 2], vec![0, 2, 1]]);
        let d = duality_candidates(&t(&[1, 1, 1, 3, 4, 4, 4]));
        assert!(d.contains(&vec![0, 2, 1, 3, 4, 5, 6]));
        assert_eq!(d.len(), 4);
        assert_eq!(canonical_duality(&t(&[1, 1, 1, 1, 1, 1]), &[0, 1, 2, 3, 5, 4]), vec![0, 2, 1, 3, 4, 5]);
    }
}
