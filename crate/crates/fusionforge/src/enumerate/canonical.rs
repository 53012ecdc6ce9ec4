//! Canonical representatives of fusion rings up to relabelling of the basis.

use itertools::Itertools;

use crate::enumerate::types::{canonical_duality, free_blocks};
use crate::error::Result;
use crate::ring::{FusionData, TypeVector};

/// Relabellings that fix the unit, preserve dimensions and commute with `duality`,
/// as `perm[old] = new`.
pub fn centralizer(ty: &TypeVector, duality: &[usize]) -> Vec<Vec<usize>> {
    let r = ty.rank();
    let mut perms = vec![(0..r).collect::<Vec<usize>>()];
    for block in free_blocks(ty) {
        let fixed: Vec<usize> = block.iter().copied().filter(|&i| duality[i] == i).collect();
        let pairs: Vec<(usize, usize)> =
            block.iter().copied().filter(|&i| duality[i] > i).map(|i| (i, duality[i])).collect();
        let mut local: Vec<Vec<(usize, usize)>> = Vec::new();
        for fp in fixed.iter().copied().permutations(fixed.len()) {
            let base: Vec<(usize, usize)> = fixed.iter().copied().zip(fp).collect();
            for pp in pairs.iter().copied().permutations(pairs.len()) {
                for flips in 0..(1u32 << pairs.len()) {
                    let mut m = base.clone();
                    for (idx, (&(a, b), (c, d))) in pairs.iter().zip(&pp).enumerate() {
                        let (c, d) = if flips >> idx & 1 == 1 { (*d, *c) } else { (*c, *d) };
                        m.push((a, c));
                        m.push((b, d));
                    }
                    local.push(m);
                }
            }
        }
        perms = perms
            .into_iter()
            .flat_map(|p| {
                local.iter().map(move |m| {
                    let mut q = p.clone();
                    for &(from, to) in m {
                        q[from] = to;
                    }
                    q
                })
            })
            .collect();
    }
    perms
}

/// The lexicographically least tensor among relabellings that keep the duality.
pub fn canonical_within_duality(ring: &FusionData, ty: &TypeVector) -> FusionData {
    centralizer(ty, ring.duality())
        .iter()
        .map(|p| ring.permuted(p))
        .min_by(|a, b| a.flat().cmp(b.flat()))
        .unwrap_or_else(|| ring.clone())
}

/// Isomorphism-class key: the duality is moved to its canonical representative,
/// then the tensor is minimised.
pub fn canonical_form(ring: &FusionData) -> Result<FusionData> {
    let ty = TypeVector { dims: ring.integral_dims()? };
    let target = canonical_duality(&ty, ring.duality());
    let perm = conjugator(&ty, ring.duality(), &target);
    Ok(canonical_within_duality(&ring.permuted(&perm), &ty))
}

pub fn isomorphic(a: &FusionData, b: &FusionData) -> Result<bool> {
    Ok(a.rank() == b.rank() && canonical_form(a)? == canonical_form(b)?)
}

/// A dimension-preserving relabelling carrying `from` onto `to` (same class).
fn conjugator(ty: &TypeVector, from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..ty.rank()).collect();
    for block in free_blocks(ty) {
        let split = |d: &[usize]| {
            let fixed: Vec<usize> = block.iter().copied().filter(|&i| d[i] == i).collect();
            let pairs: Vec<(usize, usize)> = block.iter().copied().filter(|&i| d[i] > i).map(|i| (i, d[i])).collect();
            (fixed, pairs)
        };
        let (ff, fp) = split(from);
        let (tf, tp) = split(to);
        for (a, b) in ff.into_iter().zip(tf) {
            perm[a] = b;
        }
        for ((a, b), (c, d)) in fp.into_iter().zip(tp) {
            perm[a] = c;
            perm[b] = d;
        }
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centralizer_sizes() {
        let ty = TypeVector { dims: vec![1, 1, 1, 1, 1, 1] };
        assert_eq!(centralizer(&ty, &[0, 1, 2, 3, 4, 5]).len(), 120);
        // three fixed points and one pair: 3!·2
        assert_eq!(centralizer(&ty, &[0, 1, 2, 3, 5, 4]).len(), 12);
    }

    #[test]
    fn relabelled_ring_has_same_form() {
        let zs3 = FusionData::rn_family(0);
        let moved = zs3.permuted(&[0, 4, 5, 1, 3, 2]);
        assert_ne!(moved, zs3);
        assert_eq!(canonical_form(&moved).unwrap(), canonical_form(&zs3).unwrap());
        assert!(isomorphic(&moved, &zs3).unwrap());
    }
}
