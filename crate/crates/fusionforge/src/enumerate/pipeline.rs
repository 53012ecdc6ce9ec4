//! Egyptian fractions → FPdims → types → dualities → fusion data → spectral filters.

use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::egyptian::{egyptian_fractions, fpdim_candidates, is_co_mnsd, EgyptianOptions, EgyptianSolution};
use crate::enumerate::solver::{fusion_data_search, SearchOptions, DEFAULT_BUDGET};
use crate::enumerate::types::{duality_candidates_with, types_for_fpdim, TypeOptions};
use crate::error::Error;
use crate::ring::{FusionData, TypeVector};
use crate::spectra::{codegree_profile, is_drinfeld};

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub rank: usize,
    pub max_fpdim: Option<u64>,
    pub one_frobenius: bool,
    pub mnsd: bool,
    pub noncommutative: bool,
    pub drinfeld_only: bool,
    /// Node budget per (type, duality) search.
    pub budget: u64,
}

impl ClassifyOptions {
    pub fn new(rank: usize) -> Self {
        ClassifyOptions {
            rank,
            max_fpdim: None,
            one_frobenius: false,
            mnsd: false,
            noncommutative: false,
            drinfeld_only: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub fractions: usize,
    pub fpdims: usize,
    pub types: usize,
    /// Types carrying at least one fusion ring (any duality).
    pub admitting_types: usize,
    pub rings: usize,
    pub drinfeld: usize,
    /// Rings kept after the noncommutative / Drinfeld-only filters.
    pub reported: usize,
    /// (type, duality) searches that hit the node budget.
    pub incomplete: usize,
}

#[derive(Debug, Clone)]
pub struct ClassifiedRing {
    pub ring: FusionData,
    pub codegrees: Option<String>,
    pub drinfeld: bool,
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub counts: StageCounts,
    pub fpdims: Vec<u64>,
    /// Sorted by (FPdim, type, duality, tensor).
    pub rings: Vec<ClassifiedRing>,
    pub incomplete: Vec<(TypeVector, Vec<usize>)>,
    pub notes: Vec<String>,
}

/// Wedderburn shapes `C^a ⊕ ⊕ M_n` of a noncommutative rank-`r` ring, as the
/// list of matrix sizes. A single matrix block needs at least two 1-dimensional
/// summands.
pub fn noncommutative_shapes(rank: usize) -> Vec<Vec<u32>> {
    fn rec(rem: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() && rem >= 1 && !(cur.len() == 1 && rem < 2) {
            out.push(cur.clone());
        }
        for n in (2..=max).rev() {
            let sq = (n * n) as usize;
            if sq < rem {
                cur.push(n);
                rec(rem - sq, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(rank, (rank as f64).sqrt() as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn fractions(opts: &ClassifyOptions, notes: &mut Vec<String>) -> Vec<EgyptianSolution> {
    let cap = opts.max_fpdim.map(|m| m as u128);
    let r = opts.rank;
    let mut out = if opts.noncommutative {
        if r >= 9 {
            notes.push(format!(
                "rank {r}: only fractions with n_V f_V | FPdim are enumerated; exceptional shapes are not covered"
            ));
        }
        let mut all = Vec::new();
        for shape in noncommutative_shapes(r) {
            let ones = r - shape.iter().map(|n| (n * n) as usize).sum::<usize>();
            let length = ones + shape.iter().map(|&n| n as usize).sum::<usize>();
            let eo = EgyptianOptions { divisibility: true, max_denominator: cap, nc_pattern: Some(shape), ..Default::default() };
            all.extend(egyptian_fractions(length, &eo));
        }
        all
    } else {
        let eo = EgyptianOptions { divisibility: true, mnsd: opts.mnsd, max_denominator: cap, ..Default::default() };
        egyptian_fractions(r, &eo)
    };
    out.retain(|s| s.max() >= r as u128);
    out.sort();
    out.dedup();
    out
}

pub fn classify(opts: &ClassifyOptions) -> ClassifyReport {
    let mut notes = Vec::new();
    let fr = fractions(opts, &mut notes);
    let fpdims: Vec<u64> = fpdim_candidates(&fr).into_iter().filter_map(|x| u64::try_from(x).ok()).collect();
    let topts = TypeOptions { one_frobenius: opts.one_frobenius, mnsd: opts.mnsd };
    let types: Vec<TypeVector> = fpdims.iter().flat_map(|&n| types_for_fpdim(n, opts.rank, topts)).collect();
    let tasks: Vec<(usize, Vec<usize>)> = types
        .iter()
        .enumerate()
        .flat_map(|(t, ty)| duality_candidates_with(ty, opts.mnsd).into_iter().map(move |d| (t, d)))
        .collect();
    let sopts = SearchOptions { budget: opts.budget, parallel: false };
    let results: Vec<_> = tasks
        .par_iter()
        .map(|(t, d)| (*t, d.clone(), fusion_data_search(&types[*t], d, sopts)))
        .collect();

    let mut counts = StageCounts { fractions: fr.len(), fpdims: fpdims.len(), types: types.len(), ..Default::default() };
    let mut admitting = vec![false; types.len()];
    let mut incomplete = Vec::new();
    let mut rings = Vec::new();
    for (t, d, res) in results {
        match res {
            Ok(outcome) => {
                for ring in outcome.rings {
                    admitting[t] = true;
                    counts.rings += 1;
                    let profile = codegree_profile(&ring).ok();
                    let mut drinfeld = profile.as_ref().is_some_and(|p| is_drinfeld(p).0);
                    if opts.mnsd {
                        drinfeld &= profile.as_ref().and_then(|p| p.integer_blocks()).is_some_and(|b| {
                            is_co_mnsd(&b.iter().map(|&(_, f)| f as u128).collect::<Vec<_>>())
                        });
                    }
                    counts.drinfeld += drinfeld as usize;
                    if (opts.noncommutative && ring.is_commutative()) || (opts.drinfeld_only && !drinfeld) {
                        continue;
                    }
                    rings.push(ClassifiedRing { codegrees: profile.map(|p| p.notation()), drinfeld, ring });
                }
            }
            Err(Error::Timeout { .. }) => {
                counts.incomplete += 1;
                incomplete.push((types[t].clone(), d));
            }
            Err(e) => notes.push(format!("{:?} {:?}: {e}", types[t].dims, d)),
        }
    }
    counts.admitting_types = admitting.iter().filter(|&&a| a).count();
    counts.reported = rings.len();
    rings.sort_by_key(|a| sort_key(&a.ring));
    ClassifyReport { counts, fpdims, rings, incomplete, notes }
}

/// (FPdim, type, duality, tensor).
pub fn sort_key(ring: &FusionData) -> (u64, Vec<u64>, Vec<usize>, Vec<u32>) {
    let dims = ring.integral_dims().unwrap_or_default();
    (dims.iter().map(|d| d * d).sum(), dims, ring.duality().to_vec(), ring.flat().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert!(noncommutative_shapes(5).is_empty());
        assert_eq!(noncommutative_shapes(6), vec![vec![2]]);
        assert_eq!(noncommutative_shapes(9), vec![vec![2], vec![2, 2]]);
    }
}
