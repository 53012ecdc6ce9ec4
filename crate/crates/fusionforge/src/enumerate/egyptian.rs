//! Egyptian fractions `Σ 1/x_i = 1`, the raw material for global FPdim candidates.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

#[derive(Debug, Clone, Default)]
pub struct EgyptianOptions {
    /// Every denominator divides the largest one.
    pub divisibility: bool,
    /// Denominators form a co-MNSD sequence (odd length; implies divisibility).
    pub mnsd: bool,
    /// Cap on the largest denominator.
    pub max_denominator: Option<u128>,
    /// Block sizes `n_V ≥ 2` of the matrix summands: each contributes `n_V`
    /// equal terms `1/f_V`, taken from the non-maximal denominators.
    pub nc_pattern: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EgyptianSolution {
    /// Ascending; the last entry is the global FPdim candidate.
    pub denominators: Vec<u128>,
}

impl EgyptianSolution {
    pub fn max(&self) -> u128 {
        *self.denominators.last().unwrap()
    }

    pub fn is_exact(&self) -> bool {
        let l = self.denominators.iter().fold(1u128, |a, &x| a.lcm(&x));
        self.denominators.iter().map(|&x| l / x).sum::<u128>() == l
    }

    pub fn has_divisibility(&self) -> bool {
        let m = self.max();
        self.denominators.iter().all(|&x| m.is_multiple_of(x))
    }

    /// Codegree blocks `(n_V, f_V)` realising the pattern, if any: the maximum is
    /// kept as a 1-dimensional block and each `n ≥ 2` takes `n` equal values.
    pub fn pattern_blocks(&self, pattern: &[u32]) -> Option<Vec<(u32, u128)>> {
        let mut counts: BTreeMap<u128, u32> = BTreeMap::new();
        for &x in &self.denominators[..self.denominators.len() - 1] {
            *counts.entry(x).or_default() += 1;
        }
        let mut sizes = pattern.to_vec();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let mut chosen = Vec::new();
        if !assign(&sizes, &mut counts, &mut chosen) {
            return None;
        }
        let mut blocks: Vec<(u32, u128)> = chosen;
        for (x, c) in counts {
            blocks.extend(std::iter::repeat_n((1, x), c as usize));
        }
        blocks.push((1, self.max()));
        blocks.sort_by_key(|&(n, f)| (f, n));
        Some(blocks)
    }
}

fn assign(sizes: &[u32], counts: &mut BTreeMap<u128, u32>, chosen: &mut Vec<(u32, u128)>) -> bool {
    let Some((&n, rest)) = sizes.split_first() else { return true };
    let keys: Vec<u128> = counts.iter().filter(|(_, &c)| c >= n).map(|(&k, _)| k).collect();
    for k in keys {
        *counts.get_mut(&k).unwrap() -= n;
        chosen.push((n, k));
        if assign(rest, counts, chosen) {
            return true;
        }
        chosen.pop();
        *counts.get_mut(&k).unwrap() += n;
    }
    false
}

/// Exhaustive, duplicate-free and sorted.
pub fn egyptian_fractions(length: usize, opts: &EgyptianOptions) -> Vec<EgyptianSolution> {
    if length == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    if opts.mnsd {
        if length % 2 == 1 {
            let mut cur = Vec::new();
            mnsd_rec(1, 1, (length - 1) / 2, 1, &mut cur, opts.max_denominator, &mut out);
        }
    } else {
        let mut cur = Vec::new();
        plain_rec(1, 1, length, 1, &mut cur, opts.max_denominator, &mut out);
    }
    out.retain(|s: &EgyptianSolution| {
        (!opts.divisibility || s.has_divisibility())
            && opts.nc_pattern.as_ref().is_none_or(|p| s.has_divisibility() && s.pattern_blocks(p).is_some())
    });
    out.sort();
    out
}

/// Ascending search on the exact remainder `p/q` with `k` terms left.
fn plain_rec(p: u128, q: u128, k: usize, min: u128, cur: &mut Vec<u128>, cap: Option<u128>, out: &mut Vec<EgyptianSolution>) {
    if k == 1 {
        if p == 1 && q >= min && cap.is_none_or(|c| q <= c) {
            let mut d = cur.clone();
            d.push(q);
            out.push(EgyptianSolution { denominators: d });
        }
        return;
    }
    let lo = min.max(q / p + 1);
    let mut hi = (k as u128 * q) / p;
    if let Some(c) = cap {
        hi = hi.min(c);
    }
    for x in lo..=hi {
        let (np, nq) = sub(p, q, x);
        cur.push(x);
        plain_rec(np, nq, k - 1, x, cur, cap, out);
        cur.pop();
    }
}

fn sub(p: u128, q: u128, x: u128) -> (u128, u128) {
    let np = p * x - q;
    let nq = q * x;
    let g = np.gcd(&nq);
    (np / g, nq / g)
}

/// `Σ_j 2/x_j + 1/N = 1` with `N ≥ x_j`, `x_j | N` and `N/x_j` odd.
fn mnsd_rec(p: u128, q: u128, pairs: usize, min: u128, cur: &mut Vec<u128>, cap: Option<u128>, out: &mut Vec<EgyptianSolution>) {
    if pairs == 0 {
        let n = q;
        if p == 1 && n >= min && cap.is_none_or(|c| n <= c) && cur.iter().all(|&x| n.is_multiple_of(x) && (n / x) % 2 == 1) {
            let mut d: Vec<u128> = cur.iter().flat_map(|&x| [x, x]).collect();
            d.push(n);
            out.push(EgyptianSolution { denominators: d });
        }
        return;
    }
    let lo = min.max(2 * q / p + 1);
    let mut hi = ((2 * pairs as u128 + 1) * q) / p;
    if let Some(c) = cap {
        hi = hi.min(c);
    }
    for x in lo..=hi {
        if 2 * q >= p * x {
            continue;
        }
        let np = p * x - 2 * q;
        let nq = q * x;
        let g = np.gcd(&nq);
        cur.push(x);
        mnsd_rec(np / g, nq / g, pairs - 1, x, cur, cap, out);
        cur.pop();
    }
}

/// Distinct largest denominators, ascending.
pub fn fpdim_candidates(solutions: &[EgyptianSolution]) -> Vec<u128> {
    let mut v: Vec<u128> = solutions.iter().map(|s| s.max()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `1 = m_1 ≤ m_2 = m_3 ≤ m_4 = m_5 ≤ …`, odd length, odd entries.
pub fn is_mnsd(seq: &[u128]) -> bool {
    let mut m = seq.to_vec();
    m.sort_unstable();
    m.len() % 2 == 1 && m[0] == 1 && m.iter().all(|x| x % 2 == 1) && m[1..].chunks(2).all(|c| c[0] == c[1])
}

/// Every entry divides the largest `n_1`, and `(n_1/n_i)` is MNSD.
pub fn is_co_mnsd(seq: &[u128]) -> bool {
    let Some(&top) = seq.iter().max() else { return false };
    seq.iter().all(|&x| x > 0 && top % x == 0) && is_mnsd(&seq.iter().map(|&x| top / x).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn denoms(v: &[EgyptianSolution]) -> Vec<Vec<u128>> {
        v.iter().map(|s| s.denominators.clone()).collect()
    }

    #[test]
    fn length_three_with_divisibility() {
        let v = egyptian_fractions(3, &EgyptianOptions { divisibility: true, ..Default::default() });
        assert_eq!(denoms(&v), vec![vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]);
    }

    #[test]
    fn rank_six_noncommutative_pattern() {
        let opts = EgyptianOptions { divisibility: true, nc_pattern: Some(vec![2]), ..Default::default() };
        let v: Vec<_> = egyptian_fractions(4, &opts).into_iter().filter(|s| s.max() >= 6).collect();
        assert_eq!(denoms(&v), vec![vec![2, 5, 5, 10], vec![2, 6, 6, 6], vec![3, 3, 4, 12], vec![3, 3, 6, 6]]);
        assert_eq!(v[3].pattern_blocks(&[2]), Some(vec![(2, 3), (1, 6), (1, 6)]));
    }

    #[test]
    fn mnsd_predicates() {
        assert!(is_mnsd(&[1]));
        assert!(!is_mnsd(&[1, 3, 3, 5]));
        assert!(is_co_mnsd(&[3, 3, 13, 13, 13, 13, 39]));
        assert!(!is_co_mnsd(&[2, 3, 6]));
    }
}
