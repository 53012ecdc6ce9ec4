//! Candidate induction matrices of integral Drinfeld rings.
//!
//! A categorification `C` of the ring embeds its representation-theoretic data into the
//! Drinfeld center `Z(C)`; the forgetful functor `Z(C) -> C` gives a nonnegative integer
//! matrix `F` (rows indexed by the simples of the center, columns by the basis of the ring)
//! subject to a Gram identity `FᵀF = G`, divisibility of the center dimensions and the
//! pinned rows coming from the irreducible representations of the ring. No such matrix
//! means no categorification.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::FusionData;
use crate::spectra::{codegree_profile, is_drinfeld};

#[derive(Debug, Clone)]
pub struct InductionProblem {
    pub ring: FusionData,
    pub dims: Vec<u64>,
    /// `(n, f)` per irreducible representation: the unit (FPdim) block first, the rest by
    /// codegree descending.
    pub blocks: Vec<(u32, u64)>,
    pub global: u64,
    gram: Vec<Vec<i64>>,
}

impl InductionProblem {
    pub fn new(ring: &FusionData) -> Result<Self> {
        let dims = ring.integral_dims()?;
        let profile = codegree_profile(ring)?;
        let mut blocks = profile.integer_blocks().ok_or(Error::NonIntegralInput)?;
        let (drinfeld, why) = is_drinfeld(&profile);
        if !drinfeld {
            return Err(Error::InvalidAction(format!("not a Drinfeld ring: {why}")));
        }
        let global: u64 = dims.iter().map(|d| d * d).sum();
        let unit = blocks
            .iter()
            .position(|&(n, f)| n == 1 && f == global)
            .ok_or_else(|| Error::InvalidAction("no block of codegree FPdim".into()))?;
        let unit = blocks.remove(unit);
        blocks.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        blocks.insert(0, unit);
        let gram = gram_target(ring);
        Ok(InductionProblem { ring: ring.clone(), dims, blocks, global, gram })
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    /// Number of irreducible representations (`s`).
    pub fn lower_rows(&self) -> usize {
        self.blocks.len()
    }

    /// `G[j][k]`: coefficient of `b_k` in `Σ_t b_t b_j b_t*`.
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }
}

fn gram_target(ring: &FusionData) -> Vec<Vec<i64>> {
    let r = ring.rank();
    let mut g = vec![vec![0i64; r]; r];
    for j in 0..r {
        for t in 0..r {
            let ts = ring.dual(t);
            for u in 0..r {
                let a = ring.n(t, j, u) as i64;
                if a == 0 {
                    continue;
                }
                for k in 0..r {
                    g[j][k] += a * ring.n(u, ts, k) as i64;
                }
            }
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InductionSolution {
    /// `n × r`, rows sorted by center dimension ascending then lexicographically descending.
    pub matrix: Vec<Vec<u32>>,
    pub center_type: Vec<u64>,
}

impl InductionSolution {
    fn from_rows(mut rows: Vec<Vec<u32>>, dims: &[u64]) -> Self {
        let weight = |v: &Vec<u32>| -> u64 { v.iter().zip(dims).map(|(&x, &d)| x as u64 * d).sum() };
        rows.sort_by(|a, b| weight(a).cmp(&weight(b)).then(b.cmp(a)));
        let center_type = rows.iter().map(weight).collect();
        InductionSolution { matrix: rows, center_type }
    }

    pub fn center_rank(&self) -> usize {
        self.matrix.len()
    }

    /// Two simples of the center with the same image under the forgetful functor.
    pub fn has_repeated_rows(&self) -> bool {
        self.matrix.windows(2).any(|w| w[0] == w[1])
    }

    /// The induction matrix `Fᵀ` (one line per basis element of the ring) followed by the
    /// center type.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let r = self.matrix.first().map_or(0, |row| row.len());
        for j in 0..r {
            let line: Vec<String> = self.matrix.iter().map(|row| row[j].to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        let ty: Vec<String> = self.center_type.iter().map(|m| m.to_string()).collect();
        let _ = writeln!(s, "[{}]", ty.join(","));
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InductionOptions {
    pub budget: u64,
    pub parallel: bool,
}

impl Default for InductionOptions {
    fn default() -> Self {
        InductionOptions { budget: crate::enumerate::DEFAULT_BUDGET, parallel: true }
    }
}

struct Budget {
    limit: u64,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { limit, nodes: AtomicU64::new(0), aborted: AtomicBool::new(false) }
    }

    /// Counts a node; false once the budget is spent.
    fn tick(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Nonnegative vectors `x` over columns `1..r` with `Σ d_j x_j = target` and `x_j ≤ ub_j`.
/// With a residual, also `x xᵀ ≤ residual` entrywise (column 0 carries `lead`).
/// With `cap`, only vectors lexicographically `≤ cap` are produced.
struct RowEnum<'a> {
    dims: &'a [u64],
    ub: Vec<u64>,
    residual: Option<&'a [Vec<i64>]>,
    lead: u32,
    cap: Option<&'a [u32]>,
    budget: &'a Budget,
}

impl RowEnum<'_> {
    fn run(&self, target: u64, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        let r = self.dims.len();
        let mut x = vec![0u32; r];
        x[0] = self.lead;
        if let Some(res) = self.residual {
            if (self.lead as i64).pow(2) > res[0][0] {
                return true;
            }
        }
        let mut tail = vec![0u64; r + 1];
        for j in (1..r).rev() {
            tail[j] = tail[j + 1] + self.dims[j] * self.ub[j];
        }
        let tight = self.cap.is_some_and(|c| c[0] == self.lead);
        if self.cap.is_some_and(|c| c[0] < self.lead) {
            return true;
        }
        self.rec(1, target, tight, &mut x, &tail, f)
    }

    fn rec(&self, j: usize, rem: u64, tight: bool, x: &mut [u32], tail: &[u64], f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let r = self.dims.len();
        if j == r {
            return rem != 0 || f(x);
        }
        if rem > tail[j] {
            return true;
        }
        let d = self.dims[j];
        let mut hi = (rem / d).min(self.ub[j]);
        if tight {
            hi = hi.min(self.cap.unwrap()[j] as u64);
        }
        if let Some(res) = self.residual {
            hi = hi.min(isqrt(res[j][j].max(0) as u64));
        }
        for v in (0..=hi).rev() {
            let v32 = v as u32;
            if let Some(res) = self.residual {
                if v > 0 && (0..j).any(|k| (x[k] as i64) * v as i64 > res[j][k]) {
                    continue;
                }
            }
            x[j] = v32;
            let still = tight && v32 == self.cap.unwrap()[j];
            if !self.rec(j + 1, rem - v * d, still, x, tail, f) {
                x[j] = 0;
                return false;
            }
        }
        x[j] = 0;
        true
    }
}

fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

fn subtract_outer(res: &mut [Vec<i64>], v: &[u32]) {
    for j in 0..v.len() {
        if v[j] == 0 {
            continue;
        }
        for k in 0..v.len() {
            res[j][k] -= v[j] as i64 * v[k] as i64;
        }
    }
}

/// Enumerates the rows of the irreducible representations (the unit row included).
/// `gram_prune` restricts to squares compatible with the Gram identity and breaks the
/// symmetry between blocks of equal `(n, f)`.
fn lower_squares(
    p: &InductionProblem,
    gram_prune: bool,
    budget: &Budget,
    out: &mut dyn FnMut(Vec<Vec<u32>>, Vec<Vec<i64>>) -> bool,
) -> bool {
    let r = p.rank();
    let mut unit = vec![0u32; r];
    unit[0] = 1;
    let mut residual = p.gram.clone();
    subtract_outer(&mut residual, &unit);
    let mut cols: Vec<i64> = (0..r).map(|j| if j == 0 { 0 } else { p.gram[0][j] }).collect();
    // The unit row already accounts for `G[0][0]`'s first unit; the rest is `Σ n_i²`.
    let mut rows = vec![unit];
    lower_rec(p, 1, &mut rows, &mut cols, &mut residual, gram_prune, budget, out)
}

#[allow(clippy::too_many_arguments)]
fn lower_rec(
    p: &InductionProblem,
    i: usize,
    rows: &mut Vec<Vec<u32>>,
    cols: &mut Vec<i64>,
    residual: &mut Vec<Vec<i64>>,
    gram_prune: bool,
    budget: &Budget,
    out: &mut dyn FnMut(Vec<Vec<u32>>, Vec<Vec<i64>>) -> bool,
) -> bool {
    let r = p.rank();
    if i == p.blocks.len() {
        if cols.iter().any(|&c| c != 0) {
            return true;
        }
        return out(rows.clone(), residual.clone());
    }
    let (n, f) = p.blocks[i];
    let m = p.global / f;
    if m < n as u64 {
        return true;
    }
    let ub: Vec<u64> = cols.iter().map(|&c| (c.max(0) as u64) / n as u64).collect();
    let prev = rows.last().cloned().unwrap();
    let cap = (gram_prune && i >= 2 && p.blocks[i - 1] == (n, f)).then_some(prev.as_slice());
    let snapshot = residual.clone();
    let en = RowEnum {
        dims: &p.dims,
        ub,
        residual: gram_prune.then_some(snapshot.as_slice()),
        lead: n,
        cap,
        budget,
    };
    let mut candidates = Vec::new();
    let finished = en.run(m - n as u64, &mut |x| {
        candidates.push(x.to_vec());
        true
    });
    if !finished {
        return false;
    }
    for x in candidates {
        for j in 1..r {
            cols[j] -= n as i64 * x[j] as i64;
        }
        subtract_outer(residual, &x);
        rows.push(x.clone());
        let ok = lower_rec(p, i + 1, rows, cols, residual, gram_prune, budget, out);
        rows.pop();
        for j in 0..r {
            for k in 0..r {
                residual[j][k] += x[j] as i64 * x[k] as i64;
            }
        }
        for j in 1..r {
            cols[j] += n as i64 * x[j] as i64;
        }
        if !ok {
            return false;
        }
    }
    true
}

/// All solutions of the two linear families pinning the rows of the irreducible
/// representations (unit row first). An empty list is a genuine obstruction.
pub fn lower_square_solutions(p: &InductionProblem, budget: u64) -> Result<Vec<Vec<Vec<u32>>>> {
    let b = Budget::new(budget);
    let mut out = Vec::new();
    let done = lower_squares(p, false, &b, &mut |rows, _| {
        out.push(rows);
        true
    });
    if !done {
        return Err(Error::Timeout { budget });
    }
    out.sort();
    Ok(out)
}

fn residual_plausible(res: &[Vec<i64>]) -> bool {
    let r = res.len();
    for j in 0..r {
        for k in 0..r {
            if res[j][k] < 0 || res[j][k] * res[j][k] > res[j][j] * res[k][k] {
                return false;
            }
        }
    }
    true
}

struct Extender<'a> {
    p: &'a InductionProblem,
    budget: &'a Budget,
}

impl Extender<'_> {
    /// Decomposes the residual as `Σ v vᵀ` with rows taken in lexicographically
    /// non-increasing order, so each multiset of added rows is produced once.
    fn run(&self, res: &mut Vec<Vec<i64>>, prev: Option<Vec<u32>>, rows: &mut Vec<Vec<u32>>, out: &mut Vec<InductionSolution>) -> bool {
        let r = self.p.rank();
        if !self.budget.tick() {
            return false;
        }
        let Some(j0) = (1..r).find(|&j| res[j][j] > 0) else {
            if res.iter().flatten().all(|&x| x == 0) && self.duality_closed(rows) {
                out.push(InductionSolution::from_rows(rows.clone(), &self.p.dims));
            }
            return true;
        };
        if !residual_plausible(res) {
            return true;
        }
        let dims = &self.p.dims;
        let budget_sq: i64 = (0..r).flat_map(|j| (0..r).map(move |k| (j, k))).map(|(j, k)| dims[j] as i64 * dims[k] as i64 * res[j][k]).sum();
        let mmax = isqrt(budget_sq.max(0) as u64);
        let cap = prev.as_deref().filter(|c| c[..j0].iter().all(|&x| x == 0));
        let mut v = vec![0u32; r];
        let mut candidates = Vec::new();
        let ok = self.row(j0, j0, 0, mmax, cap.is_some(), cap, res, &mut v, &mut candidates);
        if !ok {
            return false;
        }
        for v in candidates {
            subtract_outer(res, &v);
            rows.push(v.clone());
            let ok = self.run(res, Some(v.clone()), rows, out);
            rows.pop();
            for j in 0..r {
                for k in 0..r {
                    res[j][k] += v[j] as i64 * v[k] as i64;
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn row(&self, j0: usize, j: usize, m: u64, mmax: u64, tight: bool, cap: Option<&[u32]>, res: &[Vec<i64>], v: &mut [u32], out: &mut Vec<Vec<u32>>) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let r = v.len();
        if j == r {
            if m > 0 && self.p.global.is_multiple_of(m) {
                out.push(v.to_vec());
            }
            return true;
        }
        let d = self.p.dims[j];
        let mut hi = isqrt(res[j][j].max(0) as u64).min((mmax - m) / d);
        if tight {
            hi = hi.min(cap.unwrap()[j] as u64);
        }
        let lo = if j == j0 { 1 } else { 0 };
        let mut x = hi;
        loop {
            if x < lo {
                break;
            }
            let fits = x == 0 || (j0..j).all(|k| v[k] as i64 * x as i64 <= res[j][k]);
            if fits {
                v[j] = x as u32;
                let still = tight && v[j] == cap.unwrap()[j];
                if !self.row(j0, j + 1, m + x * d, mmax, still, cap, res, v, out) {
                    v[j] = 0;
                    return false;
                }
            }
            if x == 0 {
                break;
            }
            x -= 1;
        }
        v[j] = 0;
        true
    }

    fn duality_closed(&self, rows: &[Vec<u32>]) -> bool {
        duality_closed(&self.p.ring, rows)
    }
}

/// The multiset of rows is stable under `v ↦ (v_{j*})_j`.
fn duality_closed(ring: &FusionData, rows: &[Vec<u32>]) -> bool {
    let mut a: Vec<Vec<u32>> = rows.to_vec();
    let mut b: Vec<Vec<u32>> = rows.iter().map(|v| (0..v.len()).map(|j| v[ring.dual(j)]).collect()).collect();
    a.sort();
    b.sort();
    a == b
}

/// Every candidate induction matrix, deduplicated up to reordering of the simples of the
/// center.
pub fn full_solutions(p: &InductionProblem, opts: &InductionOptions) -> Result<Vec<InductionSolution>> {
    let budget = Budget::new(opts.budget);
    let mut squares = Vec::new();
    let done = lower_squares(p, true, &budget, &mut |rows, res| {
        if residual_plausible(&res) {
            squares.push((rows, res));
        }
        true
    });
    if !done {
        return Err(Error::Timeout { budget: opts.budget });
    }
    let work = |(rows, res): &(Vec<Vec<u32>>, Vec<Vec<i64>>)| -> Option<Vec<InductionSolution>> {
        let ext = Extender { p, budget: &budget };
        let mut out = Vec::new();
        let mut rows = rows.clone();
        let mut res = res.clone();
        ext.run(&mut res, None, &mut rows, &mut out).then_some(out)
    };
    let parts: Vec<Option<Vec<InductionSolution>>> =
        if opts.parallel { squares.par_iter().map(work).collect() } else { squares.iter().map(work).collect() };
    let mut all = BTreeSet::new();
    for part in parts {
        match part {
            Some(sols) => all.extend(sols),
            None => return Err(Error::Timeout { budget: opts.budget }),
        }
    }
    Ok(all.into_iter().collect())
}

/// Independent re-check of a candidate: the Gram identity, the pinned rows, divisibility of
/// the center dimensions, `Σ m² = FPdim²` and duality symmetry.
pub fn verify_solution(ring: &FusionData, sol: &InductionSolution) -> std::result::Result<(), String> {
    let r = ring.rank();
    let dims = ring.integral_dims().map_err(|e| e.to_string())?;
    let global: u64 = dims.iter().map(|d| d * d).sum();
    let f = &sol.matrix;
    if f.iter().any(|row| row.len() != r) {
        return Err("row length differs from the rank".into());
    }
    for j in 0..r {
        // Σ_t b_t b_j b_t* computed by repeated multiplication.
        let mut acc = vec![0i64; r];
        for t in 0..r {
            let mut bt = vec![0i64; r];
            bt[t] = 1;
            let mut bj = vec![0i64; r];
            bj[j] = 1;
            let mut bts = vec![0i64; r];
            bts[ring.dual(t)] = 1;
            let prod = ring.multiply(&ring.multiply(&bt, &bj), &bts);
            for k in 0..r {
                acc[k] += prod[k];
            }
        }
        for k in 0..r {
            let lhs: i64 = f.iter().map(|row| row[j] as i64 * row[k] as i64).sum();
            if lhs != acc[k] {
                return Err(format!("Gram identity fails at ({j},{k}): {lhs} != {}", acc[k]));
            }
        }
    }
    let mut unit = vec![0u32; r];
    unit[0] = 1;
    if !f.contains(&unit) {
        return Err("no unit row".into());
    }
    let m: Vec<u64> = f.iter().map(|row| row.iter().zip(&dims).map(|(&x, &d)| x as u64 * d).sum()).collect();
    if m != sol.center_type {
        return Err("center type is not F·d".into());
    }
    if let Some(bad) = m.iter().find(|&&x| x == 0 || !global.is_multiple_of(x)) {
        return Err(format!("center dimension {bad} does not divide {global}"));
    }
    if m.iter().map(|x| (x * x) as u128).sum::<u128>() != (global as u128).pow(2) {
        return Err("Σ m² differs from FPdim²".into());
    }
    let profile = codegree_profile(ring).map_err(|e| e.to_string())?;
    let mut expect: Vec<(u64, u64)> = profile
        .integer_blocks()
        .ok_or("non-integral codegrees")?
        .into_iter()
        .map(|(n, c)| (n as u64, global / c))
        .collect();
    let mut got: Vec<(u64, u64)> = f.iter().zip(&m).filter(|(row, _)| row[0] > 0).map(|(row, &mi)| (row[0] as u64, mi)).collect();
    expect.sort();
    got.sort();
    if expect != got {
        return Err(format!("rows through the unit {got:?} do not match the representations {expect:?}"));
    }
    if !duality_closed(ring, f) {
        return Err("rows are not closed under duality".into());
    }
    Ok(())
}

/// Whether `F` is a ring morphism from the candidate center: for all `i, j, t`,
/// `Σ_k M[i][j][k] F[k][t] = Σ_{l,u} F[i][l] F[j][u] N[l][u][t]`, and `F[i*] = F[i]∘*`.
pub fn ring_morphism_compatible(ring: &FusionData, sol: &InductionSolution, center: &FusionData) -> Result<bool> {
    let n = sol.center_rank();
    let r = ring.rank();
    if center.rank() != n {
        return Err(Error::DimensionMismatch(format!("center rank {} but the matrix has {n} rows", center.rank())));
    }
    if !center.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let cdims = center.integral_dims()?;
    if cdims != sol.center_type {
        return Err(Error::DimensionMismatch(format!("center type {cdims:?} differs from {:?}", sol.center_type)));
    }
    let f = &sol.matrix;
    for i in 0..n {
        let is = center.dual(i);
        if (0..r).any(|j| f[is][j] != f[i][ring.dual(j)]) {
            return Ok(false);
        }
    }
    let images: Vec<Vec<i64>> = f.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect();
    for i in 0..n {
        for j in i..n {
            let rhs = ring.multiply(&images[i], &images[j]);
            let mut lhs = vec![0i64; r];
            for k in 0..n {
                let c = center.n(i, j, k) as i64;
                if c != 0 {
                    for t in 0..r {
                        lhs[t] += c * images[k][t];
                    }
                }
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum ObstructionReport {
    Obstructed,
    Constrained { solutions: Vec<InductionSolution> },
    Inconclusive { budget: u64 },
}

pub fn obstruction_report(ring: &FusionData, opts: &InductionOptions) -> Result<ObstructionReport> {
    let p = InductionProblem::new(ring)?;
    Ok(match full_solutions(&p, opts) {
        Ok(s) if s.is_empty() => ObstructionReport::Obstructed,
        Ok(solutions) => ObstructionReport::Constrained { solutions },
        Err(Error::Timeout { budget }) => ObstructionReport::Inconclusive { budget },
        Err(e) => return Err(e),
    })
}
