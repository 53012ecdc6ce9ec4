//! Exhaustive search for the fusion data of a given type and duality.
//!
//! Unknowns are the orbits of `N[i][j][k]` under Frobenius reciprocity. The
//! dimension equations, the invertible-row equations, the norm identity
//! `Σ_k N_{ij}^k² = Σ_k N_{i*i}^k N_{jj*}^k` and associativity are kept as
//! integer polynomials of degree ≤ 2 and enforced by bounds propagation; the
//! depth-first search branches on the smallest domain.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_integer::Integer;
use rayon::prelude::*;

use crate::enumerate::canonical::canonical_within_duality;
use crate::error::{Error, Result};
use crate::ring::{FusionData, TypeVector};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Maximum number of branching assignments.
    pub budget: u64,
    /// Split the tree across the rayon pool.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, parallel: true }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Up to isomorphism, sorted by flattened tensor.
    pub rings: Vec<FusionData>,
    pub nodes: u64,
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    a: u32,
    b: u32,
    coef: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Equation {
    constant: i64,
    terms: Vec<Term>,
}

#[derive(Clone, Copy)]
enum Slot {
    Const(i64),
    Var(u32),
}

type Bounds = Vec<(i64, i64)>;

struct Model {
    rank: usize,
    duality: Vec<usize>,
    slots: Vec<Slot>,
    eqs: Vec<Equation>,
    var_eqs: Vec<Vec<u32>>,
    degree: Vec<usize>,
    init: Bounds,
}

/// Polynomial accumulator keyed by sorted variable pairs (`NONE` for absent).
#[derive(Default)]
struct Poly(BTreeMap<(u32, u32), i64>);

impl Poly {
    fn add(&mut self, x: Slot, y: Option<Slot>, coef: i64) {
        let (mut c, mut vars) = (coef, Vec::new());
        for s in std::iter::once(x).chain(y) {
            match s {
                Slot::Const(v) => c *= v,
                Slot::Var(v) => vars.push(v),
            }
        }
        if c == 0 {
            return;
        }
        vars.sort_unstable();
        let key = match vars.as_slice() {
            [] => (NONE, NONE),
            [a] => (*a, NONE),
            [a, b] => (*a, *b),
            _ => unreachable!(),
        };
        *self.0.entry(key).or_default() += c;
    }

    /// `None` for the zero polynomial; `Err` when it is a nonzero constant.
    fn into_equation(self) -> std::result::Result<Option<Equation>, ()> {
        let mut constant = 0;
        let mut terms = Vec::new();
        for ((a, b), c) in self.0 {
            if c == 0 {
                continue;
            }
            if a == NONE {
                constant = c;
            } else {
                terms.push(Term { a, b, coef: c });
            }
        }
        if terms.is_empty() {
            return if constant == 0 { Ok(None) } else { Err(()) };
        }
        let g = terms.iter().fold(constant.abs(), |g, t| g.gcd(&t.coef.abs()));
        let sign = if terms[0].coef < 0 { -1 } else { 1 };
        for t in terms.iter_mut() {
            t.coef = t.coef / g * sign;
        }
        Ok(Some(Equation { constant: constant / g * sign, terms }))
    }
}

impl Model {
    /// `None` when the constant part is already inconsistent.
    fn build(ty: &TypeVector, duality: &[usize]) -> Option<Model> {
        let r = ty.rank();
        let d: Vec<i64> = ty.dims.iter().map(|&x| x as i64).collect();
        let idx = |i: usize, j: usize, k: usize| (i * r + j) * r + k;
        let dual = |i: usize| duality[i];

        // Orbits of nonzero-index entries under Frobenius reciprocity.
        let mut parent: Vec<usize> = (0..r * r * r).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 1..r {
            for j in 1..r {
                for k in 1..r {
                    let e = idx(i, j, k);
                    for f in [idx(dual(i), k, j), idx(j, dual(k), dual(i))] {
                        let (a, b) = (find(&mut parent, e), find(&mut parent, f));
                        parent[a] = b;
                    }
                }
            }
        }
        let mut slots = vec![Slot::Const(0); r * r * r];
        let mut var_of_root: BTreeMap<usize, u32> = BTreeMap::new();
        let mut init: Bounds = Vec::new();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let e = idx(i, j, k);
                    slots[e] = if i == 0 {
                        Slot::Const((j == k) as i64)
                    } else if j == 0 {
                        Slot::Const((i == k) as i64)
                    } else if k == 0 {
                        Slot::Const((j == dual(i)) as i64)
                    } else {
                        let root = find(&mut parent, e);
                        let next = var_of_root.len() as u32;
                        let v = *var_of_root.entry(root).or_insert(next);
                        if v as usize == init.len() {
                            init.push((0, i64::MAX));
                        }
                        let cap = d[i] * d[j] / d[k];
                        init[v as usize].1 = init[v as usize].1.min(cap);
                        Slot::Var(v)
                    };
                }
            }
        }
        let n = |i: usize, j: usize, k: usize| slots[idx(i, j, k)];

        let mut eqs = BTreeSet::new();
        let mut push = |p: Poly| -> bool {
            match p.into_equation() {
                Ok(Some(e)) => {
                    eqs.insert(e);
                    true
                }
                Ok(None) => true,
                Err(()) => false,
            }
        };
        for i in 1..r {
            for j in 1..r {
                let mut p = Poly::default();
                for k in 0..r {
                    p.add(n(i, j, k), None, d[k]);
                }
                p.add(Slot::Const(1), None, -d[i] * d[j]);
                if !push(p) {
                    return None;
                }
                if d[i] == 1 || d[j] == 1 {
                    let mut p = Poly::default();
                    for k in 0..r {
                        p.add(n(i, j, k), None, 1);
                    }
                    p.add(Slot::Const(1), None, -1);
                    if !push(p) {
                        return None;
                    }
                }
                let mut p = Poly::default();
                for k in 0..r {
                    p.add(n(i, j, k), Some(n(i, j, k)), 1);
                    p.add(n(dual(i), i, k), Some(n(j, dual(j), k)), -1);
                }
                if !push(p) {
                    return None;
                }
            }
        }
        for i in 1..r {
            for j in 1..r {
                for m in 1..r {
                    for l in 0..r {
                        let mut p = Poly::default();
                        for t in 0..r {
                            p.add(n(i, j, t), Some(n(t, m, l)), 1);
                            p.add(n(j, m, t), Some(n(i, t, l)), -1);
                        }
                        if !push(p) {
                            return None;
                        }
                    }
                }
            }
        }
        let eqs: Vec<Equation> = eqs.into_iter().collect();
        let mut var_eqs = vec![Vec::new(); init.len()];
        for (e, eq) in eqs.iter().enumerate() {
            let mut vs: Vec<u32> = eq.terms.iter().flat_map(|t| [t.a, t.b]).filter(|&v| v != NONE).collect();
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                var_eqs[v as usize].push(e as u32);
            }
        }
        let degree = var_eqs.iter().map(|v| v.len()).collect();
        Some(Model { rank: r, duality: duality.to_vec(), slots, eqs, var_eqs, degree, init })
    }

    fn term_range(t: &Term, b: &Bounds) -> (i128, i128) {
        let (lo, hi) = if t.b == NONE {
            let (l, h) = b[t.a as usize];
            (l as i128, h as i128)
        } else {
            let (la, ha) = b[t.a as usize];
            let (lb, hb) = b[t.b as usize];
            (la as i128 * lb as i128, ha as i128 * hb as i128)
        };
        let c = t.coef as i128;
        if c > 0 {
            (c * lo, c * hi)
        } else {
            (c * hi, c * lo)
        }
    }

    /// Tightens bounds from one equation; returns false on contradiction.
    fn revise(&self, e: usize, b: &mut Bounds, changed: &mut Vec<u32>) -> bool {
        let eq = &self.eqs[e];
        let (mut lo, mut hi) = (eq.constant as i128, eq.constant as i128);
        for t in &eq.terms {
            let (tl, th) = Self::term_range(t, b);
            lo += tl;
            hi += th;
        }
        if lo > 0 || hi < 0 {
            return false;
        }
        if lo == hi {
            return true;
        }
        for t in &eq.terms {
            let (tlo, thi) = Self::term_range(t, b);
            // Allowed values of this term given the others.
            let a = tlo.max(-(hi - thi));
            let bb = thi.min(-(lo - tlo));
            if a <= tlo && bb >= thi {
                continue;
            }
            let c = t.coef as i128;
            let (ma, mb) = if c > 0 {
                (cdiv(a, c), fdiv(bb, c))
            } else {
                (cdiv(-bb, -c), fdiv(-a, -c))
            };
            let ma = ma.max(0);
            if ma > mb {
                return false;
            }
            if t.b == NONE {
                if !tighten(b, t.a, ma, mb, changed) {
                    return false;
                }
            } else if t.a == t.b {
                if !tighten(b, t.a, ceil_sqrt(ma), floor_sqrt(mb), changed) {
                    return false;
                }
            } else {
                for (x, y) in [(t.a, t.b), (t.b, t.a)] {
                    let (ly, hy) = b[y as usize];
                    let (ly, hy) = (ly as i128, hy as i128);
                    if hy == 0 {
                        if ma > 0 {
                            return false;
                        }
                        continue;
                    }
                    let new_lo = cdiv(ma, hy);
                    let new_hi = if ly > 0 { fdiv(mb, ly) } else { i128::MAX };
                    if !tighten(b, x, new_lo, new_hi, changed) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn propagate(&self, b: &mut Bounds, seeds: impl IntoIterator<Item = u32>) -> bool {
        let mut queued = vec![false; self.eqs.len()];
        let mut queue = VecDeque::new();
        for e in seeds {
            if !queued[e as usize] {
                queued[e as usize] = true;
                queue.push_back(e);
            }
        }
        let mut changed = Vec::new();
        while let Some(e) = queue.pop_front() {
            queued[e as usize] = false;
            changed.clear();
            if !self.revise(e as usize, b, &mut changed) {
                return false;
            }
            for &v in &changed {
                for &f in &self.var_eqs[v as usize] {
                    if !queued[f as usize] {
                        queued[f as usize] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
        true
    }

    /// Exact check of every equation at a fully assigned node.
    fn satisfied(&self, b: &Bounds) -> bool {
        self.eqs.iter().all(|eq| {
            let (lo, hi) = eq.terms.iter().fold((eq.constant as i128, eq.constant as i128), |(l, h), t| {
                let (tl, th) = Self::term_range(t, b);
                (l + tl, h + th)
            });
            lo == 0 && hi == 0
        })
    }

    fn choose(&self, b: &Bounds) -> Option<u32> {
        (0..b.len())
            .filter(|&v| b[v].0 < b[v].1)
            .min_by_key(|&v| (b[v].1 - b[v].0, std::cmp::Reverse(self.degree[v])))
            .map(|v| v as u32)
    }

    fn ring(&self, b: &Bounds) -> FusionData {
        let tensor = self
            .slots
            .iter()
            .map(|s| match *s {
                Slot::Const(c) => c as u32,
                Slot::Var(v) => b[v as usize].0 as u32,
            })
            .collect();
        FusionData::from_parts(self.rank, self.duality.clone(), tensor).expect("shape")
    }

    /// Children of a node: `(assigned bounds)` that survive propagation.
    fn children(&self, b: &Bounds, v: u32) -> impl Iterator<Item = Bounds> + '_ {
        let (lo, hi) = b[v as usize];
        let base = b.clone();
        (lo..=hi).filter_map(move |x| {
            let mut c = base.clone();
            c[v as usize] = (x, x);
            self.propagate(&mut c, self.var_eqs[v as usize].iter().copied()).then_some(c)
        })
    }
}

fn tighten(b: &mut Bounds, v: u32, lo: i128, hi: i128, changed: &mut Vec<u32>) -> bool {
    let (l, h) = b[v as usize];
    let nl = (l as i128).max(lo);
    let nh = (h as i128).min(hi);
    if nl > nh {
        return false;
    }
    if nl != l as i128 || nh != h as i128 {
        b[v as usize] = (nl as i64, nh as i64);
        changed.push(v);
    }
    true
}

fn fdiv(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn cdiv(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

fn floor_sqrt(x: i128) -> i128 {
    if x < 0 {
        return -1;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn ceil_sqrt(x: i128) -> i128 {
    if x <= 0 {
        return 0;
    }
    let r = floor_sqrt(x);
    if r * r == x {
        r
    } else {
        r + 1
    }
}

struct Shared {
    nodes: AtomicU64,
    aborted: AtomicBool,
    budget: u64,
}

impl Shared {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }
}

fn dfs(model: &Model, b: Bounds, shared: &Shared, out: &mut Vec<Bounds>) {
    let Some(v) = model.choose(&b) else {
        if model.satisfied(&b) {
            out.push(b);
        }
        return;
    };
    let (lo, hi) = b[v as usize];
    for x in lo..=hi {
        if !shared.tick() {
            return;
        }
        let mut c = b.clone();
        c[v as usize] = (x, x);
        if model.propagate(&mut c, model.var_eqs[v as usize].iter().copied()) {
            dfs(model, c, shared, out);
        }
    }
}

/// All fusion rings of the given type and duality, up to relabellings that
/// preserve both.
pub fn fusion_data_search(ty: &TypeVector, duality: &[usize], opts: SearchOptions) -> Result<SearchOutcome> {
    let r = ty.rank();
    if duality.len() != r || duality[0] != 0 || (0..r).any(|i| duality[duality[i]] != i || ty.dims[duality[i]] != ty.dims[i]) {
        return Err(Error::InvalidAction("duality must be a dimension-preserving involution fixing 0".into()));
    }
    let Some(model) = Model::build(ty, duality) else {
        return Ok(SearchOutcome { rings: vec![], nodes: 0 });
    };
    let shared = Shared { nodes: AtomicU64::new(0), aborted: AtomicBool::new(false), budget: opts.budget };
    let mut root = model.init.clone();
    let mut leaves = Vec::new();
    if model.propagate(&mut root, 0..model.eqs.len() as u32) {
        if opts.parallel {
            // Expand breadth-first until there is enough independent work.
            let mut frontier = vec![root];
            let target = 8 * rayon::current_num_threads();
            for _ in 0..4 {
                if frontier.len() >= target {
                    break;
                }
                let mut next = Vec::new();
                for node in frontier {
                    match model.choose(&node) {
                        None if model.satisfied(&node) => leaves.push(node),
                        None => {}
                        Some(v) => {
                            for c in model.children(&node, v) {
                                shared.tick();
                                next.push(c);
                            }
                        }
                    }
                }
                frontier = next;
            }
            let found = Mutex::new(Vec::new());
            frontier.into_par_iter().for_each(|node| {
                let mut local = Vec::new();
                dfs(&model, node, &shared, &mut local);
                found.lock().unwrap().extend(local);
            });
            leaves.extend(found.into_inner().unwrap());
        } else {
            dfs(&model, root, &shared, &mut leaves);
        }
    }
    if shared.aborted.load(Ordering::Relaxed) {
        return Err(Error::Timeout { budget: opts.budget });
    }
    let mut rings: Vec<FusionData> = leaves
        .iter()
        .map(|b| model.ring(b))
        .filter(|ring| {
            debug_assert!(ring.validate().is_ok(), "solver produced an invalid ring");
            ring.validate().is_ok()
        })
        .map(|ring| canonical_within_duality(&ring, ty))
        .collect();
    rings.sort_by(|a, b| a.flat().cmp(b.flat()));
    rings.dedup();
    Ok(SearchOutcome { rings, nodes: shared.nodes.load(Ordering::Relaxed) })
}
