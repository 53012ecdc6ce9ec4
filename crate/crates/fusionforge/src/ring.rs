use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Axiom, Error, Result};

/// Nondecreasing basic dimensions, starting with the unit's 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeVector {
    pub dims: Vec<u64>,
}

impl TypeVector {
    pub fn new(dims: Vec<u64>) -> Result<Self> {
        let bad = |m: &str| Error::Parse { line: 0, column: 0, message: m.to_string() };
        if dims.first() != Some(&1) {
            return Err(bad("type must start with 1"));
        }
        if dims.windows(2).any(|w| w[0] > w[1]) {
            return Err(bad("type must be nondecreasing"));
        }
        Ok(TypeVector { dims })
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn global_fpdim(&self) -> u64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    /// `[[d, count], ...]` grouping of equal dimensions.
    pub fn grouped(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        for &d in &self.dims {
            match out.last_mut() {
                Some((e, c)) if *e == d => *c += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }
}

/// Structure constants `N[i][j][k]` of a based ring: `b_i b_j = Σ_k N[i][j][k] b_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FusionData {
    rank: usize,
    duality: Vec<usize>,
    tensor: Vec<u32>,
}

impl FusionData {
    /// Builds without checking the axioms; see [`FusionData::validate`].
    pub fn from_parts(rank: usize, duality: Vec<usize>, tensor: Vec<u32>) -> Result<Self> {
        if rank == 0 || duality.len() != rank || tensor.len() != rank * rank * rank {
            return Err(Error::AxiomViolation { axiom: Axiom::Shape, indices: vec![] });
        }
        Ok(FusionData { rank, duality, tensor })
    }

    pub fn from_nested(duality: Vec<usize>, nested: &[Vec<Vec<u32>>]) -> Result<Self> {
        let r = nested.len();
        let mut tensor = Vec::with_capacity(r * r * r);
        for m in nested {
            if m.len() != r {
                return Err(Error::AxiomViolation { axiom: Axiom::Shape, indices: vec![] });
            }
            for row in m {
                if row.len() != r {
                    return Err(Error::AxiomViolation { axiom: Axiom::Shape, indices: vec![] });
                }
                tensor.extend_from_slice(row);
            }
        }
        Self::from_parts(r, duality, tensor)
    }

    pub fn trivial() -> Self {
        FusionData { rank: 1, duality: vec![0], tensor: vec![1] }
    }

    /// Group ring of a finite group given by its multiplication table.
    pub fn group_ring(table: &[Vec<usize>]) -> Result<Self> {
        let r = table.len();
        let mut tensor = vec![0; r * r * r];
        let mut duality = vec![0; r];
        for i in 0..r {
            for j in 0..r {
                tensor[(i * r + j) * r + table[i][j]] = 1;
                if table[i][j] == 0 {
                    duality[i] = j;
                }
            }
        }
        Self::from_parts(r, duality, tensor)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn duality(&self) -> &[usize] {
        &self.duality
    }

    pub fn dual(&self, i: usize) -> usize {
        self.duality[i]
    }

    #[inline]
    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.tensor[(i * self.rank + j) * self.rank + k]
    }

    pub fn flat(&self) -> &[u32] {
        &self.tensor
    }

    pub fn nested(&self) -> Vec<Vec<Vec<u32>>> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.n(i, j, k)).collect()).collect())
            .collect()
    }

    pub fn multiplicity(&self) -> u32 {
        self.tensor.iter().copied().max().unwrap_or(0)
    }

    pub fn is_commutative(&self) -> bool {
        let r = self.rank;
        (0..r).all(|i| (i + 1..r).all(|j| (0..r).all(|k| self.n(i, j, k) == self.n(j, i, k))))
    }

    /// Left multiplication by `b_i` as an `r×r` matrix with `(k, j)` entry `N[i][j][k]`.
    pub fn left_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let r = self.rank;
        (0..r).map(|k| (0..r).map(|j| self.n(i, j, k) as i64).collect()).collect()
    }

    /// Relabels the basis: new index `perm[i]` carries old element `i`.
    pub fn permuted(&self, perm: &[usize]) -> FusionData {
        let r = self.rank;
        let mut tensor = vec![0; r * r * r];
        let mut duality = vec![0; r];
        for i in 0..r {
            duality[perm[i]] = perm[self.duality[i]];
            for j in 0..r {
                for k in 0..r {
                    tensor[(perm[i] * r + perm[j]) * r + perm[k]] = self.n(i, j, k);
                }
            }
        }
        FusionData { rank: r, duality, tensor }
    }

    /// Product of two elements written in the basis.
    pub fn multiply(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let r = self.rank;
        let mut out = vec![0; r];
        for i in 0..r {
            if x[i] == 0 {
                continue;
            }
            for j in 0..r {
                if y[j] == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += x[i] * y[j] * self.n(i, j, k) as i64;
                }
            }
        }
        out
    }

    /// Checks the axioms in order: duality, unit, dual, anti-involution,
    /// associativity, Frobenius reciprocity. Reports the first failure.
    pub fn validate(&self) -> Result<()> {
        let r = self.rank;
        let fail = |axiom, indices: &[usize]| Err(Error::AxiomViolation { axiom, indices: indices.to_vec() });
        let d = &self.duality;
        if d[0] != 0 {
            return fail(Axiom::Duality, &[0]);
        }
        for i in 0..r {
            if d[i] >= r || d[d[i]] != i {
                return fail(Axiom::Duality, &[i]);
            }
        }
        for i in 0..r {
            for j in 0..r {
                let delta = (i == j) as u32;
                if self.n(0, i, j) != delta || self.n(i, 0, j) != delta {
                    return fail(Axiom::Unit, &[i, j]);
                }
                if self.n(d[i], j, 0) != delta || self.n(j, d[i], 0) != delta {
                    return fail(Axiom::Dual, &[i, j]);
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if self.n(i, j, k) != self.n(d[j], d[i], d[k]) {
                        return fail(Axiom::AntiInvolution, &[i, j, k]);
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for t in 0..r {
                        let lhs: u64 = (0..r).map(|s| self.n(i, j, s) as u64 * self.n(s, k, t) as u64).sum();
                        let rhs: u64 = (0..r).map(|s| self.n(j, k, s) as u64 * self.n(i, s, t) as u64).sum();
                        if lhs != rhs {
                            return fail(Axiom::Associativity, &[i, j, k, t]);
                        }
                    }
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v = self.n(i, j, k);
                    if v != self.n(k, d[j], i) || v != self.n(d[k], i, d[j]) {
                        return fail(Axiom::FrobeniusReciprocity, &[i, j, k]);
                    }
                }
            }
        }
        Ok(())
    }

    /// Frobenius–Perron dimensions. The integral case is certified exactly.
    pub fn fpdims(&self) -> Result<FpDims> {
        let r = self.rank;
        // Σ_i L_i is symmetric (L_{i*} = L_i^T) with the FP vector as Perron eigenvector.
        let mut a = DMatrix::<f64>::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    a[(k, j)] += self.n(i, j, k) as f64;
                }
            }
        }
        let eig = a.symmetric_eigen();
        let (top, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let v = eig.eigenvectors.column(top);
        if v[0].abs() < 1e-300 {
            return Err(Error::NonConvergence);
        }
        let mut values: Vec<f64> = v.iter().map(|x| x / v[0]).collect();
        if values.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::NonConvergence);
        }
        values = self.refine(values)?;
        let rounded: Vec<u64> = values.iter().map(|x| x.round() as u64).collect();
        let integral = self.is_dimension_vector(&rounded).then_some(rounded);
        Ok(FpDims { values, integral })
    }

    /// Rejects eigenvectors that do not satisfy the dimension equations.
    fn refine(&self, d: Vec<f64>) -> Result<Vec<f64>> {
        let r = self.rank;
        let resid = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| {
                let s: f64 = (0..r).map(|k| self.n(i, j, k) as f64 * d[k]).sum();
                (s - d[i] * d[j]).abs() / (d[i] * d[j])
            })
            .fold(0.0, f64::max);
        if resid > 1e-8 {
            return Err(Error::NonConvergence);
        }
        Ok(d)
    }

    /// Exact check of `d_i d_j = Σ_k N[i][j][k] d_k` for an integer candidate.
    pub fn is_dimension_vector(&self, d: &[u64]) -> bool {
        let r = self.rank;
        d.len() == r
            && d[0] == 1
            && (0..r).all(|i| {
                (0..r).all(|j| {
                    let s: u128 = (0..r).map(|k| self.n(i, j, k) as u128 * d[k] as u128).sum();
                    s == d[i] as u128 * d[j] as u128
                })
            })
    }

    /// Integer FP dimensions, or `NonIntegralInput`.
    pub fn integral_dims(&self) -> Result<Vec<u64>> {
        self.fpdims()?.integral.ok_or(Error::NonIntegralInput)
    }

    pub fn summarize(&self) -> Result<RingSummary> {
        let fp = self.fpdims()?;
        let r = self.rank;
        let pointed = fp.values.iter().all(|x| (x - 1.0).abs() < 1e-9);
        let perfect = fp.values.iter().skip(1).all(|x| *x > 1.0 + 1e-9);
        let one_frobenius = match &fp.integral {
            Some(d) => {
                let n: u64 = d.iter().map(|x| x * x).sum();
                d.iter().all(|x| n.is_multiple_of(*x))
            }
            None => false,
        };
        let subrings = self.fusion_subrings();
        Ok(RingSummary {
            dims: fp.values.clone(),
            integral_dims: fp.integral.clone(),
            duality: self.duality.clone(),
            commutative: self.is_commutative(),
            pointed,
            perfect,
            simple: subrings.len() <= 2,
            one_frobenius,
            mnsd: (1..r).all(|i| self.duality[i] != i),
            multiplicity: self.multiplicity(),
        })
    }

    fn closure(&self, seed: u128) -> u128 {
        let r = self.rank;
        let mut set = seed | 1;
        loop {
            let mut next = set;
            for i in 0..r {
                if set >> i & 1 == 0 {
                    continue;
                }
                next |= 1 << self.duality[i];
                for j in 0..r {
                    if set >> j & 1 == 0 {
                        continue;
                    }
                    for k in 0..r {
                        if self.n(i, j, k) > 0 {
                            next |= 1 << k;
                        }
                    }
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// All fusion subrings as sorted index sets (smallest first).
    ///
    /// Every subring is a join of singly generated ones, so the closures of
    /// single elements are joined pairwise until nothing new appears.
    pub fn fusion_subrings(&self) -> Vec<Vec<usize>> {
        assert!(self.rank <= 128, "subring enumeration supports rank ≤ 128");
        let mut found: BTreeSet<u128> = (0..self.rank).map(|i| self.closure(1 << i)).collect();
        loop {
            let list: Vec<u128> = found.iter().copied().collect();
            let mut grew = false;
            for (a, &x) in list.iter().enumerate() {
                for &y in &list[a + 1..] {
                    let c = self.closure(x | y);
                    grew |= found.insert(c);
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> =
            found.into_iter().map(|m| (0..self.rank).filter(|i| m >> i & 1 == 1).collect()).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// Restriction to a subring's basis, in increasing index order.
    pub fn restrict(&self, subset: &[usize]) -> Result<FusionData> {
        let pos = |x: usize| subset.iter().position(|&y| y == x);
        let m = subset.len();
        let mut tensor = Vec::with_capacity(m * m * m);
        for &i in subset {
            for &j in subset {
                for &k in subset {
                    tensor.push(self.n(i, j, k));
                }
            }
        }
        let duality = subset
            .iter()
            .map(|&i| pos(self.duality[i]).ok_or(Error::DimensionMismatch("subset is not duality-closed".into())))
            .collect::<Result<Vec<_>>>()?;
        FusionData::from_parts(m, duality, tensor)
    }

    /// Adjoins a self-dual ρ with `ρ b_i = b_i ρ = d_i ρ` and
    /// `ρ² = Σ d_i b_i + (FPdim − 1) ρ`.
    pub fn extend(&self) -> Result<FusionData> {
        let d = self.integral_dims()?;
        let r = self.rank;
        let s = r + 1;
        let fp: u64 = d.iter().map(|x| x * x).sum();
        let mut tensor = vec![0u32; s * s * s];
        let at = |i: usize, j: usize, k: usize| (i * s + j) * s + k;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    tensor[at(i, j, k)] = self.n(i, j, k);
                }
            }
            tensor[at(i, r, r)] = d[i] as u32;
            tensor[at(r, i, r)] = d[i] as u32;
            tensor[at(r, r, i)] = d[i] as u32;
        }
        tensor[at(r, r, r)] = (fp - 1) as u32;
        let mut duality = self.duality.clone();
        duality.push(r);
        FusionData::from_parts(s, duality, tensor)
    }

    /// The rank-6 deformation of ZS3 where products of two involutions pick up
    /// `n` copies of every involution.
    pub fn rn_family(n: u32) -> FusionData {
        // rows: left factor, columns: right factor; 0 = e, 1,2 = 3-cycles, 3..5 = involutions
        const PRODUCT: [[usize; 6]; 6] = [
            [0, 1, 2, 3, 4, 5],
            [1, 2, 0, 4, 5, 3],
            [2, 0, 1, 5, 3, 4],
            [3, 5, 4, 0, 2, 1],
            [4, 3, 5, 1, 0, 2],
            [5, 4, 3, 2, 1, 0],
        ];
        let mut tensor = vec![0u32; 216];
        for i in 0..6 {
            for j in 0..6 {
                tensor[(i * 6 + j) * 6 + PRODUCT[i][j]] += 1;
                if i >= 3 && j >= 3 {
                    for k in 3..6 {
                        tensor[(i * 6 + j) * 6 + k] += n;
                    }
                }
            }
        }
        FusionData { rank: 6, duality: vec![0, 2, 1, 3, 4, 5], tensor }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FpDims {
    pub values: Vec<f64>,
    /// Present exactly when every dimension is a rational integer.
    pub integral: Option<Vec<u64>>,
}

impl FpDims {
    pub fn global(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingSummary {
    pub dims: Vec<f64>,
    pub integral_dims: Option<Vec<u64>>,
    pub duality: Vec<usize>,
    pub commutative: bool,
    pub pointed: bool,
    pub perfect: bool,
    pub simple: bool,
    pub one_frobenius: bool,
    pub mnsd: bool,
    pub multiplicity: u32,
}

/// Twelve significant digits, trailing zeros trimmed; integers print plainly.
pub fn format_real(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 * x.abs().max(1.0) {
        return format!("{}", x.round() as i64);
    }
    let digits = 12 - 1 - x.abs().log10().floor() as i32;
    let s = format!("{:.*}", digits.max(0) as usize, x);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
