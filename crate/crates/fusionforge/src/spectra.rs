//! Spectrum of the central element `Z = Σ b_i b_{i*}`, formal codegrees and the
//! spectral criteria built on them.

use std::fmt;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{charpoly, charpoly_rational, inverse, nullspace, prime_factors, root_multiplicity};
use crate::ring::{format_real, FusionData, TypeVector};

type C64 = Complex<f64>;

/// A formal codegree: an exact rational, or a real approximation of an
/// irrational root of `factor`.
#[derive(Debug, Clone, PartialEq)]
pub enum Codegree {
    Exact(Ratio<u64>),
    Approx { value: f64, factor: Vec<BigInt> },
}

impl Codegree {
    pub fn value(&self) -> f64 {
        match self {
            Codegree::Exact(q) => *q.numer() as f64 / *q.denom() as f64,
            Codegree::Approx { value, .. } => *value,
        }
    }

    pub fn integer(&self) -> Option<u64> {
        match self {
            Codegree::Exact(q) if q.is_integer() => Some(q.to_integer()),
            _ => None,
        }
    }
}

impl fmt::Display for Codegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codegree::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Codegree::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Codegree::Approx { value, .. } => f.write_str(&format_real(*value)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    /// Dimension of the simple module of the complexified ring.
    pub n: u32,
    pub f: Codegree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodegreeProfile {
    /// Sorted by increasing codegree, then block size.
    pub blocks: Vec<Block>,
    pub rank: usize,
    pub global: Codegree,
}

impl CodegreeProfile {
    pub fn is_integral(&self) -> bool {
        self.global.integer().is_some() && self.blocks.iter().all(|b| b.f.integer().is_some())
    }

    /// `(n, f)` pairs when every codegree is an integer.
    pub fn integer_blocks(&self) -> Option<Vec<(u32, u64)>> {
        self.blocks.iter().map(|b| b.f.integer().map(|f| (b.n, f))).collect()
    }

    /// The appendix notation, e.g. `[3_2, 4, 15, 60]`.
    pub fn notation(&self) -> String {
        let items: Vec<String> = self
            .blocks
            .iter()
            .map(|b| if b.n == 1 { b.f.to_string() } else { format!("{}_{}", b.f, b.n) })
            .collect();
        format!("[{}]", items.join(", "))
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|b| b.n == 1)
    }

    /// `Σ n_V / f_V`, exact when all codegrees are rational.
    pub fn egyptian_sum(&self) -> EgyptianSum {
        let exact: Option<Vec<Ratio<u64>>> = self
            .blocks
            .iter()
            .map(|b| match &b.f {
                Codegree::Exact(q) => Some(*q),
                _ => None,
            })
            .collect();
        match exact {
            Some(fs) => {
                let mut acc = Ratio::<u128>::zero();
                for (b, f) in self.blocks.iter().zip(fs) {
                    acc += Ratio::new(b.n as u128 * *f.denom() as u128, *f.numer() as u128);
                }
                EgyptianSum::Exact(acc.numer().to_u64().unwrap_or(0), acc.denom().to_u64().unwrap_or(0))
            }
            None => EgyptianSum::Approx(self.blocks.iter().map(|b| b.n as f64 / b.f.value()).sum()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EgyptianSum {
    Exact(u64, u64),
    Approx(f64),
}

impl EgyptianSum {
    pub fn is_one(&self) -> bool {
        match *self {
            EgyptianSum::Exact(p, q) => p == q,
            EgyptianSum::Approx(x) => (x - 1.0).abs() < 1e-9,
        }
    }
}

/// Parses the appendix notation (`3_2,4,15,60`, brackets and spaces optional).
pub fn parse_notation(s: &str) -> Option<Vec<(u32, u64)>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let mut out: Vec<(u32, u64)> = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.split_once('_') {
                Some((f, n)) => Some((n.trim().parse().ok()?, f.trim().parse().ok()?)),
                None => Some((1, t.parse().ok()?)),
            }
        })
        .collect::<Option<_>>()?;
    out.sort_by_key(|&(n, f)| (f, n));
    Some(out)
}

/// `L_Z = Σ_i L_{b_i} L_{b_i*}`.
pub fn central_matrix(data: &FusionData) -> Vec<Vec<i64>> {
    let r = data.rank();
    let mut out = vec![vec![0i64; r]; r];
    for i in 0..r {
        let a = data.left_matrix(i);
        let b = data.left_matrix(data.dual(i));
        for (x, row) in out.iter_mut().enumerate() {
            for (y, o) in row.iter_mut().enumerate() {
                *o += (0..r).map(|t| a[x][t] * b[t][y]).sum::<i64>();
            }
        }
    }
    out
}

fn symmetric_eigenvalues(m: &[Vec<i64>]) -> Vec<f64> {
    let r = m.len();
    let a = DMatrix::<f64>::from_fn(r, r, |i, j| m[i][j] as f64);
    let mut v: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// An eigenvalue of `L_Z` with its algebraic multiplicity.
#[derive(Debug, Clone)]
struct Cluster {
    value: Codegree,
    mult: usize,
    /// Number of Wedderburn blocks carrying this eigenvalue, when computed exactly.
    blocks: Option<usize>,
}

fn eigen_clusters(lz: &[Vec<i64>]) -> Result<Vec<Cluster>> {
    let cp = charpoly(lz);
    let numeric = symmetric_eigenvalues(lz);
    let mut rest = cp;
    let mut clusters = Vec::new();
    let mut remaining = numeric.clone();
    let mut tried = Vec::new();
    for &x in &numeric {
        let c = x.round();
        if c < 1.0 || (x - c).abs() > 1e-6 * c.max(1.0) || tried.contains(&(c as u64)) {
            continue;
        }
        tried.push(c as u64);
        let (m, q) = root_multiplicity(&rest, &BigInt::from(c as u64));
        if m == 0 {
            continue;
        }
        rest = q;
        for _ in 0..m {
            let pos = remaining
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - c).abs().partial_cmp(&(b.1 - c).abs()).unwrap())
                .map(|(i, _)| i)
                .ok_or(Error::PrecisionExhausted("eigenvalue bookkeeping".into()))?;
            remaining.remove(pos);
        }
        clusters.push(Cluster { value: Codegree::Exact(Ratio::from_integer(c as u64)), mult: m, blocks: None });
    }
    if remaining.len() + 1 != rest.len() {
        return Err(Error::PrecisionExhausted("numeric and exact spectra disagree".into()));
    }
    let mut i = 0;
    while i < remaining.len() {
        let v = remaining[i];
        let mut j = i;
        while j < remaining.len() && (remaining[j] - v).abs() <= 1e-7 * v.abs().max(1.0) {
            j += 1;
        }
        let mean = remaining[i..j].iter().sum::<f64>() / (j - i) as f64;
        clusters.push(Cluster { value: Codegree::Approx { value: mean, factor: rest.clone() }, mult: j - i, blocks: None });
        i = j;
    }
    Ok(clusters)
}

fn center_equations(data: &FusionData) -> Vec<Vec<i64>> {
    let r = data.rank();
    let mut rows = Vec::new();
    for i in 0..r {
        for k in 0..r {
            let row: Vec<i64> = (0..r).map(|j| data.n(j, i, k) as i64 - data.n(i, j, k) as i64).collect();
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Dimension of the center of the complexified ring (number of Wedderburn blocks).
pub fn center_dimension(data: &FusionData) -> usize {
    nullspace(&center_equations(data), data.rank()).len()
}

/// Multisets `n_1 ≥ n_2 ≥ …` with `Σ n² = total`.
fn square_partitions(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for n in (1..=max.min((total as f64).sqrt() as usize + 1)).rev() {
        if n * n > total {
            continue;
        }
        for mut rest in square_partitions(total - n * n, n) {
            rest.insert(0, n);
            out.push(rest);
        }
    }
    out
}

pub fn codegree_profile(data: &FusionData) -> Result<CodegreeProfile> {
    let r = data.rank();
    let lz = central_matrix(data);
    let mut clusters = eigen_clusters(&lz)?;
    let fp = data.fpdims()?;
    let global = match &fp.integral {
        Some(d) => Codegree::Exact(Ratio::from_integer(d.iter().map(|x| x * x).sum())),
        None => Codegree::Approx { value: fp.global(), factor: vec![] },
    };

    let per_cluster: Vec<Vec<Vec<usize>>> = if data.is_commutative() {
        clusters.iter().map(|c| vec![vec![1; c.mult]]).collect()
    } else {
        let center = center_equations(data);
        for c in clusters.iter_mut() {
            if let Some(l) = c.value.integer() {
                let mut rows = center.clone();
                for (x, row) in lz.iter().enumerate() {
                    let mut row = row.clone();
                    row[x] -= l as i64;
                    rows.push(row);
                }
                c.blocks = Some(nullspace(&rows, r).len());
            }
        }
        clusters
            .iter()
            .map(|c| {
                square_partitions(c.mult, c.mult)
                    .into_iter()
                    .filter(|p| c.blocks.is_none_or(|b| b == p.len()))
                    .collect()
            })
            .collect()
    };

    let s = if data.is_commutative() { r } else { center_dimension(data) };
    let mut choices: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for options in &per_cluster {
        let mut next = Vec::new();
        for prefix in &choices {
            for o in options {
                let mut p = prefix.clone();
                p.push(o.clone());
                next.push(p);
            }
        }
        choices = next;
    }
    choices.retain(|c| c.iter().map(|p| p.len()).sum::<usize>() == s);
    if choices.len() != 1 {
        return Err(Error::AmbiguousDecomposition(format!(
            "{} block decompositions are consistent with the spectrum",
            choices.len()
        )));
    }
    let mut blocks = Vec::new();
    for (c, ns) in clusters.iter().zip(&choices[0]) {
        for &n in ns {
            let f = match &c.value {
                Codegree::Exact(q) => Codegree::Exact(q / n as u64),
                Codegree::Approx { value, factor } => Codegree::Approx { value: value / n as f64, factor: factor.clone() },
            };
            blocks.push(Block { n: n as u32, f });
        }
    }
    blocks.sort_by(|a, b| a.f.value().partial_cmp(&b.f.value()).unwrap().then(a.n.cmp(&b.n)));
    let profile = CodegreeProfile { blocks, rank: r, global };
    let top = profile.blocks.last().map(|b| (b.n, b.f.value()));
    if top.is_none_or(|(n, f)| n != 1 || (f - profile.global.value()).abs() > 1e-6 * f) {
        return Err(Error::AmbiguousDecomposition("no (1, FPdim) block".into()));
    }
    if !profile.egyptian_sum().is_one() {
        return Err(Error::AmbiguousDecomposition("Σ n/f ≠ 1".into()));
    }
    Ok(profile)
}

/// Integral Drinfeld test: every codegree is an integer dividing the global FPdim.
pub fn is_drinfeld(profile: &CodegreeProfile) -> (bool, String) {
    let Some(g) = profile.global.integer() else {
        return (false, "global FPdim is not an integer".into());
    };
    for b in &profile.blocks {
        match b.f.integer() {
            None => return (false, format!("codegree {} is not an integer", b.f)),
            Some(f) if g % f != 0 => return (false, format!("codegree {f} does not divide {g}")),
            _ => {}
        }
    }
    (true, "all codegrees divide the global FPdim".into())
}

/// `d_i | FPdim^s` for every basic element.
pub fn is_s_frobenius(data: &FusionData, s: u32) -> Result<bool> {
    let d = data.integral_dims()?;
    let g = BigInt::from(d.iter().map(|x| x * x).sum::<u64>()).pow(s);
    Ok(d.iter().all(|&x| (&g % BigInt::from(x)).is_zero()))
}

/// `Σ_V 1/f_V² ≤ (1 + 1/f_1)/2`, exactly over the rationals.
pub fn trace_bound(profile: &CodegreeProfile) -> bool {
    let (Some(blocks), Some(g)) = (profile.integer_blocks(), profile.global.integer()) else {
        let lhs: f64 = profile.blocks.iter().map(|b| 1.0 / b.f.value().powi(2)).sum();
        return lhs <= (1.0 + 1.0 / profile.global.value()) / 2.0 + 1e-12;
    };
    let mut lhs = Ratio::<BigInt>::zero();
    for (_, f) in blocks {
        lhs += Ratio::new(BigInt::from(1), BigInt::from(f) * BigInt::from(f));
    }
    let rhs = Ratio::new(BigInt::from(g) + 1, BigInt::from(2 * g));
    lhs <= rhs
}

/// Primes of the global FPdim coincide with primes of `Π n_V f_V`.
pub fn prime_support_check(profile: &CodegreeProfile) -> Option<bool> {
    let blocks = profile.integer_blocks()?;
    let g = profile.global.integer()?;
    let mut lhs = prime_factors(g as u128);
    let mut rhs: Vec<u128> = blocks.iter().flat_map(|&(n, f)| prime_factors(n as u128 * f as u128)).collect();
    rhs.sort();
    rhs.dedup();
    lhs.sort();
    Some(lhs == rhs)
}

/// Necessary conditions for odd global FPdim: odd rank and odd block sizes.
pub fn odd_consistency(profile: &CodegreeProfile) -> bool {
    profile.rank % 2 == 1 && profile.blocks.iter().all(|b| b.n % 2 == 1)
}

/// `n_1 | n_i d_i²` where `n_i` counts basic elements of dimension `d_i`.
pub fn strong_lagrange_type_check(ty: &TypeVector) -> bool {
    let g = ty.grouped();
    let n1 = g[0].1 as u64;
    g.iter().all(|&(d, n)| (n as u64 * d * d).is_multiple_of(n1))
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// `values[i][j] = χ_j(b_i)`.
    pub values: Vec<Vec<C64>>,
    /// `c_j = Σ_i χ_j(b_i) χ_j(b_{i*})`, descending.
    pub codegrees: Vec<f64>,
    /// The same table when every entry is a rational integer (verified exactly).
    pub exact: Option<Vec<Vec<i64>>>,
}

fn hermitian_probe(data: &FusionData, seed: usize) -> DMatrix<C64> {
    const PRIMES: [f64; 12] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0];
    let r = data.rank();
    let mut h = DMatrix::<C64>::zeros(r, r);
    for i in 1..r {
        let a = PRIMES[(i + seed) % 12].sqrt() / (1.0 + i as f64);
        let b = PRIMES[(i + 2 * seed + 5) % 12].sqrt().fract() + 0.5;
        for x in 0..r {
            for y in 0..r {
                let l = data.n(i, y, x) as f64;
                let lt = data.n(i, x, y) as f64;
                h[(x, y)] += C64::new(a * (l + lt), b * (l - lt));
            }
        }
    }
    h
}

pub fn character_table(data: &FusionData) -> Result<CharacterTable> {
    if !data.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let r = data.rank();
    let mats: Vec<DMatrix<C64>> = (0..r)
        .map(|i| DMatrix::from_fn(r, r, |x, y| C64::new(data.n(i, y, x) as f64, 0.0)))
        .collect();
    for seed in 0..8 {
        let eig = hermitian_probe(data, seed).symmetric_eigen();
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let scale = ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if ev.windows(2).any(|w| w[1] - w[0] < 1e-6 * scale) {
            continue;
        }
        let mut columns: Vec<Vec<C64>> = Vec::new();
        let mut ok = true;
        for j in 0..r {
            let v = eig.eigenvectors.column(j).into_owned();
            let norm = v.dotc(&v);
            let col: Vec<C64> = mats.iter().map(|m| v.dotc(&(m * &v)) / norm).collect();
            for (m, &l) in mats.iter().zip(&col) {
                let resid = (m * &v - &v * l).norm();
                if resid > 1e-8 * (1.0 + l.norm()) * v.norm() {
                    ok = false;
                }
            }
            columns.push(col);
        }
        if !ok {
            continue;
        }
        let codeg = |c: &Vec<C64>| -> f64 { (0..r).map(|i| (c[i] * c[data.dual(i)]).re).sum() };
        columns.sort_by(|a, b| {
            codeg(b).partial_cmp(&codeg(a)).unwrap().then_with(|| {
                for i in 0..r {
                    let (x, y) = (a[i], b[i]);
                    if (x.re - y.re).abs() > 1e-9 {
                        return y.re.partial_cmp(&x.re).unwrap();
                    }
                    if (x.im - y.im).abs() > 1e-9 {
                        return y.im.partial_cmp(&x.im).unwrap();
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        let codegrees: Vec<f64> = columns.iter().map(codeg).collect();
        let values: Vec<Vec<C64>> = (0..r).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        let exact = exact_table(data, &values);
        return Ok(CharacterTable { values, codegrees, exact });
    }
    Err(Error::PrecisionExhausted("could not separate the characters".into()))
}

fn exact_table(data: &FusionData, values: &[Vec<C64>]) -> Option<Vec<Vec<i64>>> {
    let r = data.rank();
    let ints: Vec<Vec<i64>> = values
        .iter()
        .map(|row| {
            row.iter()
                .map(|z| (z.im.abs() < 1e-9 && (z.re - z.re.round()).abs() < 1e-9).then_some(z.re.round() as i64))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<_>>()?;
    for col in 0..r {
        for i in 0..r {
            for j in 0..r {
                let s: i64 = (0..r).map(|k| data.n(i, j, k) as i64 * ints[k][col]).sum();
                if s != ints[i][col] * ints[j][col] {
                    return None;
                }
            }
        }
    }
    Some(ints)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsaacsReport {
    pub isaacs: bool,
    /// Failing `(row, column)`, zero-indexed, with the ratio when it is rational.
    pub witness: Option<(usize, usize, Option<Ratio<i64>>)>,
}

/// Checks that every `λ_ij c_1 / (d_i c_j)` is an algebraic integer.
pub fn is_isaacs(data: &FusionData) -> Result<IsaacsReport> {
    let table = character_table(data)?;
    let d = data.integral_dims()?;
    let r = data.rank();
    if let Some(t) = &table.exact {
        let c: Vec<i64> = (0..r).map(|j| (0..r).map(|i| t[i][j] * t[data.dual(i)][j]).sum()).collect();
        for i in 0..r {
            for j in 0..r {
                let q = Ratio::new(t[i][j] * c[0], d[i] as i64 * c[j]);
                if !q.is_integer() {
                    return Ok(IsaacsReport { isaacs: false, witness: Some((i, j, Some(q))) });
                }
            }
        }
        return Ok(IsaacsReport { isaacs: true, witness: None });
    }
    // Column j of the table is the eigenline of L_i L_Z⁻¹ for the eigenvalue
    // λ_ij/c_j, so the ratios of row i are exactly the eigenvalues of
    // (c_1/d_i) L_i L_Z⁻¹: all are algebraic integers iff its characteristic
    // polynomial has integer coefficients.
    let c1 = BigInt::from(d.iter().map(|x| x * x).sum::<u64>());
    let lz_inv = inverse(&central_matrix(data)).ok_or(Error::PrecisionExhausted("singular L_Z".into()))?;
    for i in 0..r {
        let li = data.left_matrix(i);
        let scale = BigRational::new(c1.clone(), BigInt::from(d[i]));
        let m: Vec<Vec<BigRational>> = (0..r)
            .map(|x| {
                (0..r)
                    .map(|y| (0..r).map(|t| BigRational::from_integer(li[x][t].into()) * &lz_inv[t][y]).sum::<BigRational>() * &scale)
                    .collect()
            })
            .collect();
        if charpoly_rational(&m).iter().any(|c| !c.is_integer()) {
            let j = (0..r)
                .find(|&j| {
                    let z = table.values[i][j] * table.codegrees[0] / (d[i] as f64 * table.codegrees[j]);
                    z.im.abs() < 1e-9 && (z.re - z.re.round()).abs() > 1e-6
                })
                .unwrap_or(0);
            return Ok(IsaacsReport { isaacs: false, witness: Some((i, j, None)) });
        }
    }
    Ok(IsaacsReport { isaacs: true, witness: None })
}

pub const DEFAULT_POSITIVITY_CAP: u32 = 3;
/// Eigenvalues down to `−PSD_TOLERANCE·‖S‖` count as nonnegative.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// The primary n-criterion: `Σ_i d_i^{2−n} M_i^{⊗n}` is positive semidefinite.
pub fn n_positivity(data: &FusionData, n: u32) -> Result<bool> {
    n_positivity_with_cap(data, n, DEFAULT_POSITIVITY_CAP)
}

pub fn n_positivity_with_cap(data: &FusionData, n: u32, cap: u32) -> Result<bool> {
    Ok(positivity_margin(data, n, cap)? >= 0.0)
}

/// Smallest eigenvalue of `S_n` divided by its spectral norm, with values in
/// `[−PSD_TOLERANCE, 0)` clamped to zero.
pub fn positivity_margin(data: &FusionData, n: u32, cap: u32) -> Result<f64> {
    if n == 0 || n > cap {
        return Err(Error::CapExceeded(format!("n = {n} outside 1..={cap}")));
    }
    let clamp = |x: f64| if (-PSD_TOLERANCE..0.0).contains(&x) { 0.0 } else { x };
    if data.is_commutative() {
        if let Ok(table) = character_table(data) {
            if let (Some(t), Ok(d)) = (&table.exact, data.integral_dims()) {
                return Ok(clamp(exact_schur_margin(t, &d, n)));
            }
            let d = data.fpdims()?.values;
            let vals = schur_sums(data.rank(), n, |i, cols| {
                let mut z = C64::new(d[i].powi(2 - n as i32), 0.0);
                for &c in cols {
                    z *= table.values[i][c];
                }
                z
            });
            let norm = vals.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let min = vals.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            return Ok(clamp(min / norm));
        }
    }
    Ok(clamp(dense_positivity_margin(data, n)?))
}

fn schur_sums(r: usize, n: u32, term: impl Fn(usize, &[usize]) -> C64) -> Vec<C64> {
    let total = r.pow(n);
    (0..total)
        .map(|mut idx| {
            let mut cols = Vec::with_capacity(n as usize);
            for _ in 0..n {
                cols.push(idx % r);
                idx /= r;
            }
            (0..r).map(|i| term(i, &cols)).sum()
        })
        .collect()
}

fn exact_schur_margin(t: &[Vec<i64>], d: &[u64], n: u32) -> f64 {
    let r = d.len();
    let mut min: Option<Ratio<i128>> = None;
    let mut norm = 0f64;
    for mut idx in 0..r.pow(n) {
        let mut cols = Vec::new();
        for _ in 0..n {
            cols.push(idx % r);
            idx /= r;
        }
        let mut s = Ratio::<i128>::zero();
        for i in 0..r {
            let prod: i128 = cols.iter().map(|&c| t[i][c] as i128).product();
            let di = d[i] as i128;
            s += if n <= 2 { Ratio::from_integer(prod * di.pow(2 - n)) } else { Ratio::new(prod, di.pow(n - 2)) };
        }
        norm = norm.max(s.to_f64().unwrap_or(0.0).abs());
        min = Some(match min {
            Some(m) if m <= s => m,
            _ => s,
        });
    }
    let m = min.unwrap_or_else(Ratio::zero);
    if m >= Ratio::zero() {
        0.0_f64.max(m.to_f64().unwrap_or(0.0) / norm.max(1.0))
    } else {
        // exact negative: never clamp
        (m.to_f64().unwrap_or(-1.0) / norm.max(1.0)).min(-2.0 * PSD_TOLERANCE)
    }
}

/// `λ_min(S_n)/‖S_n‖` from the dense Kronecker power, without any shortcut.
pub fn dense_positivity_margin(data: &FusionData, n: u32) -> Result<f64> {
    let r = data.rank();
    let dim = r.pow(n);
    if dim > 4096 {
        return Err(Error::CapExceeded(format!("Kronecker power of size {dim}")));
    }
    let d = data.fpdims()?.values;
    let mut s = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..r {
        let w = d[i].powi(2 - n as i32);
        let m = data.left_matrix(i);
        let mut kron = DMatrix::<f64>::from_element(1, 1, w);
        for _ in 0..n {
            let mi = DMatrix::from_fn(r, r, |x, y| m[x][y] as f64);
            kron = kron.kronecker(&mi);
        }
        s += kron;
    }
    let eig = s.symmetric_eigen();
    let norm = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(min / norm.max(1.0))
}

/// Divisibility helper shared with the pipelines.
pub fn divides_all(g: u64, xs: &[u64]) -> bool {
    xs.iter().all(|&x| x != 0 && g.is_multiple_of(x))
}
