//! Group catalogs (`label | spec` per line, `#` comments) and the search for pairs
//! `(G, H)` whose group-theoretical category has a given type.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouptheory::group::Subgroup;
use crate::grouptheory::perm::{cycle_notation, enumerate_group, GroupSpec, PermGroup, DEFAULT_ORDER_CAP};
use crate::grouptheory::theoretical::{group_theoretical, group_theoretical_rank, group_theoretical_type};
use crate::ring::TypeVector;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: String,
    pub spec: GroupSpec,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

const ORDER_60: &str = include_str!("../../catalogs/order60.txt");
const ORDER_75: &str = include_str!("../../catalogs/order75.txt");
const ORDER_903: &str = include_str!("../../catalogs/order903.txt");

impl Catalog {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (label, spec) = match line.split_once('|') {
                Some((l, s)) => (l.trim().to_string(), s.trim()),
                None => (line.to_string(), line),
            };
            let spec = GroupSpec::parse(spec).map_err(|e| match e {
                Error::Parse { column, message, .. } => Error::Parse { line: i + 1, column, message },
                other => other,
            })?;
            entries.push(CatalogEntry { label, spec });
        }
        Ok(Catalog { entries })
    }

    /// Complete lists of the groups of order 60, 75 and 903.
    pub fn builtin(order: u64) -> Option<Self> {
        let text = match order {
            60 => ORDER_60,
            75 => ORDER_75,
            903 => ORDER_903,
            _ => return None,
        };
        Some(Self::parse(text).expect("built-in catalog parses"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSubgroupMatch {
    pub group: String,
    pub group_order: usize,
    pub subgroup_order: usize,
    /// Generators of `H` as permutations of the points `G` acts on.
    pub subgroup_generators: Vec<String>,
    #[serde(rename = "type")]
    pub ty: Vec<u64>,
    pub duality: Vec<usize>,
    pub cocycle_sensitive: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FindReport {
    pub matches: Vec<GroupSubgroupMatch>,
    /// Catalog entries that could not be processed, with the reason.
    pub skipped: Vec<(String, String)>,
}

pub fn subgroup_generators(g: &PermGroup, h: &Subgroup) -> Vec<String> {
    h.generators.iter().map(|&x| cycle_notation(&g.elements[x as usize])).collect()
}

/// Scans every group of the right order and every subgroup up to conjugacy.
pub fn find_group_subgroup(target: &TypeVector, catalog: &Catalog) -> FindReport {
    let order = target.global_fpdim() as usize;
    let per_group: Vec<std::result::Result<Vec<GroupSubgroupMatch>, (String, String)>> = catalog
        .entries
        .par_iter()
        .map(|entry| {
            let fail = |e: Error| (entry.label.clone(), e.to_string());
            let g = enumerate_group(&entry.spec, DEFAULT_ORDER_CAP.max(order)).map_err(fail)?;
            if g.order() != order {
                return Ok(Vec::new());
            }
            let mut found = Vec::new();
            for h in g.table.subgroups_up_to_conjugacy() {
                if group_theoretical_rank(&g.table, &h) != target.rank() {
                    continue;
                }
                if group_theoretical_type(&g.table, &h).map_err(fail)? != target.dims {
                    continue;
                }
                let data = group_theoretical(&g.table, &h).map_err(fail)?;
                found.push(GroupSubgroupMatch {
                    group: entry.label.clone(),
                    group_order: g.order(),
                    subgroup_order: h.order(),
                    subgroup_generators: subgroup_generators(&g, &h),
                    ty: data.ty,
                    duality: data.duality,
                    cocycle_sensitive: data.cocycle_sensitive,
                });
            }
            Ok(found)
        })
        .collect();
    let mut report = FindReport::default();
    for r in per_group {
        match r {
            Ok(m) => report.matches.extend(m),
            Err(skip) => report.skipped.push(skip),
        }
    }
    report
}

/// Subgroups of `g` (up to conjugacy) that match `spec`: given directly by permutations of
/// `g`'s points, or otherwise by order and element-order statistics.
pub fn locate_subgroup(g: &PermGroup, spec: &GroupSpec) -> Result<Vec<Subgroup>> {
    if let GroupSpec::Generators(gens) = spec {
        let mut idx = Vec::new();
        for p in gens {
            if p.iter().enumerate().skip(g.degree).any(|(x, &y)| y as usize != x) {
                return Err(Error::InvalidAction(format!("{} moves points outside the group", cycle_notation(p))));
            }
            let padded: Vec<u16> = (0..g.degree).map(|x| p.get(x).copied().unwrap_or(x as u16)).collect();
            let i = g
                .index_of(&padded)
                .ok_or_else(|| Error::InvalidAction(format!("{} is not an element of {}", cycle_notation(p), g.name)))?;
            idx.push(i as u16);
        }
        return Ok(vec![g.table.generate(&idx)]);
    }
    let h = enumerate_group(spec, DEFAULT_ORDER_CAP)?;
    let profile = |t: &crate::grouptheory::group::Group, s: &Subgroup| {
        let mut orders: Vec<usize> = s.elements.iter().map(|&x| t.element_order(x as usize)).collect();
        orders.sort_unstable();
        (orders, t.classes_of(s).len())
    };
    let want = profile(&h.table, &h.table.whole());
    Ok(g.table
        .subgroups_up_to_conjugacy()
        .into_iter()
        .filter(|s| s.order() == h.order() && profile(&g.table, s) == want)
        .collect())
}
