//! Simple objects of the group-theoretical category `C(G, 1, H, 1)`: pairs of a double
//! coset `HgH` and an irreducible representation of `H ∩ gHg⁻¹`.

use serde::Serialize;

use crate::enumerate::canonical_duality;
use crate::error::{Error, Result};
use crate::grouptheory::characters::{character_table, field_prime, CharacterTable};
use crate::grouptheory::group::{Group, Subgroup};
use crate::ring::TypeVector;

#[derive(Debug, Clone)]
pub struct DoubleCoset {
    pub representative: usize,
    pub size: usize,
    /// `H ∩ gHg⁻¹`.
    pub stabilizer: Subgroup,
    /// `[H : H ∩ gHg⁻¹]`.
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct DoubleCosetData {
    /// The coset of the identity first, then by smallest element.
    pub cosets: Vec<DoubleCoset>,
    /// `coset_of[x]` for every group element.
    pub coset_of: Vec<usize>,
}

pub fn double_cosets(g: &Group, h: &Subgroup) -> DoubleCosetData {
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let members = g.double_coset(h, x);
        for &y in &members {
            coset_of[y as usize] = cosets.len();
        }
        let xinv = g.inv(x);
        let stab: Vec<u16> = h.elements.iter().copied().filter(|&y| h.contains(g.mul(g.mul(xinv, y as usize), x))).collect();
        let stabilizer = g.subgroup_from_elements(stab);
        cosets.push(DoubleCoset { representative: x, size: members.len(), index: h.order() / stabilizer.order(), stabilizer });
    }
    debug_assert_eq!(cosets.iter().map(|c| c.size).sum::<usize>(), n);
    DoubleCosetData { cosets, coset_of }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupTheoreticalData {
    #[serde(rename = "type")]
    pub ty: Vec<u64>,
    pub duality: Vec<usize>,
    /// Some stabilizer fails the trivial-Schur-multiplier screen (square-free order, abelian,
    /// or all Sylow subgroups cyclic). The type is still that of the untwisted category, but
    /// twisted variants may differ.
    pub cocycle_sensitive: bool,
}

struct Objects {
    data: DoubleCosetData,
    tables: Vec<CharacterTable>,
    /// `(coset, character, dimension)`, sorted by dimension.
    objects: Vec<(usize, usize, u64)>,
}

fn objects(g: &Group, h: &Subgroup) -> Result<Objects> {
    let data = double_cosets(g, h);
    let p = field_prime(g.exponent(), g.order() as u64);
    let tables: Vec<CharacterTable> =
        data.cosets.iter().map(|c| character_table(g, &c.stabilizer, p)).collect::<Result<_>>()?;
    let mut objects = Vec::new();
    for (ci, c) in data.cosets.iter().enumerate() {
        for (chi, &d) in tables[ci].degrees.iter().enumerate() {
            objects.push((ci, chi, c.index as u64 * d));
        }
    }
    objects.sort_by_key(|o| o.2);
    Ok(Objects { data, tables, objects })
}

fn cocycle_sensitive(g: &Group, data: &DoubleCosetData) -> bool {
    data.cosets.iter().any(|c| {
        let k = &c.stabilizer;
        let square_free = crate::linalg::prime_factors(k.order() as u128).iter().product::<u128>() == k.order() as u128;
        !(square_free || g.is_abelian(k) || g.sylows_cyclic(k))
    })
}

/// Dimensions `[H : H^g]·dim ρ`, ascending.
pub fn group_theoretical_type(g: &Group, h: &Subgroup) -> Result<Vec<u64>> {
    Ok(objects(g, h)?.objects.into_iter().map(|o| o.2).collect())
}

/// Number of simple objects, from class counts alone.
pub fn group_theoretical_rank(g: &Group, h: &Subgroup) -> usize {
    double_cosets(g, h).cosets.iter().map(|c| g.classes_of(&c.stabilizer).len()).sum()
}

pub fn group_theoretical(g: &Group, h: &Subgroup) -> Result<GroupTheoreticalData> {
    let Objects { data, tables, objects } = objects(g, h)?;
    let label = |coset: usize, chi: usize| objects.iter().position(|o| o.0 == coset && o.1 == chi).unwrap();
    let p = tables[0].p;
    let mut dual = vec![usize::MAX; objects.len()];
    for (i, &(ci, chi, _)) in objects.iter().enumerate() {
        let x = data.cosets[ci].representative;
        let xinv = g.inv(x);
        let cj = data.coset_of[xinv];
        let y = data.cosets[cj].representative;
        // x⁻¹ = a·y·b with a, b ∈ H; then H^{x⁻¹} = a H^y a⁻¹.
        let a = h
            .elements
            .iter()
            .map(|&a| a as usize)
            .find(|&a| h.contains(g.mul(g.inv(y), g.mul(g.inv(a), xinv))))
            .ok_or_else(|| Error::CharacterMatchFailed(format!("no transporter for coset {cj}")))?;
        let xa = g.mul(x, a);
        let table = &tables[ci];
        let target = &tables[cj];
        // ν(k) = ρ(x a k⁻¹ a⁻¹ x⁻¹), the dual of ρ carried over to H^y.
        let nu: Vec<u64> = target
            .classes
            .iter()
            .map(|class| {
                let k = class[0] as usize;
                let z = g.mul(g.mul(xa, g.inv(k)), g.inv(xa));
                if table.class_of[z] == usize::MAX {
                    Err(Error::CharacterMatchFailed(format!("transported element leaves the stabilizer of coset {ci}")))
                } else {
                    Ok(table.value(chi, z))
                }
            })
            .collect::<Result<_>>()?;
        let nu_chi = target
            .find(&nu)
            .ok_or_else(|| Error::CharacterMatchFailed(format!("dual of object ({ci}, {chi}) matches no unique character mod {p}")))?;
        dual[i] = label(cj, nu_chi);
    }
    if (0..dual.len()).any(|i| dual[dual[i]] != i || objects[dual[i]].2 != objects[i].2) || dual[0] != 0 {
        return Err(Error::CharacterMatchFailed("duality is not a dimension-preserving involution".into()));
    }
    let ty: Vec<u64> = objects.iter().map(|o| o.2).collect();
    let duality = canonical_duality(&TypeVector::new(ty.clone())?, &dual);
    Ok(GroupTheoreticalData { ty, duality, cocycle_sensitive: cocycle_sensitive(g, &data) })
}
