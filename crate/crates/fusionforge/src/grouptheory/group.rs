//! Finite groups as multiplication tables over element indices; index 0 is the identity.

use std::collections::{HashSet, VecDeque};

#[derive(Debug, Clone)]
pub struct Group {
    n: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    /// Sorted element indices.
    pub elements: Vec<u16>,
    pub generators: Vec<u16>,
    mask: Vec<u64>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn mask(&self) -> &[u64] {
        &self.mask
    }
}

impl Group {
    /// `mul[i * n + j]` is the index of `i·j`.
    pub fn from_table(n: usize, mul: Vec<u16>) -> Self {
        assert_eq!(mul.len(), n * n);
        let mut inv = vec![0u16; n];
        for i in 0..n {
            inv[i] = (0..n).find(|&j| mul[i * n + j] == 0).expect("not a group table") as u16;
        }
        let mut g = Group { n, mul, inv, generators: Vec::new() };
        g.generators = g.small_generating_set(&(0..n as u16).collect::<Vec<_>>());
        g
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn generators(&self) -> &[u16] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.n).fold(1u64, |e, a| num_integer::lcm(e, self.element_order(a) as u64))
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_from_sorted((0..self.n as u16).collect(), self.generators.clone())
    }

    pub fn trivial(&self) -> Subgroup {
        self.subgroup_from_sorted(vec![0], Vec::new())
    }

    fn subgroup_from_sorted(&self, elements: Vec<u16>, generators: Vec<u16>) -> Subgroup {
        let mut mask = vec![0u64; self.n.div_ceil(64)];
        for &x in &elements {
            mask[x as usize / 64] |= 1 << (x % 64);
        }
        Subgroup { elements, generators, mask }
    }

    fn closure(&self, gens: &[u16]) -> Vec<u16> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0u16];
        let mut head = 0;
        while head < out.len() {
            let x = out[head] as usize;
            for &g in gens {
                let y = self.mul(x, g as usize);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y as u16);
                }
            }
            head += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn generate(&self, gens: &[u16]) -> Subgroup {
        let gens: Vec<u16> = gens.iter().copied().filter(|&g| g != 0).collect();
        let elements = self.closure(&gens);
        self.subgroup_from_sorted(elements, gens)
    }

    fn small_generating_set(&self, elements: &[u16]) -> Vec<u16> {
        let mut gens = Vec::new();
        let mut cur = vec![false; self.n];
        cur[0] = true;
        for &x in elements {
            if !cur[x as usize] {
                gens.push(x);
                cur.iter_mut().for_each(|c| *c = false);
                for y in self.closure(&gens) {
                    cur[y as usize] = true;
                }
            }
        }
        gens
    }

    /// A subgroup from its (closed) element set.
    pub fn subgroup_from_elements(&self, mut elements: Vec<u16>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let gens = self.small_generating_set(&elements);
        self.subgroup_from_sorted(elements, gens)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut gens = a.generators.clone();
        gens.extend(b.generators.iter().copied().filter(|g| !a.contains(*g as usize)));
        self.generate(&gens)
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let els: Vec<u16> = a.elements.iter().copied().filter(|&x| b.contains(x as usize)).collect();
        self.subgroup_from_elements(els)
    }

    /// `g S g⁻¹`.
    pub fn conjugate(&self, s: &Subgroup, g: usize) -> Subgroup {
        let mut els: Vec<u16> = s.elements.iter().map(|&x| self.conj(x as usize, g) as u16).collect();
        els.sort_unstable();
        let gens = s.generators.iter().map(|&x| self.conj(x as usize, g) as u16).collect();
        self.subgroup_from_sorted(els, gens)
    }

    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for a in 0..self.n {
            let s = self.generate(&[a as u16]);
            if seen.insert(s.mask.clone()) {
                out.push(s);
            }
        }
        out
    }

    /// Every subgroup: cyclic subgroups, then joins with cyclic subgroups until nothing new
    /// appears. Sorted by order, then element list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let cyclic = self.cyclic_subgroups();
        let mut seen: HashSet<Vec<u64>> = cyclic.iter().map(|s| s.mask.clone()).collect();
        let mut all = cyclic.clone();
        let mut i = 0;
        while i < all.len() {
            for c in &cyclic {
                if c.is_subgroup_of(&all[i]) {
                    continue;
                }
                let j = self.join(&all[i], c);
                if seen.insert(j.mask.clone()) {
                    all.push(j);
                }
            }
            i += 1;
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        all
    }

    /// One representative per conjugacy class of subgroups (the one with the smallest
    /// element list), sorted by order.
    pub fn subgroups_up_to_conjugacy(&self) -> Vec<Subgroup> {
        let mut covered: HashSet<Vec<u64>> = HashSet::new();
        let mut out = Vec::new();
        for s in self.subgroups() {
            if covered.contains(&s.mask) {
                continue;
            }
            let orbit = self.conjugacy_orbit(&s);
            let best = orbit.iter().min_by(|a, b| a.elements.cmp(&b.elements)).unwrap().clone();
            covered.extend(orbit.into_iter().map(|x| x.mask));
            out.push(best);
        }
        out
    }

    pub fn conjugacy_orbit(&self, s: &Subgroup) -> Vec<Subgroup> {
        let mut seen = HashSet::new();
        seen.insert(s.mask.clone());
        let mut orbit = vec![s.clone()];
        let mut head = 0;
        while head < orbit.len() {
            for &g in &self.generators {
                let t = self.conjugate(&orbit[head], g as usize);
                if seen.insert(t.mask.clone()) {
                    orbit.push(t);
                }
            }
            head += 1;
        }
        orbit
    }

    /// Conjugacy classes of `k` under conjugation by `k`; the identity class comes first.
    pub fn classes_of(&self, k: &Subgroup) -> Vec<Vec<u16>> {
        let mut done = vec![false; self.n];
        let mut out = Vec::new();
        for &x in &k.elements {
            if done[x as usize] {
                continue;
            }
            done[x as usize] = true;
            let mut class = vec![x];
            let mut head = 0;
            while head < class.len() {
                for &g in &k.generators {
                    let y = self.conj(class[head] as usize, g as usize);
                    if !done[y] {
                        done[y] = true;
                        class.push(y as u16);
                    }
                }
                head += 1;
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }

    pub fn is_abelian(&self, k: &Subgroup) -> bool {
        k.generators.iter().all(|&a| k.generators.iter().all(|&b| self.mul(a as usize, b as usize) == self.mul(b as usize, a as usize)))
    }

    pub fn derived_subgroup(&self, k: &Subgroup) -> Subgroup {
        // The normal closure of generator commutators.
        let mut gens: Vec<u16> = Vec::new();
        for &a in &k.generators {
            for &b in &k.generators {
                let (a, b) = (a as usize, b as usize);
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                gens.push(c as u16);
            }
        }
        let mut d = self.generate(&gens);
        loop {
            let mut extra = Vec::new();
            for &x in &d.generators {
                for &g in &k.generators {
                    let y = self.conj(x as usize, g as usize);
                    if !d.contains(y) {
                        extra.push(y as u16);
                    }
                }
            }
            if extra.is_empty() {
                return d;
            }
            let mut gens = d.generators.clone();
            gens.extend(extra);
            d = self.generate(&gens);
        }
    }

    /// Every Sylow subgroup of `k` is cyclic iff `k` has an element of full prime-power
    /// order for each prime dividing `|k|`.
    pub fn sylows_cyclic(&self, k: &Subgroup) -> bool {
        let n = k.order() as u128;
        crate::linalg::prime_factors(n).into_iter().all(|q| {
            let mut pp = 1u128;
            while n.is_multiple_of(pp * q) {
                pp *= q;
            }
            k.elements.iter().any(|&x| (self.element_order(x as usize) as u128).is_multiple_of(pp))
        })
    }

    /// `H x H` as a sorted element list.
    pub fn double_coset(&self, h: &Subgroup, x: usize) -> Vec<u16> {
        let mut seen = vec![false; self.n];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        let mut out = vec![x as u16];
        while let Some(y) = queue.pop_front() {
            for &g in &h.generators {
                for z in [self.mul(g as usize, y), self.mul(y, g as usize)] {
                    if !seen[z] {
                        seen[z] = true;
                        out.push(z as u16);
                        queue.push_back(z);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/n as a table.
    fn cyclic(n: usize) -> Group {
        let mul = (0..n * n).map(|k| ((k / n + k % n) % n) as u16).collect();
        Group::from_table(n, mul)
    }

    #[test]
    fn cyclic_structure() {
        let g = cyclic(12);
        assert_eq!(g.subgroups().len(), 6);
        assert_eq!(g.exponent(), 12);
        assert!(g.is_abelian(&g.whole()));
        assert_eq!(g.derived_subgroup(&g.whole()).order(), 1);
        assert_eq!(g.classes_of(&g.whole()).len(), 12);
        assert!(g.sylows_cyclic(&g.whole()));
    }
}
