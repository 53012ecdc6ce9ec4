//! Group specifications and enumeration of permutation groups.
//!
//! Grammar (points in cycle notation are 1-based):
//!
//! ```text
//! spec   := C(n) | D(n) | S(n) | A(n)
//!         | SemiDirect(C(n), C(m), k)        x -> x+1 and x -> k·x on Z/n
//!         | Direct(spec, spec, ...)
//!         | perm (',' perm)*                  e.g. (1,2,3)(4,5), (1,2)
//! perm   := '()' | cycle+
//! cycle  := '(' point ((','|' ') point)* ')'
//! ```
//!
//! `D(n)` is the dihedral group of order `2n`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::grouptheory::group::Group;

pub type Perm = Vec<u16>;

pub const DEFAULT_ORDER_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    Symmetric(u32),
    Alternating(u32),
    SemiDirect { n: u32, m: u32, k: u32 },
    Direct(Vec<GroupSpec>),
    Generators(Vec<Perm>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C({n})"),
            GroupSpec::Dihedral(n) => write!(f, "D({n})"),
            GroupSpec::Symmetric(n) => write!(f, "S({n})"),
            GroupSpec::Alternating(n) => write!(f, "A({n})"),
            GroupSpec::SemiDirect { n, m, k } => write!(f, "SemiDirect(C({n}), C({m}), {k})"),
            GroupSpec::Direct(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "Direct({})", inner.join(", "))
            }
            GroupSpec::Generators(gens) => {
                let inner: Vec<String> = gens.iter().map(|g| cycle_notation(g)).collect();
                write!(f, "{}", inner.join(", "))
            }
        }
    }
}

/// `(1,2,3)(4,5)`; the identity is `()`.
pub fn cycle_notation(p: &[u16]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(&cyc.join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

fn parse_err(msg: impl Into<String>, column: usize) -> Error {
    Error::Parse { line: 1, column, message: msg.into() }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(parse_err(format!("expected '{}'", c as char), self.pos + 1))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| parse_err("expected a number", start + 1))
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        self.ws();
        if self.s.get(self.pos) == Some(&b'(') {
            return self.generators();
        }
        let col = self.pos + 1;
        let name = self.ident();
        self.expect(b'(')?;
        let spec = match name.as_str() {
            "C" => GroupSpec::Cyclic(self.number()?),
            "D" => GroupSpec::Dihedral(self.number()?),
            "S" => GroupSpec::Symmetric(self.number()?),
            "A" => GroupSpec::Alternating(self.number()?),
            "SemiDirect" => {
                let n = self.cyclic_arg()?;
                self.expect(b',')?;
                let m = self.cyclic_arg()?;
                self.expect(b',')?;
                let k = self.number()?;
                GroupSpec::SemiDirect { n, m, k }
            }
            "Direct" => {
                let mut parts = vec![self.spec()?];
                while self.eat(b',') {
                    parts.push(self.spec()?);
                }
                GroupSpec::Direct(parts)
            }
            _ => return Err(parse_err(format!("unknown constructor '{name}'"), col)),
        };
        self.expect(b')')?;
        Ok(spec)
    }

    fn cyclic_arg(&mut self) -> Result<u32> {
        let col = self.pos + 1;
        if self.ident() != "C" {
            return Err(parse_err("SemiDirect takes C(n), C(m), k", col));
        }
        self.expect(b'(')?;
        let n = self.number()?;
        self.expect(b')')?;
        Ok(n)
    }

    fn generators(&mut self) -> Result<GroupSpec> {
        let mut gens: Vec<Vec<Vec<u32>>> = Vec::new();
        loop {
            let mut cycles = Vec::new();
            while self.eat(b'(') {
                let mut cyc = Vec::new();
                self.ws();
                while self.s.get(self.pos) != Some(&b')') {
                    cyc.push(self.number()?);
                    self.eat(b',');
                    self.ws();
                }
                self.expect(b')')?;
                cycles.push(cyc);
                self.ws();
                if self.s.get(self.pos) != Some(&b'(') {
                    break;
                }
            }
            gens.push(cycles);
            if !(self.eat(b',') || self.eat(b';')) {
                break;
            }
        }
        let degree = gens.iter().flatten().flatten().copied().max().unwrap_or(1) as usize;
        let mut perms = Vec::new();
        for cycles in gens {
            let mut p: Perm = (0..degree as u16).collect();
            let mut moved = vec![false; degree];
            for cyc in cycles {
                for (i, &x) in cyc.iter().enumerate() {
                    if x == 0 {
                        return Err(parse_err("points are 1-based", self.pos));
                    }
                    let x = x as usize - 1;
                    if moved[x] {
                        return Err(parse_err(format!("point {} repeated", x + 1), self.pos));
                    }
                    moved[x] = true;
                    p[x] = (cyc[(i + 1) % cyc.len()] - 1) as u16;
                }
            }
            perms.push(p);
        }
        Ok(GroupSpec::Generators(perms))
    }
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { s: text.as_bytes(), pos: 0 };
        let spec = p.spec()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(parse_err("trailing input", p.pos + 1));
        }
        Ok(spec)
    }

    /// Degree and generators of the natural permutation action.
    pub fn generators(&self) -> Result<(usize, Vec<Perm>)> {
        let cycle = |n: usize| -> Perm { (0..n).map(|i| ((i + 1) % n) as u16).collect() };
        let transposition = |n: usize, a: usize, b: usize| -> Perm {
            let mut p: Perm = (0..n as u16).collect();
            p.swap(a, b);
            p
        };
        Ok(match self {
            GroupSpec::Cyclic(n) => {
                let n = (*n).max(1) as usize;
                (n, vec![cycle(n)])
            }
            GroupSpec::Dihedral(n) => match *n {
                0 => return Err(Error::InvalidAction("D(0)".into())),
                1 => GroupSpec::Cyclic(2).generators()?,
                2 => GroupSpec::Direct(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(2)]).generators()?,
                n => {
                    let n = n as usize;
                    let refl: Perm = (0..n).map(|i| ((n - i) % n) as u16).collect();
                    (n, vec![cycle(n), refl])
                }
            },
            GroupSpec::Symmetric(n) => {
                let n = (*n).max(1) as usize;
                if n < 3 {
                    (n, vec![cycle(n)])
                } else {
                    (n, vec![transposition(n, 0, 1), cycle(n)])
                }
            }
            GroupSpec::Alternating(n) => {
                let n = (*n).max(1) as usize;
                if n < 3 {
                    (n, vec![(0..n as u16).collect()])
                } else {
                    let three: Perm = {
                        let mut p: Perm = (0..n as u16).collect();
                        p[0] = 1;
                        p[1] = 2;
                        p[2] = 0;
                        p
                    };
                    // An (n-1)- or n-cycle, whichever is even.
                    let long: Perm = if n % 2 == 1 {
                        cycle(n)
                    } else {
                        (0..n).map(|i| if i == 0 { 0 } else { (i % (n - 1) + 1) as u16 }).collect()
                    };
                    (n, vec![three, long])
                }
            }
            GroupSpec::SemiDirect { n, m, k } => {
                let (n, m, k) = (*n as u64, *m as u64, *k as u64);
                if n == 0 || m == 0 {
                    return Err(Error::InvalidAction("SemiDirect needs positive orders".into()));
                }
                if num_integer::gcd(k % n.max(1), n) != 1 && n > 1 || pow_mod(k, m, n) != 1 % n {
                    return Err(Error::InvalidAction(format!(
                        "{k} is not a unit of multiplicative order dividing {m} modulo {n}"
                    )));
                }
                // Z/n, plus an m-cycle so the action stays faithful when k has order < m.
                let deg = (n + m) as usize;
                let mut a: Perm = (0..deg as u16).collect();
                let mut b: Perm = (0..deg as u16).collect();
                for x in 0..n {
                    a[x as usize] = ((x + 1) % n) as u16;
                    b[x as usize] = ((x * k) % n) as u16;
                }
                for y in 0..m {
                    b[(n + y) as usize] = (n + (y + 1) % m) as u16;
                }
                (deg, vec![a, b])
            }
            GroupSpec::Direct(parts) => {
                let pieces: Vec<(usize, Vec<Perm>)> = parts.iter().map(|p| p.generators()).collect::<Result<_>>()?;
                let deg: usize = pieces.iter().map(|p| p.0).sum();
                let mut gens = Vec::new();
                let mut offset = 0;
                for (d, gs) in pieces {
                    for g in gs {
                        let mut p: Perm = (0..deg as u16).collect();
                        for x in 0..d {
                            p[offset + x] = (offset + g[x] as usize) as u16;
                        }
                        gens.push(p);
                    }
                    offset += d;
                }
                (deg.max(1), gens)
            }
            GroupSpec::Generators(gens) => {
                let deg = gens.iter().map(|g| g.len()).max().unwrap_or(1).max(1);
                let padded = gens
                    .iter()
                    .map(|g| (0..deg).map(|x| if x < g.len() { g[x] } else { x as u16 }).collect())
                    .collect();
                (deg, padded)
            }
        })
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// A permutation group together with its full multiplication table.
#[derive(Debug, Clone)]
pub struct PermGroup {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
    /// Element 0 is the identity; elements are listed in breadth-first order from the
    /// generators.
    pub elements: Vec<Perm>,
    pub table: Group,
}

impl PermGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &[u16]) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }
}

/// `x -> q(p(x))`: apply `p` first.
pub fn compose(p: &[u16], q: &[u16]) -> Perm {
    p.iter().map(|&x| q[x as usize]).collect()
}

const MAX_BASE: usize = 16;
type BaseKey = [u16; MAX_BASE];

pub fn enumerate_group(spec: &GroupSpec, cap: usize) -> Result<PermGroup> {
    let (degree, generators) = spec.generators()?;
    let generators: Vec<Perm> = generators.into_iter().filter(|g| g.iter().enumerate().any(|(i, &x)| x as usize != i)).collect();
    let identity: Perm = (0..degree as u16).collect();
    let mut elements = vec![identity.clone()];
    let mut seen: HashMap<Perm, u32> = HashMap::new();
    seen.insert(identity, 0);
    let mut head = 0;
    while head < elements.len() {
        for g in &generators {
            let y = compose(&elements[head], g);
            if !seen.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded(format!("{spec} has order > {cap}")));
                }
                seen.insert(y.clone(), elements.len() as u32);
                elements.push(y);
            }
        }
        head += 1;
    }
    drop(seen);

    // A base: points whose images already separate all elements.
    let n = elements.len();
    let mut base = Vec::new();
    let mut distinct = 1;
    for pt in 0..degree {
        if distinct == n {
            break;
        }
        let mut trial = base.clone();
        trial.push(pt);
        let keys: std::collections::HashSet<Vec<u16>> = elements.iter().map(|e| trial.iter().map(|&b| e[b]).collect()).collect();
        if keys.len() > distinct {
            distinct = keys.len();
            base = trial;
        }
    }
    if base.len() > MAX_BASE {
        return Err(Error::CapExceeded(format!("base of length {} for {spec}", base.len())));
    }
    let key = |images: &mut dyn Iterator<Item = u16>| -> BaseKey {
        let mut k = [0u16; MAX_BASE];
        for (slot, v) in k.iter_mut().zip(images) {
            *slot = v;
        }
        k
    };
    let lookup: HashMap<BaseKey, u32> =
        elements.iter().enumerate().map(|(i, e)| (key(&mut base.iter().map(|&b| e[b])), i as u32)).collect();
    let mut mul = vec![0u16; n * n];
    for i in 0..n {
        for j in 0..n {
            let k = key(&mut base.iter().map(|&b| elements[j][elements[i][b] as usize]));
            mul[i * n + j] = lookup[&k] as u16;
        }
    }
    let table = Group::from_table(n, mul);
    Ok(PermGroup { name: spec.to_string(), degree, generators, elements, table })
}
