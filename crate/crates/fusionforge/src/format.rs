//! Text and JSONL catalog records.
//!
//! Text: `FPdim 6; type [1,1,2]; duality [0,1,2]; N = [[[..],..],..]`, one ring per
//! line. Lines starting with `#` are comments; `# key: value` comments attach to
//! the next record as annotations.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{format_real, FusionData};

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub ring: FusionData,
    pub annotations: BTreeMap<String, String>,
}

impl Record {
    pub fn new(ring: FusionData) -> Self {
        Record { ring, annotations: BTreeMap::new() }
    }

    pub fn annotation(&self, key: &str) -> Option<&str> {
        self.annotations.get(key).map(|s| s.as_str())
    }
}

fn list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(","))
}

pub fn render(ring: &FusionData) -> String {
    let (fp, ty) = match ring.fpdims() {
        Ok(d) => match &d.integral {
            Some(i) => (i.iter().map(|x| x * x).sum::<u64>().to_string(), list(i)),
            None => (format_real(d.global()), list(d.values.iter().map(|x| format_real(*x)))),
        },
        Err(_) => ("?".to_string(), "[?]".to_string()),
    };
    let tensor = list(ring.nested().into_iter().map(|m| list(m.into_iter().map(list))));
    format!("FPdim {fp}; type {ty}; duality {}; N = {tensor}", list(ring.duality()))
}

pub fn render_record(rec: &Record) -> String {
    let mut out = String::new();
    for (k, v) in &rec.annotations {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out.push_str(&render(&rec.ring));
    out
}

pub fn render_catalog(records: &[Record]) -> String {
    records.iter().map(|r| render_record(r) + "\n").collect::<Vec<_>>().join("\n")
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Minimal bracketed-list reader over a single line.
struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, m: impl Into<String>) -> Error {
        perr(self.line, self.pos + 1, m)
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        self.ws();
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(self.err(format!("expected '{kw}'")))
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && !b",;[] ".contains(&self.s[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a value"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn uint(&mut self) -> Result<u64> {
        let col = self.pos;
        let t = self.token()?;
        t.parse().map_err(|_| perr(self.line, col + 1, format!("not a nonnegative integer: {t}")))
    }

    fn seq<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        self.ws();
        if self.s.get(self.pos) == Some(&b']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            self.ws();
            match self.s.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
    }
}

/// Parses one record line (1-based `line` is used in errors).
pub fn parse_line(text: &str, line: usize) -> Result<FusionData> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0, line };
    c.keyword("FPdim")?;
    let fp_col = c.pos;
    let fp = c.token()?.to_string();
    c.expect(b';')?;
    c.keyword("type")?;
    let ty_col = c.pos;
    let ty: Vec<String> = c.seq(|c| c.token().map(|s| s.to_string()))?;
    c.expect(b';')?;
    c.keyword("duality")?;
    let duality: Vec<usize> = c.seq(|c| c.uint().map(|x| x as usize))?;
    c.expect(b';')?;
    c.keyword("N")?;
    c.expect(b'=')?;
    let nested: Vec<Vec<Vec<u32>>> =
        c.seq(|c| c.seq(|c| c.seq(|c| c.uint().and_then(|x| u32::try_from(x).map_err(|_| c.err("entry too large"))))))?;
    c.ws();
    if c.pos != c.s.len() {
        return Err(c.err("trailing characters"));
    }
    let ring = FusionData::from_nested(duality, &nested).map_err(|e| perr(line, 1, e.to_string()))?;
    // The stated FPdim/type must agree with the tensor.
    let rendered = render(&ring);
    let mut rc = Cursor { s: rendered.as_bytes(), pos: 0, line };
    rc.keyword("FPdim")?;
    let rfp = rc.token()?.to_string();
    rc.expect(b';')?;
    rc.keyword("type")?;
    let rty: Vec<String> = rc.seq(|c| c.token().map(|s| s.to_string()))?;
    if rty != ty {
        return Err(perr(line, ty_col + 1, format!("type {ty:?} disagrees with tensor ({rty:?})")));
    }
    if rfp != fp {
        return Err(perr(line, fp_col + 1, format!("FPdim {fp} disagrees with tensor ({rfp})")));
    }
    Ok(ring)
}

pub fn parse_catalog(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut pending = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('#') {
            if let Some((k, v)) = c.split_once(':') {
                let k = k.trim();
                if !k.is_empty() && !k.contains(' ') {
                    pending.insert(k.to_string(), v.trim().to_string());
                }
            }
            continue;
        }
        if l.starts_with('{') {
            let ring = parse_json(l, idx + 1)?;
            out.push(Record { ring, annotations: std::mem::take(&mut pending) });
            continue;
        }
        let ring = parse_line(l, idx + 1)?;
        out.push(Record { ring, annotations: std::mem::take(&mut pending) });
    }
    Ok(out)
}

pub fn to_json(ring: &FusionData) -> Value {
    let (ty, flags) = match ring.summarize() {
        Ok(s) => (
            match &s.integral_dims {
                Some(d) => json!(d),
                None => json!(s.dims),
            },
            json!({
                "commutative": s.commutative,
                "pointed": s.pointed,
                "perfect": s.perfect,
                "simple": s.simple,
                "one_frobenius": s.one_frobenius,
                "mnsd": s.mnsd,
                "multiplicity": s.multiplicity,
            }),
        ),
        Err(_) => (Value::Null, Value::Null),
    };
    json!({
        "rank": ring.rank(),
        "type": ty,
        "duality": ring.duality(),
        "tensor": ring.nested(),
        "flags": flags,
    })
}

pub fn parse_json(text: &str, line: usize) -> Result<FusionData> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(line, e.column(), e.to_string()))?;
    let duality: Vec<usize> = serde_json::from_value(v["duality"].clone()).map_err(|e| perr(line, 1, e.to_string()))?;
    let tensor: Vec<Vec<Vec<u32>>> =
        serde_json::from_value(v["tensor"].clone()).map_err(|e| perr(line, 1, e.to_string()))?;
    FusionData::from_nested(duality, &tensor).map_err(|e| perr(line, 1, e.to_string()))
}
