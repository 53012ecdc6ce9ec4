//! Shared pieces of the `fusionforge` command: catalog I/O, ring analysis reports, and
//! catalog diffs.

use std::collections::BTreeMap;
use std::path::Path;

use fusionforge::enumerate::canonical_form;
use fusionforge::format::{parse_catalog, parse_json, render, to_json, Record};
use fusionforge::spectra::{
    codegree_profile, is_drinfeld, is_isaacs, is_s_frobenius, n_positivity, parse_notation, prime_support_check,
    trace_bound,
};
use fusionforge::{Error, FusionData};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Timeout { .. } => EXIT_INCOMPLETE,
        Error::Parse { .. } | Error::InvalidAction(_) | Error::DimensionMismatch(_) | Error::NonIntegralInput => EXIT_USAGE,
        _ => EXIT_MISMATCH,
    }
}

/// `FUSIONFORGE_BUDGET`, if set and numeric; otherwise `default`.
pub fn budget_from_env(default: u64) -> u64 {
    std::env::var("FUSIONFORGE_BUDGET").ok().and_then(|s| s.trim().replace('_', "").parse().ok()).unwrap_or(default)
}

/// Text catalogs or JSONL (one object per line), detected by the first non-comment line.
pub fn read_catalog_text(text: &str) -> fusionforge::Result<Vec<Record>> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with('{')) {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                let mut rec = Record::new(parse_json(l, i + 1)?);
                if let Ok(Value::Object(obj)) = serde_json::from_str::<Value>(l) {
                    if let Some(Value::String(c)) = obj.get("codegrees") {
                        rec.annotations.insert("codegrees".into(), c.clone());
                    }
                }
                Ok(rec)
            })
            .collect()
    } else {
        parse_catalog(text)
    }
}

pub fn read_catalog(path: &Path) -> anyhow::Result<Vec<Record>> {
    let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(read_catalog_text(&text)?)
}

/// One JSONL line: the ring plus derived data and where it came from.
pub fn catalog_record(ring: &FusionData, provenance: Value) -> Value {
    let mut v = to_json(ring);
    if let Ok(s) = ring.summarize() {
        v["summary"] = json!(s);
    }
    if let Ok(p) = codegree_profile(ring) {
        v["codegrees"] = json!(p.notation());
        v["drinfeld"] = json!(is_drinfeld(&p).0);
    }
    v["provenance"] = provenance;
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    pub index: usize,
    pub ring: String,
    pub valid: Result<(), String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<BTreeMap<String, Value>>,
    /// Annotated properties that disagree with the computed ones.
    pub mismatches: Vec<String>,
}

impl RingReport {
    pub fn ok(&self) -> bool {
        self.valid.is_ok() && self.mismatches.is_empty()
    }

    pub fn text(&self) -> String {
        let mut out = format!("ring {}: {}\n", self.index, self.ring);
        match &self.valid {
            Err(e) => out.push_str(&format!("  valid: no ({e})\n")),
            Ok(()) => out.push_str("  valid: yes\n"),
        }
        if let Some(a) = &self.analysis {
            for (k, v) in a {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    Value::Bool(true) => "yes".into(),
                    Value::Bool(false) => "no".into(),
                    other => other.to_string(),
                };
                out.push_str(&format!("  {k}: {shown}\n"));
            }
        }
        for m in &self.mismatches {
            out.push_str(&format!("  MISMATCH {m}\n"));
        }
        out
    }
}

pub fn analyze_record(index: usize, rec: &Record) -> RingReport {
    let ring = &rec.ring;
    let mut report = RingReport { index, ring: render(ring), valid: Ok(()), analysis: None, mismatches: Vec::new() };
    if let Err(e) = ring.validate() {
        report.valid = Err(e.to_string());
        return report;
    }
    let mut a = BTreeMap::new();
    let mut put = |k: &str, v: Value| {
        a.insert(k.to_string(), v);
    };
    if let Ok(s) = ring.summarize() {
        put("commutative", json!(s.commutative));
        put("pointed", json!(s.pointed));
        put("perfect", json!(s.perfect));
        put("simple", json!(s.simple));
        put("mnsd", json!(s.mnsd));
        put("multiplicity", json!(s.multiplicity));
    }
    put("subrings", json!(ring.fusion_subrings()));
    if let Ok(f) = is_s_frobenius(ring, 1) {
        put("1-frobenius", json!(f));
    }
    match codegree_profile(ring) {
        Ok(p) => {
            put("codegrees", json!(p.notation()));
            let (d, why) = is_drinfeld(&p);
            put("drinfeld", json!(if d { "yes".to_string() } else { format!("no ({why})") }));
            put("trace bound", json!(trace_bound(&p)));
            if let Some(ok) = prime_support_check(&p) {
                put("prime support", json!(ok));
            }
            if let Some(expected) = rec.annotation("codegrees") {
                match parse_notation(expected) {
                    Some(e) if p.integer_blocks().as_ref() == Some(&e) => {}
                    _ => report.mismatches.push(format!("codegrees: computed {}, annotated {expected}", p.notation())),
                }
            }
        }
        Err(e) => put("codegrees", json!(format!("unavailable ({e})"))),
    }
    if ring.is_commutative() {
        if let Ok(r) = is_isaacs(ring) {
            let v = match r.witness {
                None => "yes".to_string(),
                Some((i, j, Some(q))) => format!("no (entry ({i}, {j}) = {q})"),
                Some((i, j, None)) => format!("no (entry ({i}, {j}) is not an algebraic integer)"),
            };
            put("isaacs", json!(v));
        }
    }
    if let Ok(b) = n_positivity(ring, 3) {
        put("3-positive", json!(b));
    }
    report.analysis = Some(a);
    report
}

pub fn analyze(records: &[Record]) -> Vec<RingReport> {
    records.iter().enumerate().map(|(i, r)| analyze_record(i + 1, r)).collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CatalogDiff {
    pub matched: usize,
    /// In the reference catalog but not in the computed one.
    pub missing: Vec<String>,
    /// In the computed catalog but not in the reference.
    pub extra: Vec<String>,
}

impl CatalogDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

fn canonical(ring: &FusionData) -> FusionData {
    canonical_form(ring).unwrap_or_else(|_| ring.clone())
}

/// Multiset difference up to isomorphism.
pub fn diff(computed: &[Record], reference: &[Record]) -> CatalogDiff {
    let mut pool: BTreeMap<String, Vec<&FusionData>> = BTreeMap::new();
    for r in computed {
        pool.entry(render(&canonical(&r.ring))).or_default().push(&r.ring);
    }
    let mut out = CatalogDiff::default();
    for r in reference {
        match pool.get_mut(&render(&canonical(&r.ring))) {
            Some(v) if !v.is_empty() => {
                v.pop();
                out.matched += 1;
            }
            _ => out.missing.push(render(&r.ring)),
        }
    }
    for v in pool.values() {
        out.extra.extend(v.iter().map(|r| render(r)));
    }
    out
}
