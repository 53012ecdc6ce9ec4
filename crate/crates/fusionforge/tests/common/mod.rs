#![allow(dead_code)]

use fusionforge::format::{parse_catalog, Record};

pub const FIXTURES: &[&str] = &[
    "rank_le5.txt",
    "rank6_one_frobenius.txt",
    "rank6_non_one_frobenius.txt",
    "rank7_one_frobenius.txt",
    "rank7_non_one_frobenius.txt",
    "mnsd_rank7.txt",
    "mnsd_rank9.txt",
    "nc_rank6.txt",
    "nc_rank7.txt",
    "nc_rank8.txt",
    "rank8_9_one_frobenius.txt",
    "exotic.txt",
];

pub fn fixture(name: &str) -> Vec<Record> {
    let path = format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_catalog(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn all_fixtures() -> Vec<(String, Record)> {
    FIXTURES.iter().flat_map(|f| fixture(f).into_iter().map(move |r| (f.to_string(), r))).collect()
}

pub fn find(name: &str, ty: &[u64], duality: &[usize]) -> Vec<Record> {
    fixture(name)
        .into_iter()
        .filter(|r| r.ring.duality() == duality && r.ring.integral_dims().unwrap() == ty)
        .collect()
}
