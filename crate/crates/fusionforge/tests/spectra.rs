mod common;

use common::{all_fixtures, find};
use fusionforge::spectra::{
    codegree_profile, dense_positivity_margin, is_drinfeld, is_s_frobenius,
    positivity_margin, DEFAULT_POSITIVITY_CAP, is_isaacs, n_positivity, parse_notation, trace_bound,
};
use fusionforge::FusionData;
use num_rational::Ratio;

#[test]
fn fixture_codegrees_match_annotations() {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (file, rec) in all_fixtures() {
        let Some(expected) = rec.annotation("codegrees") else { continue };
        let expected = parse_notation(expected).unwrap();
        match codegree_profile(&rec.ring) {
            Ok(p) if p.integer_blocks().as_ref() == Some(&expected) => checked += 1,
            Ok(p) => failures.push(format!("{file}: {} vs {expected:?}", p.notation())),
            Err(e) => failures.push(format!("{file}: {e} (expected {expected:?})")),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
    assert_eq!(checked, 178);
}

#[test]
fn egyptian_identity_holds_for_all_fixtures() {
    for (file, rec) in all_fixtures() {
        let p = codegree_profile(&rec.ring).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert!(p.egyptian_sum().is_one(), "{file}");
        if p.is_integral() {
            assert!(trace_bound(&p), "{file}: {}", p.notation());
        }
    }
}

#[test]
fn zs3_profile() {
    let rec = &find("nc_rank6.txt", &[1, 1, 1, 1, 1, 1], &[0, 1, 2, 3, 5, 4])[0];
    let p = codegree_profile(&rec.ring).unwrap();
    assert_eq!(p.notation(), "[3_2, 6, 6]");
    assert!(is_drinfeld(&p).0);
}

#[test]
fn rep_s3_is_drinfeld() {
    let s3 = FusionData::from_nested(
        vec![0, 1, 2],
        &[
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
        ],
    )
    .unwrap();
    let p = codegree_profile(&s3).unwrap();
    assert_eq!(p.notation(), "[2, 3, 6]");
    assert!(is_isaacs(&s3).unwrap().isaacs);
    assert!(n_positivity(&s3, 3).unwrap());
}

#[test]
fn isaacs_witness_of_the_rank6_counterexample() {
    let recs = find("rank6_one_frobenius.txt", &[1, 1, 2, 3, 3, 6], &[0, 1, 2, 3, 4, 5]);
    assert_eq!(recs.len(), 1);
    let report = is_isaacs(&recs[0].ring).unwrap();
    assert!(!report.isaacs);
    assert_eq!(report.witness, Some((3, 1, Some(Ratio::new(-8, 3)))));
}

#[test]
fn positivity_and_isaacs_flags_match_annotations() {
    let mut failures = Vec::new();
    for (file, rec) in all_fixtures() {
        let prop = rec.annotation("property").unwrap_or("");
        let non3 = prop.contains("non-3-positive");
        let annotated = !matches!(file.as_str(), "rank_le5.txt" | "exotic.txt" | "mnsd_rank7.txt" | "mnsd_rank9.txt");
        match n_positivity(&rec.ring, 3) {
            Ok(b) if b == !non3 || (!annotated && !b) => {}
            other => failures.push(format!("{file} {:?}: 3-positive {other:?}, annotated {prop}", rec.ring.integral_dims())),
        }
        let one_frobenius = is_s_frobenius(&rec.ring, 1).unwrap_or(false);
        if rec.ring.is_commutative() && one_frobenius && annotated {
            let nonisaacs = prop.contains("non-Isaacs");
            match is_isaacs(&rec.ring) {
                Ok(r) if r.isaacs == !nonisaacs => {}
                other => failures.push(format!("{file} {:?}: Isaacs {other:?}, annotated {prop}", rec.ring.integral_dims())),
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn character_path_agrees_with_dense_kronecker_power() {
    for (file, rec) in all_fixtures() {
        if !rec.ring.is_commutative() || rec.ring.rank() > 8 {
            continue;
        }
        let fast = positivity_margin(&rec.ring, 3, DEFAULT_POSITIVITY_CAP).unwrap();
        let dense = dense_positivity_margin(&rec.ring, 3).unwrap();
        assert_eq!(fast >= 0.0, dense >= -1e-9, "{file} {:?}: {fast} vs {dense}", rec.ring.duality());
    }
    let rec = &find("mnsd_rank9.txt", &[1, 1, 1, 1, 1, 5, 5, 5, 5], &[0, 4, 3, 2, 1, 8, 7, 6, 5])[0];
    assert!(dense_positivity_margin(&rec.ring, 3).unwrap() < -1e-6);
}
