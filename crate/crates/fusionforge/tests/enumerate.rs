mod common;

use std::collections::BTreeSet;

use common::{all_fixtures, find};
use fusionforge::enumerate::pipeline::noncommutative_shapes;
use fusionforge::enumerate::*;
use fusionforge::{Error, TypeVector};
use proptest::prelude::*;

fn counts(divisibility: bool) -> Vec<usize> {
    (1..=5)
        .map(|len| egyptian_fractions(len, &EgyptianOptions { divisibility, ..Default::default() }).len())
        .collect()
}

#[test]
fn egyptian_counts_by_length() {
    assert_eq!(counts(false), vec![1, 1, 3, 14, 147]);
    assert_eq!(counts(true), vec![1, 1, 3, 12, 97]);
}

#[test]
fn length_six_with_divisibility() {
    let sols = egyptian_fractions(6, &EgyptianOptions { divisibility: true, ..Default::default() });
    assert_eq!(sols.len(), 1568);
    let maxima: BTreeSet<u128> = sols.iter().map(|s| s.max()).collect();
    assert_eq!(maxima.len(), 492);
    assert_eq!(*maxima.last().unwrap(), 3263442);
    assert!(sols.iter().all(|s| s.is_exact() && s.has_divisibility()));
}

#[test]
fn sylvester_chain_is_the_largest_length_five_solution() {
    let sols = egyptian_fractions(5, &EgyptianOptions::default());
    assert_eq!(sols.iter().map(|s| s.max()).max(), Some(1806));
    let opts = EgyptianOptions { max_denominator: Some(42), ..Default::default() };
    assert!(egyptian_fractions(5, &opts).iter().all(|s| s.max() <= 42));
}

#[test]
fn types_of_small_fpdims() {
    let t = |n, r| -> Vec<Vec<u64>> {
        types_for_fpdim(n, r, TypeOptions::default()).into_iter().map(|t| t.dims).collect()
    };
    assert_eq!(t(6, 3), vec![vec![1, 1, 2]]);
    assert_eq!(t(12, 4), vec![vec![1, 1, 1, 3]]);
    assert!(t(7, 3).is_empty());
    let ty = TypeVector::new(vec![1, 1, 1, 1, 1, 1]).unwrap();
    // Zero, one or two transpositions, paired from the left.
    assert_eq!(
        duality_candidates(&ty),
        vec![vec![0, 1, 2, 3, 4, 5], vec![0, 2, 1, 3, 4, 5], vec![0, 2, 1, 4, 3, 5]]
    );
}

#[test]
fn pointed_rank_six_gives_z6_and_zs3() {
    let ty = TypeVector::new(vec![1; 6]).unwrap();
    let mut rings = Vec::new();
    for d in duality_candidates(&ty) {
        rings.extend(fusion_data_search(&ty, &d, SearchOptions::default()).unwrap().rings);
    }
    assert_eq!(rings.len(), 2);
    assert_eq!(rings.iter().filter(|r| r.is_commutative()).count(), 1);
}

#[test]
fn type_1126_is_unique() {
    let ty = TypeVector::new(vec![1, 1, 2, 6]).unwrap();
    let rings = fusion_data_search(&ty, &[0, 1, 2, 3], SearchOptions::default()).unwrap().rings;
    assert_eq!(rings.len(), 1);
    let p = fusionforge::spectra::codegree_profile(&rings[0]).unwrap();
    assert_eq!(p.notation(), "[2, 3, 7, 42]");
}

#[test]
fn bad_duality_is_rejected() {
    let ty = TypeVector::new(vec![1, 1, 2]).unwrap();
    let err = fusion_data_search(&ty, &[0, 2, 1], SearchOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidAction(_)));
}

#[test]
fn tiny_budget_times_out() {
    let ty = TypeVector::new(vec![1, 1, 1, 1, 1, 1, 3, 3]).unwrap();
    let err = fusion_data_search(&ty, &[0, 1, 2, 3, 5, 4, 6, 7], SearchOptions { budget: 10, parallel: false }).unwrap_err();
    assert_eq!(err, Error::Timeout { budget: 10 });
}

#[test]
fn search_finds_every_small_fixture_ring() {
    let mut checked = 0;
    for (file, rec) in all_fixtures() {
        let ring = &rec.ring;
        let Ok(dims) = ring.integral_dims() else { continue };
        if ring.rank() > 7 || dims.iter().map(|d| d * d).sum::<u64>() > 2000 {
            continue;
        }
        let ty = TypeVector::new(dims.clone()).unwrap();
        let found = fusion_data_search(&ty, ring.duality(), SearchOptions::default())
            .unwrap_or_else(|e| panic!("{file} {dims:?}: {e}"))
            .rings;
        assert!(found.iter().any(|f| isomorphic(f, ring).unwrap()), "{file}: {dims:?} {:?} not found", ring.duality());
        checked += 1;
    }
    assert!(checked >= 60, "only {checked} fixtures checked");
}

#[test]
fn search_is_deterministic_across_job_counts() {
    let ty = TypeVector::new(vec![1, 1, 1, 1, 1, 1, 3, 3]).unwrap();
    let d = [0, 1, 2, 3, 5, 4, 6, 7];
    let seq = fusion_data_search(&ty, &d, SearchOptions { parallel: false, ..Default::default() }).unwrap();
    let par = fusion_data_search(&ty, &d, SearchOptions { parallel: true, ..Default::default() }).unwrap();
    assert_eq!(seq.rings, par.rings);
    assert_eq!(seq.rings.len(), 2);
}

#[test]
fn rank_at_most_five_pipeline() {
    let mut total = StageCounts::default();
    for r in 1..=5 {
        let rep = classify(&ClassifyOptions::new(r));
        assert_eq!(rep.counts.incomplete, 0);
        total.types += rep.counts.types;
        total.admitting_types += rep.counts.admitting_types;
        total.rings += rep.counts.rings;
        total.drinfeld += rep.counts.drinfeld;
    }
    assert_eq!((total.types, total.admitting_types, total.rings, total.drinfeld), (219, 27, 36, 29));
}

#[test]
fn rank_six_noncommutative_pipeline() {
    let mut o = ClassifyOptions::new(6);
    o.noncommutative = true;
    let rep = classify(&o);
    assert_eq!(rep.counts.fractions, 4);
    assert_eq!(rep.rings.len(), 1);
    let zs3 = &rep.rings[0];
    assert!(zs3.drinfeld);
    assert_eq!(zs3.codegrees.as_deref(), Some("[3_2, 6, 6]"));
    assert!(find("nc_rank6.txt", &[1; 6], &[0, 1, 2, 3, 5, 4]).iter().any(|r| isomorphic(&r.ring, &zs3.ring).unwrap()));
}

#[test]
fn rank_seven_noncommutative_drinfeld_rings() {
    let mut o = ClassifyOptions::new(7);
    o.noncommutative = true;
    o.drinfeld_only = true;
    let rep = classify(&o);
    assert_eq!(rep.counts.fpdims, 22);
    let got: BTreeSet<String> = rep.rings.iter().filter_map(|c| c.codegrees.clone()).collect();
    let want: BTreeSet<String> =
        ["[3_2, 4, 24, 24]", "[3_2, 6, 7, 42]", "[3_2, 4, 15, 60]"].iter().map(|s| s.to_string()).collect();
    assert_eq!(got, want);
    assert_eq!(rep.rings.len(), 3);
}

#[test]
fn mnsd_rank_seven_pipeline() {
    let mut o = ClassifyOptions::new(7);
    o.mnsd = true;
    let rep = classify(&o);
    assert_eq!(rep.counts.fractions, 13);
    assert_eq!(rep.counts.fpdims, 11);
    assert_eq!(rep.counts.drinfeld, 4);
}

#[test]
fn output_is_sorted_and_stable() {
    let a = classify(&ClassifyOptions::new(4));
    let b = classify(&ClassifyOptions::new(4));
    let key = |r: &ClassifyReport| r.rings.iter().map(|c| c.ring.clone()).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
    let keys: Vec<_> = a.rings.iter().map(|c| fusionforge::enumerate::pipeline::sort_key(&c.ring)).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn shapes_of_noncommutative_rings() {
    assert_eq!(noncommutative_shapes(8), vec![vec![2]]);
    assert_eq!(noncommutative_shapes(10), vec![vec![2], vec![2, 2]]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn egyptian_solutions_sum_to_one_exactly(len in 1usize..=5, div in any::<bool>()) {
        use num_rational::Ratio;
        for s in egyptian_fractions(len, &EgyptianOptions { divisibility: div, ..Default::default() }) {
            let sum: Ratio<u128> = s.denominators.iter().map(|&x| Ratio::new(1, x)).sum();
            prop_assert_eq!(sum, Ratio::from_integer(1));
            prop_assert!(s.denominators.windows(2).all(|w| w[0] <= w[1]));
            if div {
                prop_assert!(s.denominators.iter().all(|&x| EgyptianSolution::max(&s).is_multiple_of(x)));
            }
        }
    }

    #[test]
    fn types_have_the_requested_fpdim(n in 2u64..200, r in 2usize..6) {
        for ty in types_for_fpdim(n, r, TypeOptions::default()) {
            prop_assert_eq!(ty.global_fpdim(), n);
            prop_assert_eq!(ty.rank(), r);
            prop_assert_eq!(ty.dims[0], 1);
            prop_assert!(ty.dims.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn search_results_satisfy_the_axioms(n in 2u64..60, r in 3usize..5) {
        for ty in types_for_fpdim(n, r, TypeOptions::default()) {
            for d in duality_candidates(&ty) {
                let out = fusion_data_search(&ty, &d, SearchOptions::default()).unwrap();
                for ring in out.rings {
                    prop_assert!(ring.validate().is_ok());
                    prop_assert_eq!(ring.integral_dims().unwrap(), ty.dims.clone());
                    prop_assert_eq!(ring.duality(), &d[..]);
                }
            }
        }
    }
}
