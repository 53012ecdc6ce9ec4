use fusionforge::grouptheory::*;
use fusionforge::TypeVector;
use proptest::prelude::*;

fn group(spec: &str) -> PermGroup {
    enumerate_group(&GroupSpec::parse(spec).unwrap(), DEFAULT_ORDER_CAP).unwrap()
}

fn subgroup(g: &PermGroup, spec: &str) -> Subgroup {
    let mut found = locate_subgroup(g, &GroupSpec::parse(spec).unwrap()).unwrap();
    assert_eq!(found.len(), 1, "{spec} in {}", g.name);
    found.remove(0)
}

fn degrees(spec: &str) -> Vec<u64> {
    let g = group(spec);
    character_degrees(&g.table, &g.table.whole()).unwrap()
}

#[test]
fn subgroup_lattices() {
    let s3 = group("S(3)");
    assert_eq!(s3.table.subgroups().len(), 6);
    assert_eq!(s3.table.subgroups_up_to_conjugacy().len(), 4);
    let c7 = group("C(7)");
    let orders: Vec<usize> = c7.table.subgroups().iter().map(|s| s.order()).collect();
    assert_eq!(orders, vec![1, 7]);

    let a5 = group("A(5)");
    let classes = a5.table.subgroups_up_to_conjugacy();
    assert_eq!(a5.table.subgroups().len(), 59);
    assert_eq!(classes.len(), 9);
    for spec in ["A(4)", "D(5)", "S(3)"] {
        subgroup(&a5, spec);
    }
}

#[test]
fn double_cosets_of_a4_in_a5() {
    let g = group("A(5)");
    let h = subgroup(&g, "A(4)");
    let data = double_cosets(&g.table, &h);
    let sizes: Vec<usize> = data.cosets.iter().map(|c| c.size).collect();
    assert_eq!(sizes, vec![12, 48]);
    let stab: Vec<usize> = data.cosets.iter().map(|c| c.stabilizer.order()).collect();
    assert_eq!(stab, vec![12, 3]);

    let whole = g.table.whole();
    let data = double_cosets(&g.table, &whole);
    assert_eq!(data.cosets.len(), 1);
    assert_eq!(data.cosets[0].stabilizer.order(), 60);
}

#[test]
fn character_degrees_of_small_groups() {
    assert_eq!(degrees("S(3)"), vec![1, 1, 2]);
    assert_eq!(degrees("A(4)"), vec![1, 1, 1, 3]);
    assert_eq!(degrees("A(5)"), vec![1, 3, 3, 4, 5]);
    assert_eq!(degrees("S(4)"), vec![1, 1, 2, 3, 3]);
    assert_eq!(degrees("SemiDirect(C(7), C(3), 2)"), vec![1, 1, 1, 3, 3]);
    assert_eq!(degrees("D(4)"), vec![1, 1, 1, 1, 2]);
    assert_eq!(degrees("C(12)"), vec![1; 12]);
}

#[test]
fn catalog_groups_have_consistent_degrees() {
    for order in [60, 75, 903] {
        for e in Catalog::builtin(order).unwrap().entries {
            let g = enumerate_group(&e.spec, DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(g.order() as u64, order, "{}", e.label);
            // Cross-checks Σd² = |G| and the linear count against [G:G'] internally.
            let d = character_degrees(&g.table, &g.table.whole()).unwrap();
            assert_eq!(d.iter().map(|x| x * x).sum::<u64>(), order);
        }
    }
}

#[test]
fn a5_mod_a4() {
    let g = group("A(5)");
    let h = subgroup(&g, "A(4)");
    let data = group_theoretical(&g.table, &h).unwrap();
    assert_eq!(data.ty, vec![1, 1, 1, 3, 4, 4, 4]);
    assert_eq!(data.duality, vec![0, 2, 1, 3, 4, 5, 6]);
    // A4 has a non-cyclic Sylow 2-subgroup.
    assert!(data.cocycle_sensitive);
}

#[test]
fn a5_mod_s3() {
    let g = group("A(5)");
    let h = subgroup(&g, "S(3)");
    assert_eq!(group_theoretical_type(&g.table, &h).unwrap(), vec![1, 1, 2, 3, 3, 6]);
}

#[test]
fn trivial_and_full_subgroups() {
    for spec in ["S(3)", "A(4)", "D(5)", "SemiDirect(C(7), C(3), 2)"] {
        let g = group(spec);
        let vec_g = group_theoretical(&g.table, &g.table.trivial()).unwrap();
        assert_eq!(vec_g.ty, vec![1; g.order()]);
        let rep_g = group_theoretical(&g.table, &g.table.whole()).unwrap();
        assert_eq!(rep_g.ty, character_degrees(&g.table, &g.table.whole()).unwrap());
    }
    // Rep(A4): the two non-trivial linear characters are dual to each other.
    let a4 = group("A(4)");
    assert_eq!(group_theoretical(&a4.table, &a4.table.whole()).unwrap().duality, vec![0, 2, 1, 3]);
}

#[test]
fn find_a5_s3() {
    let target = TypeVector::new(vec![1, 1, 2, 3, 3, 6]).unwrap();
    let report = find_group_subgroup(&target, &Catalog::builtin(60).unwrap());
    assert!(report.skipped.is_empty());
    assert_eq!(report.matches.len(), 1);
    assert_eq!(report.matches[0].group, "A5");
    assert_eq!(report.matches[0].subgroup_order, 6);
}

#[test]
fn no_model_of_order_903() {
    let target = TypeVector::new(vec![1, 1, 1, 3, 3, 21, 21]).unwrap();
    let report = find_group_subgroup(&target, &Catalog::builtin(903).unwrap());
    assert!(report.skipped.is_empty());
    assert!(report.matches.is_empty());
}

#[test]
fn order_75_model() {
    let mut dims = vec![1u64; 25];
    dims.extend([5, 5]);
    let target = TypeVector::new(dims.clone()).unwrap();
    let report = find_group_subgroup(&target, &Catalog::builtin(75).unwrap());
    // Two conjugacy classes of C5, both realizing the type.
    assert_eq!(report.matches.len(), 2);
    let printed = [0, 4, 3, 2, 1, 20, 24, 23, 22, 21, 15, 19, 18, 17, 16, 10, 14, 13, 12, 11, 5, 9, 8, 7, 6, 26, 25];
    let expected = fusionforge::enumerate::canonical_duality(&target, &printed);
    for m in &report.matches {
        assert_eq!(m.duality, expected);
        assert_eq!(m.group, "(C5xC5):C3");
        assert_eq!(m.subgroup_order, 5);
        assert_eq!(m.ty, dims);
    }
}

#[test]
fn subgroup_by_permutations() {
    let g = group("S(4)");
    let h = locate_subgroup(&g, &GroupSpec::parse("(1,2,3), (1,2)").unwrap()).unwrap();
    assert_eq!(h[0].order(), 6);
    assert!(locate_subgroup(&g, &GroupSpec::parse("(1,5)").unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn duality_is_a_type_preserving_involution(which in 0usize..4, pick in any::<prop::sample::Index>()) {
        let g = group(["S(4)", "A(5)", "D(6)", "SemiDirect(C(7), C(3), 2)"][which]);
        let subs = g.table.subgroups_up_to_conjugacy();
        let h = &subs[pick.index(subs.len())];
        let data = group_theoretical(&g.table, h).unwrap();
        prop_assert_eq!(data.ty.iter().map(|d| d * d).sum::<u64>(), g.order() as u64);
        let sizes: usize = double_cosets(&g.table, h).cosets.iter().map(|c| c.size).sum();
        prop_assert_eq!(sizes, g.order());
        for (i, &j) in data.duality.iter().enumerate() {
            prop_assert_eq!(data.duality[j], i);
            prop_assert_eq!(data.ty[i], data.ty[j]);
        }
    }
}
