use vanrees::corpus::get_named;
use vanrees::equivalence::{automorphism_count, loops_isomorphic};
use vanrees::identities::{has_exponent3, is_regular_order3};
use vanrees::search::{
    classify_order, reduction_form, satisfies_mode, search_loops, Certificate, FillOrder, Limits, Mode, SearchSpec,
};
use vanrees::structure::classify_structure;
use vanrees::{verify_theorem1, LoopTable, Side};

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// Loops on a fixed labeled set with a fixed identity, summed over classes.
fn labeled_total(classes: &[LoopTable]) -> u64 {
    classes
        .iter()
        .map(|q| factorial(q.order() as u64 - 1) / automorphism_count(q))
        .sum()
}

fn raw_count(n: usize, mode: Mode) -> u64 {
    let r = search_loops(&SearchSpec::new(n, mode).raw()).unwrap();
    assert!(r.completed);
    r.count
}

#[test]
fn raw_counts_match_classes_times_orbit_sizes() {
    for (n, mode) in [
        (3, Mode::VanRees),
        (9, Mode::VanRees),
        (3, Mode::Exp3RegularTranslations),
        (5, Mode::Exp3RegularTranslations),
        (7, Mode::Exp3RegularTranslations),
        (9, Mode::Exp3RegularTranslations),
        (9, Mode::Vrl123Not4),
    ] {
        let classes = classify_order(n, mode).unwrap();
        assert_eq!(raw_count(n, mode), labeled_total(&classes), "n = {n}, {mode}");
    }
}

#[test]
fn frozen_raw_counts() {
    assert_eq!(raw_count(9, Mode::VanRees), 840);
    assert_eq!(raw_count(9, Mode::Exp3RegularTranslations), EXP3_RAW_9);
}

const EXP3_RAW_9: u64 = 4200;

#[test]
fn order_nine_classes() {
    let vr = classify_order(9, Mode::VanRees).unwrap();
    assert_eq!(vr.len(), 1);
    assert!(classify_structure(&vr[0]).is_elementary_abelian3);
    let exp3 = classify_order(9, Mode::Exp3RegularTranslations).unwrap();
    assert_eq!(exp3.len(), 2);
    let t2 = get_named("table2").unwrap().table;
    assert!(exp3.iter().any(|q| loops_isomorphic(q, &t2).is_some()));
}

#[test]
fn witnesses_pass_independent_checks() {
    for (n, mode) in [(9, Mode::VanRees), (9, Mode::Exp3RegularTranslations), (7, Mode::Exp3RegularTranslations)] {
        let r = search_loops(&SearchSpec::new(n, mode).raw()).unwrap();
        for q in &r.witnesses {
            assert!(has_exponent3(q).holds);
            assert_eq!(q.order() % 2, 1);
            for side in [Side::Left, Side::Right] {
                for x in 1..n {
                    assert!(is_regular_order3(&q.translation(side, x)));
                }
            }
            if mode == Mode::VanRees {
                assert!(verify_theorem1(q).unwrap().van_rees);
            }
            assert!(satisfies_mode(q, mode));
        }
    }
}

#[test]
fn orders_off_three_mod_six_are_immediate() {
    for n in [4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 16, 17] {
        let r = search_loops(&SearchSpec::new(n, Mode::VanRees)).unwrap();
        assert!(r.completed);
        assert_eq!(r.count, 0);
        assert_eq!(r.stats.nodes, 0);
        assert_eq!(r.certificate, Certificate::Immediate);
        assert_eq!(r.reason.as_deref(), Some("3mod6"));
    }
}

#[test]
fn budget_is_reported() {
    let spec = SearchSpec::new(15, Mode::Vrl123Not4).with_limits(Limits {
        max_nodes: Some(50),
        max_time: None,
    });
    let r = search_loops(&spec).unwrap();
    assert!(!r.completed);
    assert_eq!(r.certificate, Certificate::BudgetExceeded);
}

#[test]
fn table3_is_found_from_a_seed() {
    let t3 = get_named("table3").unwrap().table;
    let form = reduction_form(&t3).expect("table3 has exponent 3");
    let seed: Vec<(usize, usize, usize)> = (1..=4)
        .flat_map(|r| (1..15).map(move |c| (r, c)))
        .map(|(r, c)| (r, c, form.get(r, c)))
        .collect();
    let r = search_loops(&SearchSpec::new(15, Mode::Exp3RegularTranslations).with_seed(seed)).unwrap();
    assert!(r.completed);
    assert_eq!(r.count, 1);
    assert!(loops_isomorphic(&r.witnesses[0], &t3).is_some());
}

#[test]
fn order_fifteen_column_major() {
    let r = search_loops(&SearchSpec::new(15, Mode::VanRees).with_fill_order(FillOrder::ColumnMajor)).unwrap();
    assert!(r.completed);
    assert_eq!(r.count, 0);
}

#[test]
fn checkpoint_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frontier.bin");
    let mut spec = SearchSpec::new(9, Mode::Exp3RegularTranslations).raw();
    spec.checkpoint = Some(path.clone());
    let first = search_loops(&spec).unwrap();
    assert!(path.exists());
    let again = search_loops(&spec).unwrap();
    assert_eq!(first.count, again.count);
    assert_eq!(again.stats.nodes, first.stats.nodes);
}

#[test]
fn interrupted_search_resumes_to_the_same_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frontier.bin");
    let mut spec = SearchSpec::new(9, Mode::Exp3RegularTranslations).raw();
    spec.split_depth = 2;
    spec.checkpoint = Some(path);
    let mut cut = spec.clone();
    cut.limits.max_nodes = Some(40_000);
    let partial = search_loops(&cut).unwrap();
    assert!(!partial.completed);
    let resumed = search_loops(&spec).unwrap();
    assert!(resumed.completed);
    assert_eq!(resumed.count, 4200);
}
