use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vanrees::corpus::get_named;
use vanrees::corpus::random::{random_conjugate, random_isotopy, random_latin_square};
use vanrees::identities::has_exponent3;
use vanrees::{
    apply_isotopy, check_conditions_123, check_identity, conjugate, enumerate_subsquares, evaluate_conditions,
    loop_isotope, normalize_loop, parse_table, van_rees_bound, ConjugateName, LatinSquare, NamedProperty, Operation,
    Side,
};

fn square(n: usize, seed: u64) -> LatinSquare {
    random_latin_square(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn count(sq: &LatinSquare, k: usize) -> usize {
    enumerate_subsquares(sq, k).unwrap().len()
}

fn holds(sq: &LatinSquare, p: NamedProperty) -> bool {
    check_identity(sq, p).unwrap().holds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn text_round_trip(n in 1usize..12, seed: u64) {
        let sq = square(n, seed);
        let back = parse_table(&sq.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), sq.to_text());
    }

    #[test]
    fn translations_and_divisions(n in 1usize..12, seed: u64) {
        let sq = square(n, seed);
        for x in 0..n {
            for side in [Side::Left, Side::Right] {
                let p = sq.translation(side, x);
                prop_assert_eq!(p.compose(&p.inverse()).fixed_points(), n);
            }
            for y in 0..n {
                let l = sq.evaluate(Operation::LeftDivision, x, y).unwrap();
                prop_assert_eq!(sq.evaluate(Operation::Product, x, l).unwrap(), y);
                let r = sq.evaluate(Operation::RightDivision, x, y).unwrap();
                prop_assert_eq!(sq.evaluate(Operation::Product, r, y).unwrap(), x);
            }
        }
    }

    #[test]
    fn loop_isotopes_reconstruct(n in 1usize..12, seed: u64, a in 0usize..12, b in 0usize..12) {
        let sq = square(n, seed);
        let (a, b) = (a % n, b % n);
        let iso = loop_isotope(&sq, a, b).unwrap();
        prop_assert!(iso.table.is_loop());
        let moved = apply_isotopy(&sq, &iso.triple).unwrap();
        prop_assert_eq!(moved.cells(), iso.table.cells());
        prop_assert!(normalize_loop(&sq).is_loop());
    }

    #[test]
    fn subsquare_counts_are_paratopy_invariant(n in 3usize..16, seed: u64) {
        let sq = square(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let moved = apply_isotopy(&sq, &random_isotopy(n, &mut rng)).unwrap();
        let moved = conjugate(&moved, random_conjugate(&mut rng));
        prop_assert_eq!(count(&sq, 3), count(&moved, 3));
        prop_assert_eq!(count(&sq, 2), count(&moved, 2));
        let (r1, r2) = (evaluate_conditions(&sq), evaluate_conditions(&moved));
        prop_assert_eq!(r1.conditions, r2.conditions);
    }

    #[test]
    fn combinatorial_facts(n in 1usize..16, seed: u64) {
        let sq = square(n, seed);
        let c = check_conditions_123(&sq);
        prop_assert!(num_rational::Ratio::from_integer(c.count3 as u64) <= van_rees_bound(n));
        prop_assert_eq!(9 * c.count3, c.coverage.covered_pairs());
        prop_assert!(c.cond1 == c.cond2 && c.cond2 == c.cond3);
        if c.cond2 {
            prop_assert_eq!(c.count2, 0);
        }
        for (i, s) in c.subsquares.iter().enumerate() {
            for t in &c.subsquares[i + 1..] {
                let shared = s.cells().filter(|&(r, col)| t.contains_cell(r, col)).count();
                prop_assert!(shared <= 1);
            }
        }
    }

    #[test]
    fn seven_conditions_agree(n in 1usize..13, seed: u64) {
        let sq = square(n, seed);
        let r = evaluate_conditions(&sq);
        prop_assert!(r.conditions.iter().all(|&c| c == r.conditions[0]));
        prop_assert_eq!(holds(&sq, NamedProperty::VR1), r.left_quotients_regular);
        prop_assert_eq!(holds(&sq, NamedProperty::VR2), r.right_quotients_regular);
    }
}

#[test]
fn conjugation_is_a_group_action() {
    let sq = square(7, 3);
    for a in ConjugateName::ALL {
        for b in ConjugateName::ALL {
            assert_eq!(conjugate(&conjugate(&sq, a), b), conjugate(&sq, a.then(b)), "{a} then {b}");
        }
        assert_eq!(conjugate(&conjugate(&sq, a), a.inverse()), sq);
    }
}

#[test]
fn loop_identities_match_the_quotient_conditions() {
    for name in ["table1", "table2", "table3", "table4", "table5", "table6", "ccloop9_3", "z3", "z3sq", "heisenberg27"] {
        let q = get_named(name).unwrap().table;
        let vr = holds(&q, NamedProperty::VR1) && holds(&q, NamedProperty::VR2);
        let vrl = [NamedProperty::VRL1, NamedProperty::VRL2, NamedProperty::VRL3, NamedProperty::VRL4]
            .into_iter()
            .all(|p| holds(&q, p));
        assert_eq!(vr, vrl, "{name}");
    }
}

#[test]
fn all_isotopes_of_small_entries_agree() {
    for name in ["table1", "table2", "ccloop9_3", "z3sq", "table3"] {
        let q = get_named(name).unwrap().table;
        let n = q.order();
        for a in 0..n {
            for b in 0..n {
                let iso = loop_isotope(&q, a, b).unwrap().table;
                let r = evaluate_conditions(&iso);
                assert!(r.conditions.iter().all(|&c| c == r.conditions[0]), "{name} at ({a},{b})");
                if has_exponent3(&iso).holds {
                    assert_eq!(n % 2, 1);
                }
            }
        }
    }
}
