//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach standard output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vanrees::corpus::random::{random_isotopy, random_latin_square};
use vanrees::corpus::{self, get_named};
use vanrees::derived::{derived_checks, steiner_star};
use vanrees::equivalence::{equivalent, Level};
use vanrees::search::{classify_order, search_loops, Certificate, Mode, SearchSpec};
use vanrees::structure::{all_subloops, classify_structure, index_three_diagnostic, is_normal, quotient_loop};
use vanrees::subsquares::CellPair;
use vanrees::{
    apply_isotopy, check_conditions_123, check_identity, conjugate, enumerate_subsquares, evaluate_conditions,
    loop_isotope, van_rees_bound, verify_theorem1, ConjugateName, LatinSquare, LoopTable, NamedProperty, Side,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn table(name: &str) -> LoopTable {
    get_named(name).expect("corpus entry").table
}

fn holds(q: &LatinSquare, p: NamedProperty) -> bool {
    check_identity(q, p).map(|v| v.holds).unwrap_or(false)
}

fn is_van_rees(q: &LatinSquare) -> bool {
    verify_theorem1(q).map(|r| r.van_rees).unwrap_or(false)
}

fn order27() -> Vec<(&'static str, LoopTable)> {
    ["table4", "table5", "table6", "z3cube", "heisenberg27"]
        .into_iter()
        .map(|n| (n, table(n)))
        .collect()
}

fn c1() -> Check {
    let b15 = van_rees_bound(15);
    let b27 = van_rees_bound(27);
    ensure(b15.is_integer() && b15.to_integer() == 175, format!("bound(15) = {b15}"))?;
    ensure(b27.is_integer() && b27.to_integer() == 1053, format!("bound(27) = {b27}"))?;
    Ok("bound(15) = 175, bound(27) = 1053".into())
}

fn c2() -> Check {
    let q = table("table3");
    let count = enumerate_subsquares(&q, 3).map_err(|e| e.to_string())?.len();
    ensure(count == 24, format!("count3 = {count}"))?;
    let mut translations = 0;
    for side in [Side::Left, Side::Right] {
        for x in 0..q.order() {
            let p = q.translation(side, x);
            ensure(p.pow(3).is_identity(), format!("{side:?} translation of {x} has p^3 != id"))?;
            translations += 1;
        }
    }
    Ok(format!("count3 = 24, {translations} translations cube to the identity"))
}

fn c3() -> Check {
    let q = table("table1");
    let inter = enumerate_subsquares(&q, 2).map_err(|e| e.to_string())?;
    let first = inter.first().ok_or("no order-2 subsquare")?;
    ensure(first.is_valid_in(&q), "reported intercalate is not a subsquare")?;
    let r = evaluate_conditions(&q);
    ensure(r.conditions.iter().all(|&c| !c), format!("conditions {:?}", r.conditions))?;
    Ok(format!(
        "intercalate rows {:?} cols {:?}; all seven conditions false",
        first.rows, first.cols
    ))
}

fn c4() -> Check {
    let q = table("table2");
    let lbl = |s: &str| q.index_of(s).ok_or(format!("label {s} missing"));
    let (e, a, c, d) = (lbl("e0")?, lbl("a")?, lbl("c")?, lbl("d")?);
    ensure(q.get(e, d) == q.get(a, c), "cells (e,d) and (a,c) hold different symbols")?;
    let c123 = check_conditions_123(&q);
    ensure(!c123.cond2, "condition (2) holds")?;
    let pair = CellPair {
        symbol: q.get(e, d),
        first: (e, d).min((a, c)),
        second: (e, d).max((a, c)),
    };
    ensure(c123.coverage.covering(&pair).is_none(), "the pair lies in an order-3 subsquare")?;
    for side in [Side::Left, Side::Right] {
        for x in 1..q.order() {
            ensure(q.translation(side, x).is_regular(3), format!("{side:?} translation of {x} not regular"))?;
        }
    }
    Ok("condition (2) fails at ((e0,d),(a,c)); all nonidentity translations regular of order 3".into())
}

fn c5() -> Check {
    let q = table("ccloop9_3");
    let n = q.order();
    let quotient_regular = |side: Side| {
        (0..n).all(|x| {
            (0..n).all(|y| {
                x == y || {
                    let p = q.translation(side, x).inverse().compose(&q.translation(side, y));
                    p.is_regular(3)
                }
            })
        })
    };
    let left = quotient_regular(Side::Left);
    let right = quotient_regular(Side::Right);
    // (1,0) is index 3, (0,2) is index 2
    let x = 3;
    let xx = q.product(x, x);
    let (lhs, rhs) = (q.product(xx, x), q.product(x, xx));
    ensure(left, "some left quotient is not regular")?;
    ensure(!right, "all right quotients are regular")?;
    ensure(lhs == 2 && rhs == 0, format!("(xx)x = {lhs}, x(xx) = {rhs}"))?;
    ensure(!holds(&q, NamedProperty::PowerAssocSpot), "power-associativity spot check passes")?;
    Ok("left quotients regular, some right quotient not; (xx)x = (0,2) != (0,0) = x(xx) at x = (1,0)".into())
}

fn agree(q: &LatinSquare) -> bool {
    let r = evaluate_conditions(q);
    r.conditions.iter().all(|&c| c == r.conditions[0])
}

fn c6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for e in corpus::all() {
        ensure(agree(&e.table), format!("{} disagrees", e.name))?;
    }
    for i in 0..200 {
        let n = rng.gen_range(5..=12);
        let sq = random_latin_square(n, &mut rng);
        ensure(agree(&sq), format!("random square #{i} of order {n} disagrees"))?;
    }
    let t5 = table("table5");
    for i in 0..50 {
        let (a, b) = (rng.gen_range(0..27), rng.gen_range(0..27));
        let iso = loop_isotope(&t5, a, b).map_err(|e| e.to_string())?;
        ensure(agree(&iso.table), format!("isotope #{i} disagrees"))?;
    }
    Ok("11 corpus entries, 200 random squares, 50 isotopes: verdicts agree".into())
}

fn c7() -> Check {
    for (name, q) in order27() {
        let c = check_conditions_123(&q);
        ensure(c.count3 == 1053, format!("{name}: count3 = {}", c.count3))?;
        ensure(c.per_cell_counts.iter().all(|&k| k == 13), format!("{name}: per-cell coverage != 13"))?;
        let subloops3 = all_subloops(&q).iter().filter(|s| s.len() == 3).count();
        ensure(subloops3 == 13, format!("{name}: {subloops3} order-3 subloops"))?;
    }
    let t4 = table("table4");
    ensure(holds(&t4, NamedProperty::LeftInverse), "table4 lacks the left inverse property")?;
    ensure(
        holds(&t4, NamedProperty::UniversalLeftConjugacyClosed),
        "table4 is not universally left conjugacy closed",
    )?;
    let t5 = table("table5");
    ensure(holds(&t5, NamedProperty::Commutative), "table5 not commutative")?;
    ensure(holds(&t5, NamedProperty::WeakInverse), "table5 lacks the weak inverse property")?;
    let t6 = table("table6");
    ensure(holds(&t6, NamedProperty::WeakInverse), "table6 lacks the weak inverse property")?;
    ensure(holds(&t6, NamedProperty::LrAutomorphism), "table6: some L_x^-1 R_x is not an automorphism")?;
    Ok("5 loops: count3 1053, coverage 13, 13 order-3 subloops; captioned properties hold".into())
}

fn c8() -> Check {
    let q = table("heisenberg27");
    let subs: Vec<_> = all_subloops(&q).into_iter().filter(|s| s.len() == 3).collect();
    let normal = subs
        .iter()
        .filter(|s| is_normal(&q, s).unwrap_or(false))
        .count();
    ensure(subs.len() == 13 && normal == 1, format!("{} subgroups, {normal} normal", subs.len()))?;
    Ok("13 order-3 subgroups, 1 normal".into())
}

fn c9() -> Check {
    let mut checked = 0;
    for (name, q) in order27() {
        for s in all_subloops(&q).iter().filter(|s| s.len() == 9) {
            ensure(is_normal(&q, s).unwrap_or(false), format!("{name}: {:?} not normal", s.to_vec()))?;
            for x in (0..27).filter(|&x| !s.contains(x)) {
                let d = index_three_diagnostic(&q, s, x).map_err(|e| e.to_string())?;
                ensure(d.holds(), format!("{name}: diagnostic fails for {:?} at {x}", s.to_vec()))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} index-3 subloops normal, diagnostic holds"))
}

fn c10() -> Check {
    let (mut subs, mut quotients) = (0, 0);
    for e in corpus::van_rees_entries() {
        let q = &e.table;
        for s in all_subloops(q).iter().filter(|s| s.len() >= 3) {
            ensure(is_van_rees(&s.as_loop(q)), format!("{}: subloop {:?} fails", e.name, s.to_vec()))?;
            subs += 1;
            if s.len() < q.order() && is_normal(q, s).unwrap_or(false) {
                let qt = quotient_loop(q, s).map_err(|e| e.to_string())?;
                ensure(is_van_rees(&qt.table), format!("{}: quotient by {:?} fails", e.name, s.to_vec()))?;
                quotients += 1;
            }
        }
    }
    Ok(format!("{subs} subloops and {quotients} quotients are van Rees"))
}

fn c11() -> Check {
    let entries = corpus::van_rees_entries();
    for e in &entries {
        let d = steiner_star(&e.table).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(holds(&d.table, NamedProperty::SteinerAxioms), format!("{}: Steiner axioms fail", e.name))?;
        ensure(is_van_rees(&d.table), format!("{}: Steiner table not van Rees", e.name))?;
    }
    Ok(format!("{} Steiner tables satisfy the axioms and are van Rees", entries.len()))
}

fn c12() -> Check {
    for name in ["z3sq", "z3cube", "heisenberg27"] {
        let r = derived_checks(&table(name));
        ensure(r.left_bol && r.exponent3, format!("{name}: not left Bol of exponent 3"))?;
        ensure(r.bruck_comm.as_ref().is_some_and(|c| c.holds), format!("{name}: x·y²x = y·x²y fails"))?;
        ensure(r.bruck_step1.as_ref().is_some_and(|c| c.holds), format!("{name}: x(y·xy) = y²x² fails"))?;
        ensure(r.bruck_commutative_exp3 == Some(true), format!("{name}: Bruck sum not commutative of exponent 3"))?;
        ensure(r.vrl_suite == Some([true; 4]), format!("{name}: vRL suite {:?}", r.vrl_suite))?;
    }
    Ok("z3sq, z3cube, heisenberg27: Bruck identities, sum and vRL1-4 hold".into())
}

fn c13() -> Check {
    let classes = classify_order(9, Mode::VanRees).map_err(|e| e.to_string())?;
    ensure(classes.len() == 1, format!("{} classes at order 9", classes.len()))?;
    ensure(classify_structure(&classes[0]).is_elementary_abelian3, "order-9 class is not elementary abelian")?;
    let start = Instant::now();
    let r = search_loops(&SearchSpec::new(15, Mode::VanRees)).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(r.completed && r.certificate == Certificate::Exhausted, "order-15 search did not finish")?;
    ensure(r.count == 0, format!("order-15 search found {}", r.count))?;
    ensure(t <= Duration::from_secs(15 * 60), format!("order-15 search took {t:?}"))?;
    Ok(format!(
        "order 9: one elementary abelian class; order 15: none ({} nodes, {:.1}s)",
        r.stats.nodes,
        t.as_secs_f64()
    ))
}

fn c14() -> Check {
    let t5 = table("table5");
    let count3 = |sq: &LatinSquare| enumerate_subsquares(sq, 3).map(|v| v.len()).unwrap_or(0);
    for w in ConjugateName::ALL {
        let k = count3(&conjugate(&t5, w));
        ensure(k == 1053, format!("conjugate {w}: count3 = {k}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for i in 0..20 {
        let iso = apply_isotopy(&t5, &random_isotopy(27, &mut rng)).map_err(|e| e.to_string())?;
        let k = count3(&iso);
        ensure(k == 1053, format!("isotope #{i}: count3 = {k}"))?;
    }
    for e in corpus::van_rees_entries() {
        let k = enumerate_subsquares(&e.table, 2).map_err(|e| e.to_string())?.len();
        ensure(k == 0, format!("{}: {k} intercalates", e.name))?;
    }
    Ok("6 conjugates and 20 isotopes keep count3 = 1053; no intercalates".into())
}

fn c15() -> Check {
    let reps = order27();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let v = equivalent(&reps[i].1, &reps[j].1, Level::Paratopy);
            ensure(!v.equivalent, format!("{} and {} are paratopic", reps[i].0, reps[j].0))?;
        }
    }
    let t5 = table("table5");
    for w in ConjugateName::ALL {
        let v = equivalent(&t5, &conjugate(&t5, w), Level::Paratopy);
        ensure(v.equivalent, format!("table5 not paratopic to its {w} conjugate"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let iso = apply_isotopy(&t5, &random_isotopy(27, &mut rng)).map_err(|e| e.to_string())?;
    ensure(equivalent(&t5, &iso, Level::Paratopy).equivalent, "table5 not paratopic to an isotope")?;
    Ok("5 order-27 squares pairwise non-paratopic; table5 matches its conjugates and an isotope".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, Duration); 15] = [
        ("bound formula", c1, Duration::from_millis(1)),
        ("table3 subsquares and translations", c2, Duration::from_secs(1)),
        ("table1 failure", c3, Duration::from_secs(1)),
        ("table2 failure", c4, Duration::from_secs(1)),
        ("ccloop9_3 one-sided regularity", c5, Duration::from_secs(1)),
        ("seven-condition agreement", c6, Duration::from_secs(120)),
        ("order-27 van Rees loops", c7, Duration::from_secs(120)),
        ("heisenberg27 subgroups", c8, Duration::from_secs(5)),
        ("index-3 normality", c9, Duration::from_secs(60)),
        ("subloops and quotients", c10, Duration::from_secs(120)),
        ("Steiner derivation", c11, Duration::from_secs(120)),
        ("Bol chain", c12, Duration::from_secs(30)),
        ("search reproduction", c13, Duration::from_secs(15 * 60)),
        ("isotopy and conjugate invariance", c14, Duration::from_secs(60)),
        ("species separation", c15, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let t = start.elapsed();
        let verdict = match out {
            Ok(detail) if t <= limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; took {t:?}, limit {limit:?}")),
            Err(why) => ("FAIL", why),
        };
        if verdict.0 == "FAIL" {
            failed += 1;
        }
        println!("{} criterion {:>2} ({name}): {} [{:.3}s]", verdict.0, i + 1, verdict.1, t.as_secs_f64());
    }
    println!("{} of 15 criteria passed", 15 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
