//! Ground evaluation of loop identities, translation regularity, and the
//! seven-way van Rees check.
//!
//! Identities are evaluated by brute force over every variable assignment in
//! lexicographic order, so the reported counterexample is always the first one.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::perm::Permutation;
use crate::square::{LatinSquare, LoopTable, Side};
use crate::subsquares::{check_conditions_123, CellPair, Conditions123};
use crate::transforms::IsotopeView;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("property '{0}' needs a loop with neutral element at index 0")]
    RequiresLoop(NamedProperty),
    #[error("property '{0}' expands inverses as x·x, which needs exponent 3 (fails at x = {1})")]
    RequiresExponent3(NamedProperty, usize),
    #[error("unknown property name '{0}'")]
    UnknownProperty(String),
}

/// The catalog of checkable identities and structural properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedProperty {
    /// `x(y\(xz)) = y(x\(yz))`
    #[serde(rename = "vr1")]
    VR1,
    /// `((xy)/z)y = ((xz)/y)z`
    #[serde(rename = "vr2")]
    VR2,
    /// `x(x·xy) = y`
    #[serde(rename = "vrl1")]
    VRL1,
    /// `(xy·y)y = x`
    #[serde(rename = "vrl2")]
    VRL2,
    /// `x·y(y·xz) = y·x(x·yz)`
    #[serde(rename = "vrl3")]
    VRL3,
    /// `(xy·z)z·y = (xz·y)y·z`
    #[serde(rename = "vrl4")]
    VRL4,
    /// `xx·x = x·xx = ε`
    Exponent3,
    /// `(x·yx)z = x(y·xz)`
    LeftBol,
    /// `x·xy = x²y`
    LeftAlternative,
    /// `x⁻¹·xy = y` with `x⁻¹ = xx`
    LeftInverse,
    /// `x(yx)² = y²`
    WeakInverse,
    Commutative,
    Associative,
    /// `xx = x`, `x(yx) = y`, `xy = yx`
    SteinerAxioms,
    /// every `z ↦ x(y(x\z))` is a left translation
    LeftConjugacyClosed,
    /// left conjugacy closed in every loop isotope
    UniversalLeftConjugacyClosed,
    /// `(xx)x = x(xx)`
    PowerAssocSpot,
    /// every `L_x⁻¹R_x` is an automorphism
    LrAutomorphism,
}

impl NamedProperty {
    pub const ALL: [NamedProperty; 18] = [
        NamedProperty::VR1,
        NamedProperty::VR2,
        NamedProperty::VRL1,
        NamedProperty::VRL2,
        NamedProperty::VRL3,
        NamedProperty::VRL4,
        NamedProperty::Exponent3,
        NamedProperty::LeftBol,
        NamedProperty::LeftAlternative,
        NamedProperty::LeftInverse,
        NamedProperty::WeakInverse,
        NamedProperty::Commutative,
        NamedProperty::Associative,
        NamedProperty::SteinerAxioms,
        NamedProperty::LeftConjugacyClosed,
        NamedProperty::UniversalLeftConjugacyClosed,
        NamedProperty::PowerAssocSpot,
        NamedProperty::LrAutomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedProperty::VR1 => "vr1",
            NamedProperty::VR2 => "vr2",
            NamedProperty::VRL1 => "vrl1",
            NamedProperty::VRL2 => "vrl2",
            NamedProperty::VRL3 => "vrl3",
            NamedProperty::VRL4 => "vrl4",
            NamedProperty::Exponent3 => "exponent3",
            NamedProperty::LeftBol => "left-bol",
            NamedProperty::LeftAlternative => "left-alternative",
            NamedProperty::LeftInverse => "left-inverse",
            NamedProperty::WeakInverse => "weak-inverse",
            NamedProperty::Commutative => "commutative",
            NamedProperty::Associative => "associative",
            NamedProperty::SteinerAxioms => "steiner-axioms",
            NamedProperty::LeftConjugacyClosed => "left-conjugacy-closed",
            NamedProperty::UniversalLeftConjugacyClosed => "universal-left-conjugacy-closed",
            NamedProperty::PowerAssocSpot => "power-assoc-spot",
            NamedProperty::LrAutomorphism => "lr-automorphism",
        }
    }

    /// Number of universally quantified variables in the reported witness.
    pub fn arity(self) -> usize {
        use NamedProperty::*;
        match self {
            Exponent3 | PowerAssocSpot => 1,
            VRL1 | VRL2 | LeftAlternative | LeftInverse | WeakInverse | Commutative
            | SteinerAxioms | LeftConjugacyClosed => 2,
            VR1 | VR2 | VRL3 | VRL4 | LeftBol | Associative | LrAutomorphism => 3,
            UniversalLeftConjugacyClosed => 4,
        }
    }

    pub fn requires_loop(self) -> bool {
        matches!(self, NamedProperty::Exponent3 | NamedProperty::LeftInverse)
    }
}

impl fmt::Display for NamedProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedProperty {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        NamedProperty::ALL
            .iter()
            .copied()
            .find(|p| p.name().replace('-', "") == key)
            .ok_or_else(|| IdentityError::UnknownProperty(s.to_string()))
    }
}

/// Truth value of a universally quantified property and its first counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub property: NamedProperty,
    pub holds: bool,
    /// variable values of the lexicographically first failing assignment
    pub witness: Option<Vec<usize>>,
}

fn first_failure_1(n: usize, ok: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    (0..n).find(|&x| !ok(x)).map(|x| vec![x])
}

fn first_failure_2(n: usize, ok: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    for x in 0..n {
        for y in 0..n {
            if !ok(x, y) {
                return Some(vec![x, y]);
            }
        }
    }
    None
}

fn first_failure_3(
    n: usize,
    ok: impl Fn(usize, usize, usize) -> bool + Sync,
) -> Option<Vec<usize>> {
    (0..n).into_par_iter().find_map_first(|x| {
        for y in 0..n {
            for z in 0..n {
                if !ok(x, y, z) {
                    return Some(vec![x, y, z]);
                }
            }
        }
        None
    })
}

/// Every cycle of `p` has length exactly 3.
pub fn is_regular_order3(p: &Permutation) -> bool {
    p.is_regular(3)
}

/// Regularity of order 3 for a map given pointwise, without allocating.
#[inline]
fn regular3(n: usize, f: impl Fn(usize) -> usize) -> bool {
    n % 3 == 0
        && (0..n).all(|z| {
            let z1 = f(z);
            let z2 = f(z1);
            z1 != z && z2 != z && f(z2) == z
        })
}

fn materialize(n: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::new((0..n).map(f).collect()).expect("translation maps are bijections")
}

/// First `(x, y)` for which `z ↦ x(y(x\z))` is not a left translation.
fn lcc_failure(q: &LatinSquare) -> Option<(usize, usize)> {
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            let f = |z: usize| q.product(x, q.product(y, q.ldiv(x, z)));
            // the only row that can match is the one agreeing at column 0
            let w = q.rdiv(f(0), 0);
            if (0..n).any(|z| q.product(w, z) != f(z)) {
                return Some((x, y));
            }
        }
    }
    None
}

/// First `x` with `xx·x ≠ ε` or `x·xx ≠ ε`, if any.
fn exponent3_failure(q: &LatinSquare) -> Option<usize> {
    (0..q.order()).find(|&x| {
        let xx = q.product(x, x);
        q.product(xx, x) != 0 || q.product(x, xx) != 0
    })
}

/// `xx·x = x·xx = ε` for every `x`.
pub fn has_exponent3(q: &LoopTable) -> IdentityVerdict {
    let witness = exponent3_failure(q).map(|x| vec![x]);
    IdentityVerdict {
        property: NamedProperty::Exponent3,
        holds: witness.is_none(),
        witness,
    }
}

/// Evaluates `which` over every assignment of its variables.
pub fn check_identity(q: &LatinSquare, which: NamedProperty) -> Result<IdentityVerdict, IdentityError> {
    use NamedProperty::*;
    let n = q.order();
    if which.requires_loop() && !q.is_loop() {
        return Err(IdentityError::RequiresLoop(which));
    }
    let m = |x: usize, y: usize| q.product(x, y);
    let witness = match which {
        VR1 => first_failure_3(n, |x, y, z| {
            m(x, q.ldiv(y, m(x, z))) == m(y, q.ldiv(x, m(y, z)))
        }),
        VR2 => first_failure_3(n, |x, y, z| {
            m(q.rdiv(m(x, y), z), y) == m(q.rdiv(m(x, z), y), z)
        }),
        VRL1 => first_failure_2(n, |x, y| m(x, m(x, m(x, y))) == y),
        VRL2 => first_failure_2(n, |x, y| m(m(m(x, y), y), y) == x),
        VRL3 => first_failure_3(n, |x, y, z| {
            m(x, m(y, m(y, m(x, z)))) == m(y, m(x, m(x, m(y, z))))
        }),
        VRL4 => first_failure_3(n, |x, y, z| {
            m(m(m(m(x, y), z), z), y) == m(m(m(m(x, z), y), y), z)
        }),
        Exponent3 => exponent3_failure(q).map(|x| vec![x]),
        LeftBol => first_failure_3(n, |x, y, z| m(m(x, m(y, x)), z) == m(x, m(y, m(x, z)))),
        LeftAlternative => first_failure_2(n, |x, y| m(x, m(x, y)) == m(m(x, x), y)),
        LeftInverse => {
            if let Some(x) = exponent3_failure(q) {
                return Err(IdentityError::RequiresExponent3(which, x));
            }
            first_failure_2(n, |x, y| m(m(x, x), m(x, y)) == y)
        }
        WeakInverse => first_failure_2(n, |x, y| {
            let yx = m(y, x);
            m(x, m(yx, yx)) == m(y, y)
        }),
        Commutative => first_failure_2(n, |x, y| m(x, y) == m(y, x)),
        Associative => first_failure_3(n, |x, y, z| m(m(x, y), z) == m(x, m(y, z))),
        SteinerAxioms => first_failure_2(n, |x, y| {
            m(x, x) == x && m(x, m(y, x)) == y && m(x, y) == m(y, x)
        }),
        LeftConjugacyClosed => lcc_failure(q).map(|(x, y)| vec![x, y]),
        UniversalLeftConjugacyClosed => (0..n * n).into_par_iter().find_map_first(|ab| {
            let (a, b) = (ab / n, ab % n);
            let iso = IsotopeView::new(q, a, b).table();
            lcc_failure(&iso).map(|(x, y)| vec![a, b, x, y])
        }),
        PowerAssocSpot => first_failure_1(n, |x| m(m(x, x), x) == m(x, m(x, x))),
        LrAutomorphism => first_failure_3(n, |x, y, z| {
            let phi = |w: usize| q.ldiv(x, m(w, x));
            phi(m(y, z)) == m(phi(y), phi(z))
        }),
    };
    Ok(IdentityVerdict {
        property: which,
        holds: witness.is_none(),
        witness,
    })
}

/// Evidence that one of the seven conditions fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// (1): the order-3 subsquare count falls short of the bound
    CountShortfall {
        count3: usize,
        bound_numerator: u64,
        bound_denominator: u64,
    },
    /// (2): two occurrences of a symbol share no order-3 subsquare
    UncoveredPair { pair: CellPair },
    /// (3): a cell lies in the wrong number of order-3 subsquares
    CellCount {
        cell: (usize, usize),
        count: usize,
        expected: Option<usize>,
    },
    /// (4): the isotope `Q_{a,b}` does not have exponent 3 at `element`
    NonExponent3 { a: usize, b: usize, element: usize },
    /// (5): `L_x⁻¹L_y` or `R_x⁻¹R_y` is not regular of order 3
    IrregularQuotient {
        side: Side,
        x: usize,
        y: usize,
        cycle_type: Vec<usize>,
    },
    /// (6): a translation of a non-identity element of `Q_{a,b}` is not regular of order 3
    IrregularTranslation {
        a: usize,
        b: usize,
        side: Side,
        element: usize,
        cycle_type: Vec<usize>,
    },
    /// (7): `Q_{a,b}` has the wrong number of order-3 subloops
    SubloopCount {
        a: usize,
        b: usize,
        count: usize,
        expected: Option<usize>,
    },
}

/// Conditions (4)–(7), with (5) split by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conditions4567 {
    pub cond4: bool,
    pub cond5: bool,
    pub cond6: bool,
    pub cond7: bool,
    /// all `L_x⁻¹L_y` (x ≠ y) regular of order 3
    pub left_quotients_regular: bool,
    /// all `R_x⁻¹R_y` (x ≠ y) regular of order 3
    pub right_quotients_regular: bool,
    pub witness4: Option<Witness>,
    pub witness5: Option<Witness>,
    pub witness5_left: Option<Witness>,
    pub witness5_right: Option<Witness>,
    pub witness6: Option<Witness>,
    pub witness7: Option<Witness>,
}

fn quotient_failure(q: &LatinSquare, side: Side) -> Option<Witness> {
    let n = q.order();
    (0..n * n).into_par_iter().find_map_first(|xy| {
        let (x, y) = (xy / n, xy % n);
        if x == y {
            return None;
        }
        let f = |z: usize| match side {
            Side::Left => q.ldiv(x, q.product(y, z)),
            Side::Right => q.rdiv(q.product(z, y), x),
        };
        (!regular3(n, f)).then(|| Witness::IrregularQuotient {
            side,
            x,
            y,
            cycle_type: materialize(n, f).cycle_type(),
        })
    })
}

/// Number of 3-element subloops `{ε, x, xx}` of the isotope.
fn order3_subloops(view: &IsotopeView<'_>, n: usize) -> usize {
    let e = view.neutral;
    let twice: usize = (0..n)
        .filter(|&x| {
            if x == e {
                return false;
            }
            let y = view.mul(x, x);
            y != e
                && y != x
                && view.mul(x, y) == e
                && view.mul(y, x) == e
                && view.mul(y, y) == x
        })
        .count();
    twice / 2
}

pub fn check_conditions_4567(q: &LatinSquare) -> Conditions4567 {
    let n = q.order();
    let cells = (0..n * n).into_par_iter();

    let witness4 = cells.clone().find_map_first(|ab| {
        let (a, b) = (ab / n, ab % n);
        let v = IsotopeView::new(q, a, b);
        let e = v.neutral;
        (0..n)
            .find(|&x| {
                let xx = v.mul(x, x);
                v.mul(xx, x) != e || v.mul(x, xx) != e
            })
            .map(|element| Witness::NonExponent3 { a, b, element })
    });

    let witness5_left = quotient_failure(q, Side::Left);
    let witness5_right = quotient_failure(q, Side::Right);
    let witness5 = match (&witness5_left, &witness5_right) {
        (Some(Witness::IrregularQuotient { x: lx, y: ly, .. }), Some(Witness::IrregularQuotient { x: rx, y: ry, .. })) => {
            if (lx, ly) <= (rx, ry) {
                witness5_left.clone()
            } else {
                witness5_right.clone()
            }
        }
        (Some(_), _) => witness5_left.clone(),
        (None, r) => r.clone(),
    };

    let witness6 = cells.clone().find_map_first(|ab| {
        let (a, b) = (ab / n, ab % n);
        let v = IsotopeView::new(q, a, b);
        for x in (0..n).filter(|&x| x != v.neutral) {
            for side in [Side::Left, Side::Right] {
                let f = |y: usize| match side {
                    Side::Left => v.mul(x, y),
                    Side::Right => v.mul(y, x),
                };
                if !regular3(n, f) {
                    return Some(Witness::IrregularTranslation {
                        a,
                        b,
                        side,
                        element: x,
                        cycle_type: materialize(n, f).cycle_type(),
                    });
                }
            }
        }
        None
    });

    let expected = (n % 2 == 1).then(|| (n - 1) / 2);
    let witness7 = cells.find_map_first(|ab| {
        let (a, b) = (ab / n, ab % n);
        let count = order3_subloops(&IsotopeView::new(q, a, b), n);
        (Some(count) != expected).then_some(Witness::SubloopCount {
            a,
            b,
            count,
            expected,
        })
    });

    Conditions4567 {
        cond4: witness4.is_none(),
        cond5: witness5.is_none(),
        cond6: witness6.is_none(),
        cond7: witness7.is_none(),
        left_quotients_regular: witness5_left.is_none(),
        right_quotients_regular: witness5_right.is_none(),
        witness4,
        witness5,
        witness5_left,
        witness5_right,
        witness6,
        witness7,
    }
}

#[derive(Debug, Clone, Error)]
pub enum TheoremError {
    #[error("conditions disagree on an order-{} square: {:?}", .0.order, .0.conditions)]
    Inconsistent(Box<ConditionReport>),
}

/// The seven conditions evaluated independently, plus counts and evidence.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub order: usize,
    /// `conditions[i]` is condition `i + 1`
    pub conditions: [bool; 7],
    pub consistent: bool,
    /// the common verdict (meaningful when `consistent`)
    pub van_rees: bool,
    pub count2: usize,
    pub count3: usize,
    pub bound_numerator: u64,
    pub bound_denominator: u64,
    pub left_quotients_regular: bool,
    pub right_quotients_regular: bool,
    pub witnesses: [Option<Witness>; 7],
    #[serde(skip)]
    pub combinatorial: Conditions123,
}

impl ConditionReport {
    pub fn cond(&self, i: usize) -> bool {
        self.conditions[i - 1]
    }
}

/// Evaluates all seven conditions without trusting any of them to imply the others.
pub fn evaluate_conditions(q: &LatinSquare) -> ConditionReport {
    let c123 = check_conditions_123(q);
    let c4567 = check_conditions_4567(q);
    let n = q.order();
    let conditions = [
        c123.cond1, c123.cond2, c123.cond3, c4567.cond4, c4567.cond5, c4567.cond6, c4567.cond7,
    ];
    let all_equal = conditions.iter().all(|&c| c == conditions[0]);
    // a nontrivial van Rees square has order 3 mod 6
    let order_ok = !conditions[0] || n == 1 || n % 6 == 3;
    let bound = c123.bound;
    let witnesses = [
        (!c123.cond1).then(|| Witness::CountShortfall {
            count3: c123.count3,
            bound_numerator: *bound.numer(),
            bound_denominator: *bound.denom(),
        }),
        c123.uncovered.map(|pair| Witness::UncoveredPair { pair }),
        c123.deficient.map(|(cell, count)| Witness::CellCount {
            cell,
            count,
            expected: (n % 2 == 1).then(|| (n - 1) / 2),
        }),
        c4567.witness4,
        c4567.witness5,
        c4567.witness6,
        c4567.witness7,
    ];
    ConditionReport {
        order: n,
        conditions,
        consistent: all_equal && order_ok,
        van_rees: conditions[0],
        count2: c123.count2,
        count3: c123.count3,
        bound_numerator: *bound.numer(),
        bound_denominator: *bound.denom(),
        left_quotients_regular: c4567.left_quotients_regular,
        right_quotients_regular: c4567.right_quotients_regular,
        witnesses,
        combinatorial: c123,
    }
}

/// All seven conditions, required to agree.
pub fn verify_theorem1(q: &LatinSquare) -> Result<ConditionReport, TheoremError> {
    let report = evaluate_conditions(q);
    if report.consistent {
        Ok(report)
    } else {
        Err(TheoremError::Inconsistent(Box::new(report)))
    }
}

/// `n²(n−1)/18` as an exact value, for reporting.
pub fn bound_of(report: &ConditionReport) -> Ratio<u64> {
    Ratio::new(report.bound_numerator, report.bound_denominator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> LatinSquare {
        LatinSquare::from_fn(3, |r, c| (r + c) % 3)
    }

    #[test]
    fn property_names_round_trip() {
        for p in NamedProperty::ALL {
            assert_eq!(p.name().parse::<NamedProperty>().unwrap(), p);
        }
        assert_eq!("leftBol".parse::<NamedProperty>().unwrap(), NamedProperty::LeftBol);
        assert_eq!("vRL3".parse::<NamedProperty>().unwrap(), NamedProperty::VRL3);
        assert!("nonsense".parse::<NamedProperty>().is_err());
    }

    #[test]
    fn regular_order3_examples() {
        assert!(is_regular_order3(&Permutation::new(vec![1, 2, 0]).unwrap()));
        assert!(!is_regular_order3(&Permutation::identity(3)));
        assert!(!is_regular_order3(&Permutation::identity(1)));
    }

    #[test]
    fn z3_satisfies_everything_it_should() {
        let q = z3();
        for p in NamedProperty::ALL {
            let v = check_identity(&q, p).unwrap();
            let expected = p != NamedProperty::SteinerAxioms;
            assert_eq!(v.holds, expected, "{p}");
        }
        let r = verify_theorem1(&q).unwrap();
        assert!(r.van_rees);
        assert_eq!(r.conditions, [true; 7]);
    }

    #[test]
    fn loop_only_properties_reject_bare_squares() {
        let steiner = LatinSquare::from_fn(3, |r, c| (6 - r - c) % 3);
        assert_eq!(
            check_identity(&steiner, NamedProperty::Exponent3),
            Err(IdentityError::RequiresLoop(NamedProperty::Exponent3))
        );
        assert!(check_identity(&steiner, NamedProperty::SteinerAxioms).unwrap().holds);
    }

    #[test]
    fn left_inverse_needs_exponent3() {
        let z5 = LatinSquare::from_fn(5, |r, c| (r + c) % 5);
        assert!(matches!(
            check_identity(&z5, NamedProperty::LeftInverse),
            Err(IdentityError::RequiresExponent3(_, 1))
        ));
    }

    #[test]
    fn order_one_and_two() {
        let one = LatinSquare::from_fn(1, |_, _| 0);
        assert_eq!(verify_theorem1(&one).unwrap().conditions, [true; 7]);
        let two = LatinSquare::from_fn(2, |r, c| r ^ c);
        assert_eq!(verify_theorem1(&two).unwrap().conditions, [false; 7]);
    }

    #[test]
    fn cyclic_nine_is_not_van_rees() {
        let z9 = LatinSquare::from_fn(9, |r, c| (r + c) % 9);
        let r = verify_theorem1(&z9).unwrap();
        assert!(!r.van_rees);
        assert!(matches!(r.witnesses[3], Some(Witness::NonExponent3 { a: 0, b: 0, element: 1 })));
    }
}
