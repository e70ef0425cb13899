//! Derived operations on exponent-3 loops: the Steiner product
//! `x ∗ y = x(y·yx)` and the Bruck sum `x + y = (x·y²x)²`.

use serde::Serialize;
use thiserror::Error;

use crate::identities::{check_identity, verify_theorem1, NamedProperty};
use crate::square::{LatinSquare, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivedError {
    #[error("the Bruck sum needs a left Bol loop (fails at {0:?})")]
    NotLeftBol(Vec<usize>),
    #[error("the Bruck sum needs exponent 3 (fails at x = {0})")]
    NotExponent3(usize),
    #[error("the derived table is not a latin square")]
    NotLatin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivedKind {
    Steiner,
    Bruck,
}

#[derive(Debug, Clone)]
pub struct DerivedSquare {
    pub kind: DerivedKind,
    pub table: LatinSquare,
    /// the base passed the check that guarantees the derived axioms
    /// (van Rees for Steiner, left Bol of exponent 3 for Bruck)
    pub verified: bool,
}

fn build(base: &LoopTable, f: impl Fn(usize, usize) -> usize) -> Result<LatinSquare, DerivedError> {
    let n = base.order();
    let cells: Vec<usize> = (0..n * n).map(|i| f(i / n, i % n)).collect();
    let sq = LatinSquare::new(n, &cells).map_err(|_| DerivedError::NotLatin)?;
    Ok(match base.labels() {
        Some(l) => sq.with_labels(l.to_vec()).expect("label count"),
        None => sq,
    })
}

/// `x ∗ y = x·(y·(y·x))`.
///
/// Always computed; `verified` records whether the base is van Rees. A
/// non-van-Rees base can yield a non-latin table, reported as an error.
pub fn steiner_star(q: &LoopTable) -> Result<DerivedSquare, DerivedError> {
    let table = build(q, |x, y| q.product(x, q.product(y, q.product(y, x))))?;
    let verified = verify_theorem1(q).map(|r| r.van_rees).unwrap_or(false);
    Ok(DerivedSquare {
        kind: DerivedKind::Steiner,
        table,
        verified,
    })
}

/// Steiner table entries without the latin check or verification.
pub fn steiner_product(q: &LoopTable, x: usize, y: usize) -> usize {
    q.product(x, q.product(y, q.product(y, x)))
}

/// `x + y = s·s` where `s = x·((y·y)·x)`.
pub fn bruck_plus(q: &LoopTable) -> Result<DerivedSquare, DerivedError> {
    let exp3 = check_identity(q, NamedProperty::Exponent3).expect("input is a loop");
    if let Some(w) = exp3.witness {
        return Err(DerivedError::NotExponent3(w[0]));
    }
    let bol = check_identity(q, NamedProperty::LeftBol).expect("no loop requirement");
    if let Some(w) = bol.witness {
        return Err(DerivedError::NotLeftBol(w));
    }
    let table = build(q, |x, y| bruck_sum(q, x, y))?;
    Ok(DerivedSquare {
        kind: DerivedKind::Bruck,
        table,
        verified: true,
    })
}

#[inline]
fn bruck_sum(q: &LatinSquare, x: usize, y: usize) -> usize {
    let s = q.product(x, q.product(q.product(y, y), x));
    q.product(s, s)
}

/// Outcome of one pointwise equation scan; `None` when not applicable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

impl EquationCheck {
    fn from_witness(witness: Option<Vec<usize>>) -> Self {
        EquationCheck {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivedReport {
    pub left_bol: bool,
    pub exponent3: bool,
    /// `xx = x`, `xy = yx`, `x(yx) = y` on the Steiner table
    pub steiner_axioms: Option<EquationCheck>,
    /// the Steiner table itself passes the seven-condition check
    pub steiner_van_rees: Option<bool>,
    /// `x·y²x = y·x²y`
    pub bruck_comm: Option<EquationCheck>,
    /// `x(y·xy) = y²x²`
    pub bruck_step1: Option<EquationCheck>,
    /// Bruck sum is commutative with exponent 3
    pub bruck_commutative_exp3: Option<bool>,
    /// vRL1–vRL4 on a left Bol loop of exponent 3
    pub vrl_suite: Option<[bool; 4]>,
    /// when the Steiner table is distributive: does it pass the seven-condition check
    pub distributive_steiner_van_rees: Option<bool>,
}

fn scan2(n: usize, ok: impl Fn(usize, usize) -> bool) -> EquationCheck {
    for x in 0..n {
        for y in 0..n {
            if !ok(x, y) {
                return EquationCheck::from_witness(Some(vec![x, y]));
            }
        }
    }
    EquationCheck::from_witness(None)
}

/// Every derived-structure check that applies to `q`.
pub fn derived_checks(q: &LoopTable) -> DerivedReport {
    let n = q.order();
    let holds = |sq: &LatinSquare, p| check_identity(sq, p).map(|v| v.holds).unwrap_or(false);
    let exponent3 = holds(q, NamedProperty::Exponent3);
    let left_bol = holds(q, NamedProperty::LeftBol);

    let steiner = steiner_star(q).ok();
    let (steiner_axioms, steiner_van_rees, distributive_steiner_van_rees) = match &steiner {
        Some(d) => {
            let t = &d.table;
            let axioms = scan2(n, |x, y| {
                t.product(x, x) == x
                    && t.product(x, y) == t.product(y, x)
                    && t.product(x, t.product(y, x)) == y
            });
            let vr = verify_theorem1(t).map(|r| r.van_rees).ok();
            let distributive = (axioms.holds && scan_distributive(t)).then(|| vr == Some(true));
            (Some(axioms), vr, distributive)
        }
        None => (
            Some(scan2(n, |x, y| {
                let s = |a, b| steiner_product(q, a, b);
                s(x, x) == x && s(x, y) == s(y, x) && s(x, s(y, x)) == y
            })),
            Some(false),
            None,
        ),
    };

    let bol3 = left_bol && exponent3;
    let m = |x: usize, y: usize| q.product(x, y);
    let sq = |x: usize| q.product(x, x);
    let (bruck_comm, bruck_step1, bruck_commutative_exp3, vrl_suite) = if bol3 {
        let comm = scan2(n, |x, y| m(x, m(sq(y), x)) == m(y, m(sq(x), y)));
        let step1 = scan2(n, |x, y| m(x, m(y, m(x, y))) == m(sq(y), sq(x)));
        let plus_ok = bruck_plus(q).is_ok_and(|d| {
            let t = LoopTable::new(d.table);
            t.is_ok_and(|t| {
                holds(&t, NamedProperty::Commutative) && holds(&t, NamedProperty::Exponent3)
            })
        });
        let suite = [
            NamedProperty::VRL1,
            NamedProperty::VRL2,
            NamedProperty::VRL3,
            NamedProperty::VRL4,
        ]
        .map(|p| holds(q, p));
        (Some(comm), Some(step1), Some(plus_ok), Some(suite))
    } else {
        (None, None, None, None)
    };

    DerivedReport {
        left_bol,
        exponent3,
        steiner_axioms,
        steiner_van_rees,
        bruck_comm,
        bruck_step1,
        bruck_commutative_exp3,
        vrl_suite,
        distributive_steiner_van_rees,
    }
}

/// Left distributivity `x(yz) = (xy)(xz)`; enough for commutative inputs.
pub fn scan_distributive(q: &LatinSquare) -> bool {
    let n = q.order();
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| q.product(x, q.product(y, z)) == q.product(q.product(x, y), q.product(x, z)))
        })
    })
}

/// Distributivity scan plus Steiner axioms, for bare squares that are not loops.
pub fn distributive_steiner_is_van_rees(q: &LatinSquare) -> Option<bool> {
    let steiner = check_identity(q, NamedProperty::SteinerAxioms).map(|v| v.holds).unwrap_or(false);
    (steiner && scan_distributive(q)).then(|| verify_theorem1(q).map(|r| r.van_rees).unwrap_or(false))
}
