//! Order-2 and order-3 subsquares, pair coverage, and the three combinatorial
//! van Rees conditions (bound attained, every same-symbol pair covered, every
//! cell covered `(n-1)/2` times).

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::square::LatinSquare;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsquareError {
    #[error("only subsquares of order 2 and 3 are enumerated, not {0}")]
    UnsupportedOrder(usize),
}

/// A latin `k×k` submatrix. All three index lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subsquare {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub symbols: Vec<usize>,
}

impl Subsquare {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        self.rows.contains(&row) && self.cols.contains(&col)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .flat_map(move |&r| self.cols.iter().map(move |&c| (r, c)))
    }

    /// Re-checks the latin-submatrix property against `square`.
    pub fn is_valid_in(&self, square: &LatinSquare) -> bool {
        let k = self.rows.len();
        if self.cols.len() != k || self.symbols.len() != k {
            return false;
        }
        self.cells()
            .all(|(r, c)| self.symbols.binary_search(&square.get(r, c)).is_ok())
    }
}

/// `n²(n−1)/18`, the maximum number of order-3 subsquares at order `n`.
pub fn van_rees_bound(n: usize) -> Ratio<u64> {
    let n = n as u64;
    Ratio::new(n * n * (n.saturating_sub(1)), 18)
}

/// Every subsquare of order `k ∈ {2, 3}`, sorted by row set then column set.
pub fn enumerate_subsquares(square: &LatinSquare, k: usize) -> Result<Vec<Subsquare>, SubsquareError> {
    let mut found: Vec<Subsquare> = match k {
        2 => (0..square.order())
            .into_par_iter()
            .flat_map_iter(|r1| order2_from_row(square, r1))
            .collect(),
        3 => (0..square.order())
            .into_par_iter()
            .flat_map_iter(|r1| order3_from_row(square, r1))
            .collect(),
        _ => return Err(SubsquareError::UnsupportedOrder(k)),
    };
    found.sort_unstable();
    Ok(found)
}

fn order2_from_row(sq: &LatinSquare, r1: usize) -> Vec<Subsquare> {
    let n = sq.order();
    let mut out = Vec::new();
    for r2 in r1 + 1..n {
        for c1 in 0..n {
            let a = sq.get(r1, c1);
            let b = sq.get(r2, c1);
            let c2 = sq.col_of(r1, b);
            if c2 > c1 && sq.get(r2, c2) == a {
                let mut symbols = vec![a, b];
                symbols.sort_unstable();
                out.push(Subsquare {
                    rows: vec![r1, r2],
                    cols: vec![c1, c2],
                    symbols,
                });
            }
        }
    }
    out
}

fn order3_from_row(sq: &LatinSquare, r1: usize) -> Vec<Subsquare> {
    let n = sq.order();
    let mut out = Vec::new();
    for r2 in r1 + 1..n {
        for r3 in r2 + 1..n {
            for c1 in 0..n {
                let a = sq.get(r1, c1);
                let b = sq.get(r2, c1);
                let c = sq.get(r3, c1);
                // the other two columns are where row r1 holds b and c;
                // c1 must be the least of the three so each block is seen once
                let c2 = sq.col_of(r1, b);
                let c3 = sq.col_of(r1, c);
                if c2 < c1 || c3 < c1 {
                    continue;
                }
                let inside = |s: usize| s == a || s == b || s == c;
                if inside(sq.get(r2, c2))
                    && inside(sq.get(r2, c3))
                    && inside(sq.get(r3, c2))
                    && inside(sq.get(r3, c3))
                {
                    let mut cols = vec![c1, c2, c3];
                    cols.sort_unstable();
                    let mut symbols = vec![a, b, c];
                    symbols.sort_unstable();
                    out.push(Subsquare {
                        rows: vec![r1, r2, r3],
                        cols,
                        symbols,
                    });
                }
            }
        }
    }
    out
}

/// Two cells holding the same symbol; `first < second` in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellPair {
    pub symbol: usize,
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// Same-symbol cell pairs covered by an order-3 subsquare, each mapped to the
/// index of its (unique) covering subsquare.
#[derive(Debug, Clone, Default)]
pub struct CoverageMap {
    covered: BTreeMap<CellPair, usize>,
}

impl CoverageMap {
    pub fn build(square: &LatinSquare, subsquares: &[Subsquare]) -> Self {
        let mut covered = BTreeMap::new();
        for (idx, s) in subsquares.iter().enumerate() {
            let cells: Vec<(usize, usize)> = s.cells().collect();
            for (i, &u) in cells.iter().enumerate() {
                for &v in &cells[i + 1..] {
                    let symbol = square.get(u.0, u.1);
                    if symbol == square.get(v.0, v.1) {
                        let prev = covered.insert(
                            CellPair {
                                symbol,
                                first: u.min(v),
                                second: u.max(v),
                            },
                            idx,
                        );
                        debug_assert!(prev.is_none(), "pair covered by two subsquares");
                    }
                }
            }
        }
        CoverageMap { covered }
    }

    /// Index of the covering subsquare, or `None` if uncovered.
    pub fn covering(&self, pair: &CellPair) -> Option<usize> {
        self.covered.get(pair).copied()
    }

    pub fn covered_pairs(&self) -> usize {
        self.covered.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellPair, &usize)> {
        self.covered.iter()
    }

    /// Uncovered same-symbol pairs ordered by (symbol, first cell, second cell).
    pub fn uncovered<'a>(&'a self, square: &'a LatinSquare) -> impl Iterator<Item = CellPair> + 'a {
        let n = square.order();
        (0..n).flat_map(move |s| {
            (0..n).flat_map(move |r1| {
                (r1 + 1..n).filter_map(move |r2| {
                    let pair = CellPair {
                        symbol: s,
                        first: (r1, square.col_of(r1, s)),
                        second: (r2, square.col_of(r2, s)),
                    };
                    (!self.covered.contains_key(&pair)).then_some(pair)
                })
            })
        })
    }
}

/// Conditions (1)–(3) with their evidence.
#[derive(Debug, Clone)]
pub struct Conditions123 {
    pub order: usize,
    pub count2: usize,
    pub count3: usize,
    pub bound: Ratio<u64>,
    /// the bound is attained
    pub cond1: bool,
    /// every same-symbol pair lies in an order-3 subsquare
    pub cond2: bool,
    /// every cell lies in `(n-1)/2` order-3 subsquares
    pub cond3: bool,
    pub uncovered: Option<CellPair>,
    /// first cell (row-major) whose count differs from `(n-1)/2`, with its count
    pub deficient: Option<((usize, usize), usize)>,
    /// row-major per-cell subsquare counts
    pub per_cell_counts: Vec<usize>,
    pub subsquares: Vec<Subsquare>,
    pub coverage: CoverageMap,
}

pub fn check_conditions_123(square: &LatinSquare) -> Conditions123 {
    let n = square.order();
    let subsquares = enumerate_subsquares(square, 3).expect("order 3 is supported");
    let count2 = enumerate_subsquares(square, 2).expect("order 2 is supported").len();
    let count3 = subsquares.len();
    let bound = van_rees_bound(n);
    let cond1 = Ratio::from_integer(count3 as u64) == bound;

    let coverage = CoverageMap::build(square, &subsquares);
    let uncovered = coverage.uncovered(square).next();

    let mut per_cell_counts = vec![0usize; n * n];
    for s in &subsquares {
        for (r, c) in s.cells() {
            per_cell_counts[r * n + c] += 1;
        }
    }
    let target = (n % 2 == 1).then(|| (n - 1) / 2);
    let deficient = per_cell_counts
        .iter()
        .enumerate()
        .find(|(_, &k)| Some(k) != target)
        .map(|(i, &k)| ((i / n, i % n), k));

    Conditions123 {
        order: n,
        count2,
        count3,
        bound,
        cond1,
        cond2: uncovered.is_none(),
        cond3: deficient.is_none(),
        uncovered,
        deficient,
        per_cell_counts,
        subsquares,
        coverage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> LatinSquare {
        LatinSquare::from_fn(3, |r, c| (r + c) % 3)
    }

    fn z3sq() -> LatinSquare {
        LatinSquare::from_fn(9, |r, c| 3 * ((r / 3 + c / 3) % 3) + (r % 3 + c % 3) % 3)
    }

    #[test]
    fn bound_values() {
        assert_eq!(van_rees_bound(15), Ratio::from_integer(175));
        assert_eq!(van_rees_bound(3), Ratio::from_integer(1));
        assert_eq!(van_rees_bound(27), Ratio::from_integer(1053));
        assert_eq!(van_rees_bound(7), Ratio::new(49, 3));
        assert_eq!(van_rees_bound(1), Ratio::from_integer(0));
    }

    #[test]
    fn z3_is_its_own_subsquare() {
        let subs = enumerate_subsquares(&z3(), 3).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].rows, vec![0, 1, 2]);
        let c = check_conditions_123(&z3());
        assert!(c.cond1 && c.cond2 && c.cond3);
        assert!(c.per_cell_counts.iter().all(|&k| k == 1));
    }

    #[test]
    fn elementary_abelian_nine_meets_bound() {
        let c = check_conditions_123(&z3sq());
        assert_eq!(c.count3, 36);
        assert_eq!(c.count2, 0);
        assert!(c.cond1 && c.cond2 && c.cond3);
        assert_eq!(c.coverage.covered_pairs(), 9 * 36);
    }

    #[test]
    fn klein_group_intercalates() {
        let v4 = LatinSquare::from_fn(4, |r, c| r ^ c);
        let subs = enumerate_subsquares(&v4, 2).unwrap();
        // each pair of rows of Z2xZ2 splits the columns into two intercalates
        assert_eq!(subs.len(), 12);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|s| s.is_valid_in(&v4)));
    }

    #[test]
    fn even_order_fails_every_condition() {
        let v4 = LatinSquare::from_fn(4, |r, c| r ^ c);
        let c = check_conditions_123(&v4);
        assert!(!c.cond1 && !c.cond2 && !c.cond3);
        assert_eq!(c.deficient, Some(((0, 0), 0)));
    }

    #[test]
    fn rejects_unsupported_orders() {
        assert_eq!(
            enumerate_subsquares(&z3(), 4),
            Err(SubsquareError::UnsupportedOrder(4))
        );
    }
}
