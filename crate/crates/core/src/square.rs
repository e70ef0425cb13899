//! Latin squares, loop tables, and the quasigroup operations read off them.
//!
//! A [`LatinSquare`] is the unbordered Cayley table of a quasigroup: the
//! product `x·y` is the entry in row `x`, column `y`. Both division tables are
//! precomputed at construction so `x\y` and `x/y` are single lookups.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::set::MAX_ORDER;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("table is empty")]
    Empty,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("expected {expected} cells for an order-{order} square, got {found}")]
    Shape {
        order: usize,
        expected: usize,
        found: usize,
    },
    #[error("not latin: cell ({row}, {col}) repeats a symbol or is out of range")]
    NotLatin { row: usize, col: usize },
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("index 0 is not a two-sided identity: cell ({row}, {col}) breaks it")]
    NotALoop { row: usize, col: usize },
}

/// Location-carrying errors from [`parse_table`]. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("no table rows found")]
    Empty,
    #[error("line {line}: expected {expected} tokens, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: token '{token}' repeats within the row")]
    DuplicateInRow {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}, column {column}: token '{token}' repeats within the column")]
    DuplicateInColumn {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}, column {column}: token '{token}' does not occur in the first row")]
    UnknownToken {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
}

/// Which quasigroup operation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Product,
    LeftDivision,
    RightDivision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Outcome of [`validate_latin`]: the first offending cell in row-major order, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatinVerdict {
    pub valid: bool,
    pub violation: Option<(usize, usize)>,
}

/// Checks an `n×n` row-major array for the latin property.
///
/// The reported violation is the earliest cell (row-major) whose symbol is out
/// of range or already appeared earlier in its row or column.
pub fn validate_latin(n: usize, cells: &[usize]) -> LatinVerdict {
    assert_eq!(cells.len(), n * n, "array is not square");
    let mut row_seen = vec![false; n * n];
    let mut col_seen = vec![false; n * n];
    for r in 0..n {
        for c in 0..n {
            let s = cells[r * n + c];
            if s >= n || row_seen[r * n + s] || col_seen[c * n + s] {
                return LatinVerdict {
                    valid: false,
                    violation: Some((r, c)),
                };
            }
            row_seen[r * n + s] = true;
            col_seen[c * n + s] = true;
        }
    }
    LatinVerdict {
        valid: true,
        violation: None,
    }
}

/// An `n×n` latin square over symbols `0..n`, with optional display labels.
///
/// Equality and hashing look at the cells only.
#[derive(Clone)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
    // row_pos[x*n + s] = column of s in row x
    row_pos: Vec<u8>,
    // col_pos[y*n + s] = row of s in column y
    col_pos: Vec<u8>,
    labels: Option<Vec<String>>,
}

impl LatinSquare {
    /// Builds a square from a row-major cell array, validating it.
    pub fn new(n: usize, cells: &[usize]) -> Result<Self, LatinError> {
        if n == 0 {
            return Err(LatinError::Empty);
        }
        if n > MAX_ORDER {
            return Err(LatinError::TooLarge(n));
        }
        if cells.len() != n * n {
            return Err(LatinError::Shape {
                order: n,
                expected: n * n,
                found: cells.len(),
            });
        }
        let verdict = validate_latin(n, cells);
        if let Some((row, col)) = verdict.violation {
            return Err(LatinError::NotLatin { row, col });
        }
        Ok(Self::from_valid_cells(
            n,
            cells.iter().map(|&s| s as u8).collect(),
        ))
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, LatinError> {
        let n = rows.len();
        let flat: Vec<usize> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatinError::Shape {
                order: n,
                expected: n * n,
                found: flat.len(),
            });
        }
        Self::new(n, &flat)
    }

    /// Builds from a closure `f(row, col)`; panics if the result is not latin.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let cells: Vec<usize> = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(n, &cells).expect("from_fn produced a non-latin table")
    }

    pub(crate) fn from_valid_cells(n: usize, cells: Vec<u8>) -> Self {
        let mut row_pos = vec![0u8; n * n];
        let mut col_pos = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                let s = cells[r * n + c] as usize;
                row_pos[r * n + s] = c as u8;
                col_pos[c * n + s] = r as u8;
            }
        }
        LatinSquare {
            n,
            cells,
            row_pos,
            col_pos,
            labels: None,
        }
    }

    /// Attaches display labels (one per symbol index).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LatinError> {
        if labels.len() != self.n {
            return Err(LatinError::LabelCount {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label token for index `i`, falling back to the decimal index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Like [`label`](Self::label) but renders the file token `e0` as `ε`.
    pub fn display_label(&self, i: usize) -> String {
        let l = self.label(i);
        if l == "e0" {
            "ε".to_string()
        } else {
            l
        }
    }

    /// Index of a label token, or a decimal index when no labels are attached.
    pub fn index_of(&self, token: &str) -> Option<usize> {
        let token = if token == "ε" { "e0" } else { token };
        match &self.labels {
            Some(l) => l.iter().position(|t| t == token),
            None => token.parse().ok().filter(|&i| i < self.n),
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col] as usize
    }

    #[inline]
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.get(x, y)
    }

    /// `x\y`: the unique `z` with `x·z = y`.
    #[inline]
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.row_pos[x * self.n + y] as usize
    }

    /// `x/y`: the unique `z` with `z·y = x`.
    #[inline]
    pub fn rdiv(&self, x: usize, y: usize) -> usize {
        self.col_pos[y * self.n + x] as usize
    }

    /// Column holding symbol `s` in row `r`.
    #[inline]
    pub fn col_of(&self, r: usize, s: usize) -> usize {
        self.row_pos[r * self.n + s] as usize
    }

    /// Row holding symbol `s` in column `c`.
    #[inline]
    pub fn row_of(&self, c: usize, s: usize) -> usize {
        self.col_pos[c * self.n + s] as usize
    }

    pub fn evaluate(&self, op: Operation, x: usize, y: usize) -> Result<usize, LatinError> {
        for index in [x, y] {
            if index >= self.n {
                return Err(LatinError::IndexOutOfRange {
                    index,
                    order: self.n,
                });
            }
        }
        Ok(match op {
            Operation::Product => self.product(x, y),
            Operation::LeftDivision => self.ldiv(x, y),
            Operation::RightDivision => self.rdiv(x, y),
        })
    }

    /// `L_x: y ↦ x·y` or `R_x: y ↦ y·x`.
    pub fn translation(&self, side: Side, x: usize) -> Permutation {
        let images = match side {
            Side::Left => (0..self.n).map(|y| self.get(x, y)).collect(),
            Side::Right => (0..self.n).map(|y| self.get(y, x)).collect(),
        };
        Permutation::from_images_unchecked(images)
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|r| self.row(r).iter().map(|&s| s as usize).collect())
            .collect()
    }

    /// Index 0 is a two-sided identity.
    pub fn is_loop(&self) -> bool {
        self.loop_violation().is_none()
    }

    fn loop_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            if self.get(0, i) != i {
                return Some((0, i));
            }
            if self.get(i, 0) != i {
                return Some((i, 0));
            }
        }
        None
    }

    /// Serializes in the Cayley-table text format: one line per row,
    /// single-space separated tokens, trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n {
            let toks: Vec<String> = (0..self.n).map(|c| self.label(self.get(r, c))).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
        out
    }

    /// Relabels every symbol (rows, columns and entries) by `p`: an isomorphic copy.
    pub fn relabel(&self, p: &Permutation) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[p.apply(r) * n + p.apply(c)] = p.apply(self.get(r, c)) as u8;
            }
        }
        let mut out = LatinSquare::from_valid_cells(n, cells);
        if let Some(labels) = &self.labels {
            let mut moved = labels.clone();
            for (i, l) in labels.iter().enumerate() {
                moved[p.apply(i)] = l.clone();
            }
            out.labels = Some(moved);
        }
        out
    }
}

/// Serializes as the list of rows.
impl Serialize for LatinSquare {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl PartialEq for LatinSquare {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.cells == other.cells
    }
}

impl Eq for LatinSquare {}

impl Hash for LatinSquare {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.cells.hash(state);
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatinSquare(n={}) [", self.n)?;
        for r in 0..self.n {
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = (0..self.n)
            .map(|i| self.display_label(i).chars().count())
            .max()
            .unwrap_or(1);
        for r in 0..self.n {
            let toks: Vec<String> = (0..self.n)
                .map(|c| format!("{:>width$}", self.display_label(self.get(r, c))))
                .collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// A latin square in which index 0 is the neutral element `ε`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LoopTable(LatinSquare);

impl LoopTable {
    pub fn new(square: LatinSquare) -> Result<Self, LatinError> {
        match square.loop_violation() {
            None => Ok(LoopTable(square)),
            Some((row, col)) => Err(LatinError::NotALoop { row, col }),
        }
    }

    pub fn square(&self) -> &LatinSquare {
        &self.0
    }

    pub fn into_square(self) -> LatinSquare {
        self.0
    }
}

impl Serialize for LoopTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl TryFrom<LatinSquare> for LoopTable {
    type Error = LatinError;
    fn try_from(square: LatinSquare) -> Result<Self, Self::Error> {
        LoopTable::new(square)
    }
}

impl Deref for LoopTable {
    type Target = LatinSquare;
    fn deref(&self) -> &LatinSquare {
        &self.0
    }
}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Loop{:?}", self.0)
    }
}

/// Parses the whitespace-separated Cayley-table format.
///
/// Tokens are numbered by their order of appearance in the first row. Blank
/// lines are ignored.
pub fn parse_table(text: &str) -> Result<LatinSquare, ParseError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty())
        .collect();
    let Some((first_line, header)) = lines.first() else {
        return Err(ParseError::Empty);
    };
    let n = header.len();
    if n > MAX_ORDER {
        return Err(ParseError::TooLarge(n));
    }
    let mut labels: Vec<String> = Vec::with_capacity(n);
    for (j, tok) in header.iter().enumerate() {
        if labels.iter().any(|l| l == tok) {
            return Err(ParseError::DuplicateInRow {
                line: *first_line,
                column: j + 1,
                token: tok.to_string(),
            });
        }
        labels.push(tok.to_string());
    }
    if lines.len() != n {
        let (line, found) = lines
            .get(n)
            .map(|(l, t)| (*l, t.len()))
            .unwrap_or((lines.last().map_or(1, |(l, _)| *l + 1), 0));
        return Err(ParseError::Ragged {
            line,
            expected: n,
            found,
        });
    }
    let mut cells = vec![0usize; n * n];
    let mut col_seen = vec![false; n * n];
    for (r, (line, toks)) in lines.iter().enumerate() {
        if toks.len() != n {
            return Err(ParseError::Ragged {
                line: *line,
                expected: n,
                found: toks.len(),
            });
        }
        let mut row_seen = vec![false; n];
        for (c, tok) in toks.iter().enumerate() {
            let Some(s) = labels.iter().position(|l| l == tok) else {
                return Err(ParseError::UnknownToken {
                    line: *line,
                    column: c + 1,
                    token: tok.to_string(),
                });
            };
            if row_seen[s] {
                return Err(ParseError::DuplicateInRow {
                    line: *line,
                    column: c + 1,
                    token: tok.to_string(),
                });
            }
            if col_seen[c * n + s] {
                return Err(ParseError::DuplicateInColumn {
                    line: *line,
                    column: c + 1,
                    token: tok.to_string(),
                });
            }
            row_seen[s] = true;
            col_seen[c * n + s] = true;
            cells[r * n + c] = s;
        }
    }
    let square = LatinSquare::new(n, &cells).expect("parser checked the latin property");
    Ok(square
        .with_labels(labels)
        .expect("label count equals order"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z3: &str = "0 1 2\n1 2 0\n2 0 1\n";

    #[test]
    fn parse_cyclic_group() {
        let sq = parse_table(Z3).unwrap();
        assert_eq!(sq.order(), 3);
        assert_eq!(sq.to_rows(), vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert!(sq.is_loop());
        assert_eq!(sq.to_text(), Z3);
    }

    #[test]
    fn parse_single_cell() {
        let sq = parse_table("0").unwrap();
        assert_eq!(sq.order(), 1);
        assert!(sq.is_loop());
    }

    #[test]
    fn tokens_indexed_by_first_row_order() {
        let sq = parse_table("z a\na z\n").unwrap();
        assert_eq!(sq.labels().unwrap(), &["z".to_string(), "a".to_string()]);
        assert_eq!(sq.get(1, 1), 0);
    }

    #[test]
    fn parse_errors_carry_locations() {
        assert_eq!(parse_table("   \n"), Err(ParseError::Empty));
        assert!(matches!(
            parse_table("0 1\n1\n"),
            Err(ParseError::Ragged { line: 2, expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_table("0 1\n1 1\n"),
            Err(ParseError::DuplicateInRow { line: 2, column: 2, .. })
        ));
        assert!(matches!(
            parse_table("0 1\n0 1\n"),
            Err(ParseError::DuplicateInColumn { line: 2, column: 1, .. })
        ));
        assert!(matches!(
            parse_table("0 1\n1 x\n"),
            Err(ParseError::UnknownToken { line: 2, column: 2, .. })
        ));
        assert!(matches!(
            parse_table("0 1 2\n1 2 0\n"),
            Err(ParseError::Ragged { .. })
        ));
    }

    #[test]
    fn validate_reports_first_violation() {
        let v = validate_latin(2, &[0, 1, 0, 1]);
        assert!(!v.valid);
        assert_eq!(v.violation, Some((1, 0)));
        assert!(validate_latin(3, &[0, 1, 2, 1, 2, 0, 2, 0, 1]).valid);
        assert_eq!(validate_latin(2, &[0, 2, 1, 0]).violation, Some((0, 1)));
    }

    #[test]
    fn divisions_invert_the_product() {
        let sq = parse_table(Z3).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(sq.product(x, sq.ldiv(x, y)), y);
                assert_eq!(sq.product(sq.rdiv(x, y), y), x);
            }
        }
        assert!(matches!(
            sq.evaluate(Operation::Product, 3, 0),
            Err(LatinError::IndexOutOfRange { index: 3, order: 3 })
        ));
    }

    #[test]
    fn loop_table_rejects_non_loops() {
        let sq = LatinSquare::from_fn(3, |r, c| (2 * 3 - r - c) % 3);
        assert!(matches!(
            LoopTable::new(sq),
            Err(LatinError::NotALoop { .. })
        ));
    }
}
