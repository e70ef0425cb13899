//! Conjugates (parastrophes), isotopies, and principal loop isotopes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::square::{LatinSquare, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("isotopy acts on degree {found}, square has order {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("unknown conjugate name '{0}' (expected one of rcs, crs, rsc, scr, csr, src)")]
    UnknownConjugate(String),
    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
}

/// One of the six conjugates of a latin square.
///
/// The three letters name which coordinate of the original triple
/// `(row, column, symbol)` becomes the new row, new column and new symbol:
/// `Crs` is the transpose, `Rsc` swaps columns with symbols, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjugateName {
    Rcs,
    Crs,
    Rsc,
    Scr,
    Csr,
    Src,
}

impl ConjugateName {
    pub const ALL: [ConjugateName; 6] = [
        ConjugateName::Rcs,
        ConjugateName::Crs,
        ConjugateName::Rsc,
        ConjugateName::Scr,
        ConjugateName::Csr,
        ConjugateName::Src,
    ];

    /// `sources()[i]` is the old coordinate that lands in new coordinate `i`.
    pub fn sources(self) -> [usize; 3] {
        match self {
            ConjugateName::Rcs => [0, 1, 2],
            ConjugateName::Crs => [1, 0, 2],
            ConjugateName::Rsc => [0, 2, 1],
            ConjugateName::Scr => [2, 1, 0],
            ConjugateName::Csr => [1, 2, 0],
            ConjugateName::Src => [2, 0, 1],
        }
    }

    fn from_sources(src: [usize; 3]) -> Self {
        *Self::ALL
            .iter()
            .find(|c| c.sources() == src)
            .expect("every arrangement of 0,1,2 is a conjugate")
    }

    #[inline]
    pub fn permute(self, triple: [usize; 3]) -> [usize; 3] {
        let s = self.sources();
        [triple[s[0]], triple[s[1]], triple[s[2]]]
    }

    /// The conjugate equal to applying `self` and then `next`.
    pub fn then(self, next: ConjugateName) -> ConjugateName {
        let p = self.sources();
        let q = next.sources();
        Self::from_sources([p[q[0]], p[q[1]], p[q[2]]])
    }

    pub fn inverse(self) -> ConjugateName {
        *Self::ALL
            .iter()
            .find(|c| self.then(**c) == ConjugateName::Rcs)
            .expect("S3 is a group")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConjugateName::Rcs => "rcs",
            ConjugateName::Crs => "crs",
            ConjugateName::Rsc => "rsc",
            ConjugateName::Scr => "scr",
            ConjugateName::Csr => "csr",
            ConjugateName::Src => "src",
        }
    }
}

impl fmt::Display for ConjugateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConjugateName {
    type Err = TransformError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rcs" | "identity" => Ok(ConjugateName::Rcs),
            "crs" | "transpose" => Ok(ConjugateName::Crs),
            "rsc" => Ok(ConjugateName::Rsc),
            "scr" => Ok(ConjugateName::Scr),
            "csr" => Ok(ConjugateName::Csr),
            "src" => Ok(ConjugateName::Src),
            _ => Err(TransformError::UnknownConjugate(s.to_string())),
        }
    }
}

/// Reinterprets the triple set of `square` under the chosen coordinate permutation.
pub fn conjugate(square: &LatinSquare, which: ConjugateName) -> LatinSquare {
    let n = square.order();
    let mut cells = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            let [nr, nc, ns] = which.permute([r, c, square.get(r, c)]);
            cells[nr * n + nc] = ns as u8;
        }
    }
    LatinSquare::from_valid_cells(n, cells)
}

/// Row, column and symbol permutations acting on one square.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsotopyTriple {
    pub row_perm: Permutation,
    pub col_perm: Permutation,
    pub sym_perm: Permutation,
}

impl IsotopyTriple {
    pub fn new(
        row_perm: Permutation,
        col_perm: Permutation,
        sym_perm: Permutation,
    ) -> Result<Self, TransformError> {
        let d = row_perm.degree();
        for p in [&col_perm, &sym_perm] {
            if p.degree() != d {
                return Err(TransformError::DegreeMismatch {
                    expected: d,
                    found: p.degree(),
                });
            }
        }
        Ok(IsotopyTriple {
            row_perm,
            col_perm,
            sym_perm,
        })
    }

    pub fn identity(n: usize) -> Self {
        let id = Permutation::identity(n);
        IsotopyTriple {
            row_perm: id.clone(),
            col_perm: id.clone(),
            sym_perm: id,
        }
    }

    /// The isomorphism `(p, p, p)`.
    pub fn isomorphism(p: Permutation) -> Self {
        IsotopyTriple {
            row_perm: p.clone(),
            col_perm: p.clone(),
            sym_perm: p,
        }
    }

    pub fn degree(&self) -> usize {
        self.row_perm.degree()
    }

    pub fn inverse(&self) -> Self {
        IsotopyTriple {
            row_perm: self.row_perm.inverse(),
            col_perm: self.col_perm.inverse(),
            sym_perm: self.sym_perm.inverse(),
        }
    }

    /// Apply `self` first, then `next`.
    pub fn then(&self, next: &IsotopyTriple) -> Self {
        IsotopyTriple {
            row_perm: next.row_perm.compose(&self.row_perm),
            col_perm: next.col_perm.compose(&self.col_perm),
            sym_perm: next.sym_perm.compose(&self.sym_perm),
        }
    }
}

/// Output cell `(row_perm(r), col_perm(c))` holds `sym_perm(square[r][c])`.
pub fn apply_isotopy(square: &LatinSquare, t: &IsotopyTriple) -> Result<LatinSquare, TransformError> {
    let n = square.order();
    if t.degree() != n {
        return Err(TransformError::DegreeMismatch {
            expected: n,
            found: t.degree(),
        });
    }
    let mut cells = vec![0u8; n * n];
    for r in 0..n {
        for c in 0..n {
            cells[t.row_perm.apply(r) * n + t.col_perm.apply(c)] =
                t.sym_perm.apply(square.get(r, c)) as u8;
        }
    }
    let out = LatinSquare::from_valid_cells(n, cells);
    Ok(match square.labels() {
        Some(labels) if t.sym_perm.is_identity() => out
            .with_labels(labels.to_vec())
            .expect("label count unchanged"),
        _ => out,
    })
}

/// A loop isotope together with the maps that produced it.
#[derive(Debug, Clone)]
pub struct LoopIsotope {
    pub table: LoopTable,
    /// Original symbol ↦ index in `table`; sends the neutral element `b·a` to 0.
    pub relabel: Permutation,
    /// Isotopy carrying the input square onto `table`.
    pub triple: IsotopyTriple,
}

/// Relabeling that moves `e` to 0 and keeps the other symbols in order.
pub(crate) fn neutral_first(n: usize, e: usize) -> Permutation {
    Permutation::from_images_unchecked(
        (0..n)
            .map(|s| match s.cmp(&e) {
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Less => s + 1,
                std::cmp::Ordering::Greater => s,
            })
            .collect(),
    )
}

/// The loop `x∘y = R_a⁻¹(x)·L_b⁻¹(y)`, whose neutral element `b·a` is relabeled to 0.
pub fn loop_isotope(q: &LatinSquare, a: usize, b: usize) -> Result<LoopIsotope, TransformError> {
    let n = q.order();
    for index in [a, b] {
        if index >= n {
            return Err(TransformError::IndexOutOfRange { index, order: n });
        }
    }
    let sigma = neutral_first(n, q.get(b, a));
    // Row u·a, column b·v holds u·v.
    let row_perm =
        Permutation::from_images_unchecked((0..n).map(|u| sigma.apply(q.get(u, a))).collect());
    let col_perm =
        Permutation::from_images_unchecked((0..n).map(|v| sigma.apply(q.get(b, v))).collect());
    let triple = IsotopyTriple {
        row_perm,
        col_perm,
        sym_perm: sigma.clone(),
    };
    let mut square = apply_isotopy(q, &triple)?;
    if let Some(labels) = q.labels() {
        let mut moved = labels.to_vec();
        for (i, l) in labels.iter().enumerate() {
            moved[sigma.apply(i)] = l.clone();
        }
        square = square.with_labels(moved).expect("label count unchanged");
    }
    let table = LoopTable::new(square).expect("principal isotope has identity at index 0");
    Ok(LoopIsotope {
        table,
        relabel: sigma,
        triple,
    })
}

/// The loop isotope `Q_{0,0}`: the symbol in cell (0,0) becomes `ε`.
///
/// A square that already satisfies the loop invariant comes back unchanged.
pub fn normalize_loop(square: &LatinSquare) -> LoopTable {
    if let Ok(table) = LoopTable::new(square.clone()) {
        return table;
    }
    loop_isotope(square, 0, 0)
        .expect("order is at least 1")
        .table
}

/// Fast evaluator for `Q_{a,b}` without relabeling: neutral element is `b·a`.
#[derive(Debug, Clone)]
pub(crate) struct IsotopeView<'a> {
    q: &'a LatinSquare,
    a: usize,
    b: usize,
    pub neutral: usize,
}

impl<'a> IsotopeView<'a> {
    pub fn new(q: &'a LatinSquare, a: usize, b: usize) -> Self {
        IsotopeView {
            q,
            a,
            b,
            neutral: q.get(b, a),
        }
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.q.get(self.q.rdiv(x, self.a), self.q.ldiv(self.b, y))
    }

    /// Materializes the product table (not relabeled; neutral stays at `b·a`).
    pub fn table(&self) -> LatinSquare {
        let n = self.q.order();
        let cells = (0..n * n)
            .map(|i| self.mul(i / n, i % n) as u8)
            .collect();
        LatinSquare::from_valid_cells(n, cells)
    }
}
