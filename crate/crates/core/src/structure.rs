//! Subloops, nuclei and center, normality, and quotient loops.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::identities::NamedProperty;
use crate::set::ElementSet;
use crate::square::{LatinSquare, LoopTable};
use crate::subsquares::Subsquare;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("the element set is not closed under the product ({x}·{y} = {product} escapes)")]
    NotClosed { x: usize, y: usize, product: usize },
    #[error("the subloop is not normal: {0:?}")]
    NotNormal(NormalityFailure),
    #[error("seed set is empty")]
    EmptySeed,
    #[error("element {index} out of range for order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("subloop has index {found}, expected 3")]
    NotIndexThree { found: usize },
    #[error("element {0} lies in the subloop")]
    InsideSubloop(usize),
}

/// A product-closed set of elements containing the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subloop {
    elements: ElementSet,
}

impl Subloop {
    /// Validates closure (which in a finite loop implies a subloop).
    pub fn new(q: &LoopTable, elements: ElementSet) -> Result<Self, StructureError> {
        for x in elements.iter() {
            if x >= q.order() {
                return Err(StructureError::OutOfRange {
                    index: x,
                    order: q.order(),
                });
            }
        }
        if let Some((x, y, product)) = closure_violation(q, &elements) {
            return Err(StructureError::NotClosed { x, y, product });
        }
        if !elements.contains(0) {
            // an empty set is closed but is not a subloop
            return Err(StructureError::EmptySeed);
        }
        Ok(Subloop { elements })
    }

    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.contains(x)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements.to_vec()
    }

    /// The subloop's own multiplication table, elements listed in ascending order.
    pub fn as_loop(&self, q: &LoopTable) -> LoopTable {
        let elems = self.to_vec();
        let mut pos = vec![usize::MAX; q.order()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let k = elems.len();
        let cells: Vec<usize> = (0..k * k)
            .map(|i| pos[q.product(elems[i / k], elems[i % k])])
            .collect();
        let mut sq = LatinSquare::new(k, &cells).expect("subloop table is latin");
        if q.labels().is_some() {
            sq = sq
                .with_labels(elems.iter().map(|&x| q.label(x)).collect())
                .expect("label count");
        }
        LoopTable::new(sq).expect("identity stays first")
    }
}

impl Serialize for Subloop {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

fn closure_violation(q: &LatinSquare, set: &ElementSet) -> Option<(usize, usize, usize)> {
    for x in set.iter() {
        for y in set.iter() {
            let p = q.product(x, y);
            if !set.contains(p) {
                return Some((x, y, p));
            }
        }
    }
    None
}

fn close(q: &LatinSquare, mut set: ElementSet) -> ElementSet {
    set.insert(0);
    let mut frontier: Vec<usize> = set.to_vec();
    while let Some(x) = frontier.pop() {
        let members: Vec<usize> = set.to_vec();
        for y in members {
            for p in [q.product(x, y), q.product(y, x)] {
                if set.insert(p) {
                    frontier.push(p);
                }
            }
        }
    }
    set
}

/// The smallest subloop containing `seed`.
pub fn generated_subloop(q: &LoopTable, seed: &[usize]) -> Result<Subloop, StructureError> {
    if seed.is_empty() {
        return Err(StructureError::EmptySeed);
    }
    for &x in seed {
        if x >= q.order() {
            return Err(StructureError::OutOfRange {
                index: x,
                order: q.order(),
            });
        }
    }
    Ok(Subloop {
        elements: close(q, seed.iter().copied().collect()),
    })
}

/// Every subloop, sorted by size and then lexicographically.
///
/// Closes all singletons and pairs, then joins of found subloops until no new
/// subloop appears.
pub fn all_subloops(q: &LoopTable) -> Vec<Subloop> {
    let n = q.order();
    let mut found: BTreeSet<ElementSet> = BTreeSet::new();
    found.insert(ElementSet::singleton(0));
    let mut cyclic = Vec::new();
    for x in 0..n {
        let s = close(q, ElementSet::singleton(x));
        cyclic.push(s);
        found.insert(s);
    }
    for x in 0..n {
        for y in x + 1..n {
            if cyclic[x].contains(y) || cyclic[y].contains(x) {
                continue;
            }
            found.insert(close(q, cyclic[x].union(&cyclic[y])));
        }
    }
    let mut frontier: Vec<ElementSet> = found.iter().copied().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<ElementSet> = found.iter().copied().collect();
        let mut next = Vec::new();
        for a in &frontier {
            for b in &snapshot {
                if a.is_subset(b) || b.is_subset(a) {
                    continue;
                }
                let j = close(q, a.union(b));
                if found.insert(j) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Subloop> = found
        .into_iter()
        .map(|elements| Subloop { elements })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.elements.cmp(&b.elements)));
    out
}

/// Left, middle and right nuclei and the center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NucleiReport {
    pub left: Subloop,
    pub middle: Subloop,
    pub right: Subloop,
    pub center: Subloop,
}

impl NucleiReport {
    pub fn sizes(&self) -> [usize; 3] {
        [self.left.len(), self.middle.len(), self.right.len()]
    }
}

pub fn nuclei_and_center(q: &LoopTable) -> NucleiReport {
    let n = q.order();
    let m = |x: usize, y: usize| q.product(x, y);
    let all2 = |f: &dyn Fn(usize, usize) -> bool| (0..n).all(|x| (0..n).all(|y| f(x, y)));
    let mut left = ElementSet::new();
    let mut middle = ElementSet::new();
    let mut right = ElementSet::new();
    let mut commuting = ElementSet::new();
    for a in 0..n {
        if all2(&|x, y| m(m(a, x), y) == m(a, m(x, y))) {
            left.insert(a);
        }
        if all2(&|x, y| m(m(x, a), y) == m(x, m(a, y))) {
            middle.insert(a);
        }
        if all2(&|x, y| m(m(x, y), a) == m(x, m(y, a))) {
            right.insert(a);
        }
        if (0..n).all(|x| m(a, x) == m(x, a)) {
            commuting.insert(a);
        }
    }
    let center = left
        .intersection(&middle)
        .intersection(&right)
        .intersection(&commuting);
    NucleiReport {
        left: Subloop { elements: left },
        middle: Subloop { elements: middle },
        right: Subloop { elements: right },
        center: Subloop { elements: center },
    }
}

/// Which of the three normality equations failed, and where.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "equation", rename_all = "kebab-case")]
pub enum NormalityFailure {
    /// `xS ≠ Sx`
    Commutes { x: usize },
    /// `x(yS) ≠ (xy)S`
    LeftAssociates { x: usize, y: usize },
    /// `(Sx)y ≠ S(xy)`
    RightAssociates { x: usize, y: usize },
}

fn left_coset(q: &LatinSquare, x: usize, s: &ElementSet) -> ElementSet {
    s.iter().map(|t| q.product(x, t)).collect()
}

fn right_coset(q: &LatinSquare, s: &ElementSet, x: usize) -> ElementSet {
    s.iter().map(|t| q.product(t, x)).collect()
}

/// `xS = Sx`, `x(yS) = (xy)S` and `(Sx)y = S(xy)` for all `x, y`.
pub fn normality_failure(q: &LoopTable, s: &Subloop) -> Option<NormalityFailure> {
    let n = q.order();
    let set = s.elements;
    let lc: Vec<ElementSet> = (0..n).map(|x| left_coset(q, x, &set)).collect();
    let rc: Vec<ElementSet> = (0..n).map(|x| right_coset(q, &set, x)).collect();
    if let Some(x) = (0..n).find(|&x| lc[x] != rc[x]) {
        return Some(NormalityFailure::Commutes { x });
    }
    for x in 0..n {
        for y in 0..n {
            let xy = q.product(x, y);
            let lhs: ElementSet = lc[y].iter().map(|t| q.product(x, t)).collect();
            if lhs != lc[xy] {
                return Some(NormalityFailure::LeftAssociates { x, y });
            }
            let rhs: ElementSet = rc[x].iter().map(|t| q.product(t, y)).collect();
            if rhs != rc[xy] {
                return Some(NormalityFailure::RightAssociates { x, y });
            }
        }
    }
    None
}

pub fn is_normal(q: &LoopTable, s: &Subloop) -> Result<bool, StructureError> {
    // re-validate: a Subloop built for a different table may not be closed here
    Subloop::new(q, s.elements)?;
    Ok(normality_failure(q, s).is_none())
}

/// A quotient loop together with its cosets.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub table: LoopTable,
    /// `cosets[i]` is the class sent to index `i`; `cosets[0]` is the subloop itself
    pub cosets: Vec<ElementSet>,
    /// least element of each coset, used for labels
    pub representatives: Vec<usize>,
}

/// The coset loop `Q/S`; cosets ordered by least element.
pub fn quotient_loop(q: &LoopTable, s: &Subloop) -> Result<Quotient, StructureError> {
    Subloop::new(q, s.elements)?;
    if let Some(f) = normality_failure(q, s) {
        return Err(StructureError::NotNormal(f));
    }
    let n = q.order();
    let mut class_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    let mut representatives = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = left_coset(q, x, &s.elements);
        for y in c.iter() {
            class_of[y] = cosets.len();
        }
        cosets.push(c);
        representatives.push(x);
    }
    let k = cosets.len();
    let cells: Vec<usize> = (0..k * k)
        .map(|i| class_of[q.product(representatives[i / k], representatives[i % k])])
        .collect();
    let sq = LatinSquare::new(k, &cells)
        .expect("coset product of a normal subloop is latin")
        .with_labels(representatives.iter().map(|&r| q.label(r)).collect())
        .expect("label count");
    Ok(Quotient {
        table: LoopTable::new(sq).expect("coset of the identity is first"),
        cosets,
        representatives,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureFlags {
    pub is_group: bool,
    pub is_elementary_abelian3: bool,
    pub is_simple: bool,
}

pub fn classify_structure(q: &LoopTable) -> StructureFlags {
    use crate::identities::check_identity;
    let holds = |p| check_identity(q, p).map(|v| v.holds).unwrap_or(false);
    let is_group = holds(NamedProperty::Associative);
    let is_elementary_abelian3 =
        is_group && holds(NamedProperty::Commutative) && holds(NamedProperty::Exponent3);
    let n = q.order();
    let is_simple = all_subloops(q)
        .iter()
        .filter(|s| s.len() > 1 && s.len() < n)
        .all(|s| normality_failure(q, s).is_some());
    StructureFlags {
        is_group,
        is_elementary_abelian3,
        is_simple,
    }
}

/// The translated subsquares arising from an index-3 subloop `S` and `q ∉ S`.
#[derive(Debug, Clone, Serialize)]
pub struct IndexThreeDiagnostic {
    pub q: usize,
    /// `{x\q : x ∈ S}`
    pub t_q: Vec<usize>,
    /// `{q/x : x ∈ S}`
    pub u_q: Vec<usize>,
    /// `U_q × S` and `S × T_q` are subsquares on one common symbol set
    pub side_blocks_agree: bool,
    /// `(Q∖(S∪U_q)) × T_q` and `U_q × (Q∖(S∪T_q))` are subsquares on the symbols of `S`
    pub complement_blocks_on_s: bool,
}

impl IndexThreeDiagnostic {
    pub fn holds(&self) -> bool {
        self.side_blocks_agree && self.complement_blocks_on_s
    }
}

fn block(q: &LatinSquare, rows: &ElementSet, cols: &ElementSet) -> Option<Subsquare> {
    let symbols: ElementSet = rows
        .iter()
        .flat_map(|r| cols.iter().map(move |c| q.get(r, c)))
        .collect();
    let sub = Subsquare {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        symbols: symbols.to_vec(),
    };
    (rows.len() == cols.len() && symbols.len() == rows.len()).then_some(sub)
}

/// Checks the subsquare structure an index-3 subloop induces around `q ∉ S`.
pub fn index_three_diagnostic(
    lp: &LoopTable,
    s: &Subloop,
    q: usize,
) -> Result<IndexThreeDiagnostic, StructureError> {
    Subloop::new(lp, s.elements)?;
    let n = lp.order();
    if s.len() * 3 != n {
        return Err(StructureError::NotIndexThree {
            found: if s.is_empty() { 0 } else { n / s.len() },
        });
    }
    if q >= n {
        return Err(StructureError::OutOfRange { index: q, order: n });
    }
    if s.contains(q) {
        return Err(StructureError::InsideSubloop(q));
    }
    let set = s.elements;
    let t_q: ElementSet = set.iter().map(|x| lp.ldiv(x, q)).collect();
    let u_q: ElementSet = set.iter().map(|x| lp.rdiv(q, x)).collect();
    let full = ElementSet::full(n);
    let not = |a: &ElementSet| -> ElementSet { full.iter().filter(|x| !a.contains(*x)).collect() };

    let side_blocks_agree = match (block(lp, &u_q, &set), block(lp, &set, &t_q)) {
        (Some(a), Some(b)) => a.symbols == b.symbols,
        _ => false,
    };
    let s_syms = set.to_vec();
    let complement_blocks_on_s = [
        block(lp, &not(&set.union(&u_q)), &t_q),
        block(lp, &u_q, &not(&set.union(&t_q))),
    ]
    .iter()
    .all(|b| b.as_ref().is_some_and(|b| b.symbols == s_syms));

    Ok(IndexThreeDiagnostic {
        q,
        t_q: t_q.to_vec(),
        u_q: u_q.to_vec(),
        side_blocks_agree,
        complement_blocks_on_s,
    })
}
