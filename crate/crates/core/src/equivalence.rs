//! Isomorphism, isotopy and paratopy tests with invariant fingerprints.
//!
//! Every positive answer carries a witness that has been checked by
//! rebuilding the target square from the source.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::perm::Permutation;
use crate::set::ElementSet;
use crate::square::{LatinSquare, LoopTable};
use crate::structure::nuclei_and_center;
use crate::subsquares::enumerate_subsquares;
use crate::transforms::{apply_isotopy, conjugate, loop_isotope, ConjugateName, IsotopyTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Isomorphism,
    Isotopy,
    Paratopy,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Isomorphism => "isomorphism",
            Level::Isotopy => "isotopy",
            Level::Paratopy => "paratopy",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "isomorphism" | "iso" => Ok(Level::Isomorphism),
            "isotopy" | "isotopism" => Ok(Level::Isotopy),
            "paratopy" | "main-class" | "species" => Ok(Level::Paratopy),
            _ => Err(format!("unknown equivalence level '{s}'")),
        }
    }
}

/// Paratopy invariants of a latin square.
#[derive(Debug, Clone, Eq, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub order2_count: usize,
    pub order3_count: usize,
    pub order9_count: usize,
    /// sorted nucleus sizes of the loop isotope at every cell, as a sorted list
    pub nuclei: Vec<[usize; 3]>,
    /// `None` when not computed; compares equal to anything
    pub autotopisms: Option<u64>,
}

impl PartialEq for Fingerprint {
    fn eq(&self, other: &Self) -> bool {
        let atp = match (self.autotopisms, other.autotopisms) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        atp && self.order == other.order
            && self.order2_count == other.order2_count
            && self.order3_count == other.order3_count
            && self.order9_count == other.order9_count
            && self.nuclei == other.nuclei
    }
}

/// Subloops of size at most `max`, found by adjoining one element at a time.
fn small_subloops(q: &LatinSquare, max: usize) -> Vec<ElementSet> {
    let n = q.order();
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let mut queue = vec![ElementSet::singleton(0)];
    seen.insert(ElementSet::singleton(0));
    while let Some(s) = queue.pop() {
        for y in 0..n {
            if s.contains(y) {
                continue;
            }
            if let Some(t) = bounded_closure(q, s, y, max) {
                if seen.insert(t) {
                    queue.push(t);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Closure of `s ∪ {y}` under the product, or `None` once it exceeds `max`.
fn bounded_closure(q: &LatinSquare, s: ElementSet, y: usize, max: usize) -> Option<ElementSet> {
    let mut set = s;
    let mut members = s.to_vec();
    let mut pending = vec![y];
    while let Some(x) = pending.pop() {
        if !set.insert(x) {
            continue;
        }
        members.push(x);
        if members.len() > max {
            return None;
        }
        for &z in &members {
            for p in [q.product(x, z), q.product(z, x)] {
                if !set.contains(p) {
                    pending.push(p);
                }
            }
        }
    }
    Some(set)
}

/// Number of order-9 subsquares.
///
/// Subsquares through a cell are the subloops of the loop isotope at that
/// cell, so summing order-9 subloop counts over all cells counts each
/// subsquare 81 times.
pub fn count_order9_subsquares(square: &LatinSquare) -> usize {
    let n = square.order();
    if n < 9 || (n != 9 && n < 18) {
        return 0;
    }
    if n == 9 {
        return 1;
    }
    let total: usize = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let iso = loop_isotope(square, i % n, i / n).expect("in range");
            small_subloops(&iso.table, 9)
                .iter()
                .filter(|s| s.len() == 9)
                .count()
        })
        .sum();
    debug_assert_eq!(total % 81, 0);
    total / 81
}

/// Brute-force order-9 subsquare count over all row and column 9-subsets.
pub fn count_order9_subsquares_brute(square: &LatinSquare) -> usize {
    let n = square.order();
    if n < 9 {
        return 0;
    }
    let mut count = 0;
    for_each_subset(n, 9, &mut |rows| {
        // the symbols of a subsquare are those in row `rows[0]` at its columns;
        // pick each 9-set of columns whose row-0 symbols close up
        for_each_subset(n, 9, &mut |cols| {
            let symbols: ElementSet = cols.iter().map(|&c| square.get(rows[0], c)).collect();
            if rows
                .iter()
                .all(|&r| cols.iter().all(|&c| symbols.contains(square.get(r, c))))
            {
                count += 1;
            }
        });
    });
    count
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Fingerprint without the autotopism group order.
pub fn fingerprint(square: &LatinSquare) -> Fingerprint {
    let n = square.order();
    let mut nuclei: Vec<[usize; 3]> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let iso = loop_isotope(square, i % n, i / n).expect("in range");
            let mut s = nuclei_and_center(&iso.table).sizes();
            s.sort_unstable();
            s
        })
        .collect();
    nuclei.sort_unstable();
    Fingerprint {
        order: n,
        order2_count: enumerate_subsquares(square, 2).expect("supported").len(),
        order3_count: enumerate_subsquares(square, 3).expect("supported").len(),
        order9_count: count_order9_subsquares(square),
        nuclei,
        autotopisms: None,
    }
}

/// Fingerprint including the autotopism group order.
pub fn fingerprint_with_autotopisms(square: &LatinSquare) -> Fingerprint {
    Fingerprint {
        autotopisms: Some(autotopism_count(square)),
        ..fingerprint(square)
    }
}

/// Isomorphism-invariant data attached to each element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct ElementInvariant {
    left: Vec<usize>,
    right: Vec<usize>,
    idempotent: bool,
    commutant: usize,
    associates: [usize; 3],
}

fn element_invariants(q: &LatinSquare) -> Vec<ElementInvariant> {
    let n = q.order();
    let m = |x: usize, y: usize| q.product(x, y);
    (0..n)
        .into_par_iter()
        .map(|a| {
            let mut associates = [0usize; 3];
            for x in 0..n {
                for y in 0..n {
                    associates[0] += (m(m(a, x), y) == m(a, m(x, y))) as usize;
                    associates[1] += (m(m(x, a), y) == m(x, m(a, y))) as usize;
                    associates[2] += (m(m(x, y), a) == m(x, m(y, a))) as usize;
                }
            }
            ElementInvariant {
                left: q.translation(crate::square::Side::Left, a).cycle_type(),
                right: q.translation(crate::square::Side::Right, a).cycle_type(),
                idempotent: m(a, a) == a,
                commutant: (0..n).filter(|&x| m(a, x) == m(x, a)).count(),
                associates,
            }
        })
        .collect()
}

/// Cheap isomorphism invariant of a whole quasigroup.
fn profile(q: &LatinSquare) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    let n = q.order();
    let mut p: Vec<_> = (0..n)
        .map(|a| {
            (
                q.translation(crate::square::Side::Left, a).cycle_type(),
                q.translation(crate::square::Side::Right, a).cycle_type(),
                q.product(a, a) == a,
            )
        })
        .collect();
    p.sort_unstable();
    p
}

/// Backtracking over generator images, extending each choice by closure.
struct IsoSearch<'a> {
    a: &'a LatinSquare,
    b: &'a LatinSquare,
    gens: Vec<usize>,
    /// candidate images for each generator
    candidates: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct PartialMap {
    fwd: Vec<Option<usize>>,
    used: Vec<bool>,
    domain: Vec<usize>,
}

impl PartialMap {
    fn new(n: usize) -> Self {
        PartialMap {
            fwd: vec![None; n],
            used: vec![false; n],
            domain: Vec::with_capacity(n),
        }
    }

    fn set(&mut self, x: usize, y: usize) -> bool {
        match self.fwd[x] {
            Some(z) => z == y,
            None if self.used[y] => false,
            None => {
                self.fwd[x] = Some(y);
                self.used[y] = true;
                self.domain.push(x);
                true
            }
        }
    }
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a LatinSquare, b: &'a LatinSquare) -> Option<Self> {
        let n = a.order();
        let ia = element_invariants(a);
        let ib = element_invariants(b);
        let mut ca = ia.clone();
        let mut cb = ib.clone();
        ca.sort_unstable();
        cb.sort_unstable();
        if ca != cb {
            return None;
        }
        let mut class_size: BTreeMap<&ElementInvariant, usize> = BTreeMap::new();
        for inv in &ia {
            *class_size.entry(inv).or_default() += 1;
        }
        // greedy generators: each outside the closure of the previous ones,
        // preferring elements with rare invariants
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (class_size[&ia[x]], x));
        let mut gens = Vec::new();
        let mut span = ElementSet::new();
        for &x in &order {
            if span.len() == n {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = bounded_closure(a, span, x, n).expect("bounded by n");
            }
        }
        let candidates = gens
            .iter()
            .map(|&g| (0..n).filter(|&y| ib[y] == ia[g]).collect())
            .collect();
        Some(IsoSearch {
            a,
            b,
            gens,
            candidates,
        })
    }

    /// Adds `x ↦ y` and closes the domain under the product.
    fn extend(&self, map: &mut PartialMap, x: usize, y: usize) -> bool {
        if !map.set(x, y) {
            return false;
        }
        let mut i = map.domain.len() - 1;
        while i < map.domain.len() {
            let u = map.domain[i];
            let fu = map.fwd[u].expect("in domain");
            for j in 0..=i {
                let v = map.domain[j];
                let fv = map.fwd[v].expect("in domain");
                if !map.set(self.a.product(u, v), self.b.product(fu, fv))
                    || !map.set(self.a.product(v, u), self.b.product(fv, fu))
                {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    fn run(&self, depth: usize, map: &PartialMap, visit: &mut dyn FnMut(&PartialMap) -> bool) -> bool {
        if depth == self.gens.len() {
            return visit(map);
        }
        let g = self.gens[depth];
        for &y in &self.candidates[depth] {
            if map.used[y] {
                continue;
            }
            let mut next = map.clone();
            if self.extend(&mut next, g, y) && self.run(depth + 1, &next, visit) {
                return true;
            }
        }
        false
    }

    fn to_permutation(&self, map: &PartialMap) -> Permutation {
        Permutation::new(map.fwd.iter().map(|x| x.expect("total")).collect()).expect("injective")
    }

    /// First isomorphism in generator-image order.
    fn first(&self) -> Option<Permutation> {
        let n = self.a.order();
        let mut found = None;
        self.run(0, &PartialMap::new(n), &mut |m| {
            found = Some(self.to_permutation(m));
            true
        });
        found
    }

    fn count(&self) -> u64 {
        let n = self.a.order();
        let mut count = 0u64;
        self.run(0, &PartialMap::new(n), &mut |_| {
            count += 1;
            false
        });
        count
    }
}

/// A bijection `p` with `p(x·y) = p(x)·p(y)`, verified.
pub fn find_isomorphism(a: &LatinSquare, b: &LatinSquare) -> Option<Permutation> {
    if a.order() != b.order() {
        return None;
    }
    let p = IsoSearch::new(a, b)?.first()?;
    (apply_isotopy(a, &IsotopyTriple::isomorphism(p.clone())).ok()? == *b).then_some(p)
}

/// Order of the automorphism group.
pub fn automorphism_count(q: &LatinSquare) -> u64 {
    IsoSearch::new(q, q).map(|s| s.count()).unwrap_or(0)
}

/// Order of the autotopism group: automorphisms of the principal loop times
/// the number of cells whose loop isotope is isomorphic to it.
pub fn autotopism_count(square: &LatinSquare) -> u64 {
    let n = square.order();
    let base = loop_isotope(square, 0, 0).expect("order ≥ 1").table;
    let base_profile = profile(&base);
    let cells = (0..n * n)
        .into_par_iter()
        .filter(|&i| {
            let other = loop_isotope(square, i % n, i / n).expect("in range").table;
            profile(&other) == base_profile && find_isomorphism(&base, &other).is_some()
        })
        .count() as u64;
    cells * automorphism_count(&base)
}

/// An isotopy carrying `a` onto `b`, verified by reconstruction.
pub fn find_isotopy(a: &LatinSquare, b: &LatinSquare) -> Option<IsotopyTriple> {
    let n = a.order();
    if n != b.order() {
        return None;
    }
    let la = loop_isotope(a, 0, 0).expect("order ≥ 1");
    let target = profile(&la.table);
    let (tb, phi) = (0..n * n).into_par_iter().find_map_first(|i| {
        let lb = loop_isotope(b, i % n, i / n).expect("in range");
        if profile(&lb.table) != target {
            return None;
        }
        find_isomorphism(&la.table, &lb.table).map(|phi| (lb.triple, phi))
    })?;
    let t = la
        .triple
        .then(&IsotopyTriple::isomorphism(phi))
        .then(&tb.inverse());
    (apply_isotopy(a, &t).ok()? == *b).then_some(t)
}

/// Maps witnessing `apply_isotopy(a, triple) == conjugate(b, conjugate)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub triple: IsotopyTriple,
    pub conjugate: ConjugateName,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceVerdict {
    pub level: Level,
    pub equivalent: bool,
    pub witness: Option<EquivalenceWitness>,
    /// decided by differing invariants without a search
    pub separated_by_fingerprint: bool,
}

/// Decides equivalence at `level`. Differing fingerprints settle isotopy and
/// paratopy at once; otherwise a witness is searched for and re-checked.
pub fn equivalent(a: &LatinSquare, b: &LatinSquare, level: Level) -> EquivalenceVerdict {
    let no = |separated| EquivalenceVerdict {
        level,
        equivalent: false,
        witness: None,
        separated_by_fingerprint: separated,
    };
    if a.order() != b.order() {
        return no(true);
    }
    if level != Level::Isomorphism && fingerprint(a) != fingerprint(b) {
        return no(true);
    }
    let witness = match level {
        Level::Isomorphism => find_isomorphism(a, b).map(|p| EquivalenceWitness {
            triple: IsotopyTriple::isomorphism(p),
            conjugate: ConjugateName::Rcs,
        }),
        Level::Isotopy => find_isotopy(a, b).map(|triple| EquivalenceWitness {
            triple,
            conjugate: ConjugateName::Rcs,
        }),
        Level::Paratopy => ConjugateName::ALL.iter().find_map(|&c| {
            find_isotopy(a, &conjugate(b, c)).map(|triple| EquivalenceWitness {
                triple,
                conjugate: c,
            })
        }),
    };
    debug_assert!(witness.as_ref().map_or(true, |w| verify_witness(a, b, w)));
    EquivalenceVerdict {
        level,
        equivalent: witness.is_some(),
        witness,
        separated_by_fingerprint: false,
    }
}

/// Re-checks a witness independently of how it was found.
pub fn verify_witness(a: &LatinSquare, b: &LatinSquare, w: &EquivalenceWitness) -> bool {
    apply_isotopy(a, &w.triple).is_ok_and(|img| img == conjugate(b, w.conjugate))
}

/// Loop isomorphism with `ε ↦ ε`; both tables must be loops.
pub fn loops_isomorphic(a: &LoopTable, b: &LoopTable) -> Option<Permutation> {
    find_isomorphism(a, b).filter(|p| p.apply(0) == 0)
}
