//! Exhaustive generation of loops with prescribed properties.
//!
//! A partial loop table (row 0 and column 0 fixed) is completed one cell at a
//! time, always branching on the empty cell with fewest candidates. Besides
//! the latin constraints, every mode uses the exponent-3 pairing `x ↔ xx`
//! and requires the relevant translation quotients `L_x⁻¹L_y` (and their
//! column analogues) to be regular of order 3: a 2-cycle is rejected as soon
//! as it appears and a 3-cycle is closed as soon as two of its arrows are
//! known. The van Rees modes additionally run a sweep that forces the order-3
//! subsquare through every pair of equal symbols whose neighbours are known.
//!
//! Every complete table is re-checked from scratch before it is counted.
//!
//! With isomorphism reduction the squaring pairs are fixed to
//! `(1,2), (3,4), …` and, from order 7 on, `1·3 = 5`; completed tables are
//! then reduced to one per isomorphism class.

mod checkpoint;
mod engine;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::equivalence::find_isomorphism;
use crate::identities::{check_identity, has_exponent3, is_regular_order3, verify_theorem1, NamedProperty};
use crate::square::{LatinSquare, LoopTable, Side};
use crate::structure::nuclei_and_center;

pub use checkpoint::{CheckpointError, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
use engine::{Propagator, Rules, State, EMPTY};

/// Largest order the search accepts.
pub const MAX_SEARCH_ORDER: usize = 27;
/// Orders above this need `long_run` in the van Rees modes.
pub const LONG_RUN_THRESHOLD: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    #[serde(rename = "vanRees")]
    VanRees,
    #[serde(rename = "exp3RegularTranslations")]
    Exp3RegularTranslations,
    #[serde(rename = "vRL123-not-4")]
    Vrl123Not4,
    #[serde(rename = "vanReesNontrivialNucleus")]
    VanReesNontrivialNucleus,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::VanRees,
        Mode::Exp3RegularTranslations,
        Mode::Vrl123Not4,
        Mode::VanReesNontrivialNucleus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::VanRees => "vanRees",
            Mode::Exp3RegularTranslations => "exp3RegularTranslations",
            Mode::Vrl123Not4 => "vRL123-not-4",
            Mode::VanReesNontrivialNucleus => "vanReesNontrivialNucleus",
        }
    }

    fn code(self) -> u8 {
        match self {
            Mode::VanRees => 0,
            Mode::Exp3RegularTranslations => 1,
            Mode::Vrl123Not4 => 2,
            Mode::VanReesNontrivialNucleus => 3,
        }
    }

    fn is_van_rees(self) -> bool {
        matches!(self, Mode::VanRees | Mode::VanReesNontrivialNucleus)
    }

    /// Default order cap for [`classify_order`].
    pub fn classify_cap(self) -> usize {
        match self {
            Mode::VanRees | Mode::VanReesNontrivialNucleus => 15,
            Mode::Exp3RegularTranslations | Mode::Vrl123Not4 => 9,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Mode::ALL
            .iter()
            .copied()
            .find(|m| {
                let name: String = m
                    .as_str()
                    .chars()
                    .filter(|c| c.is_ascii_alphanumeric())
                    .map(|c| c.to_ascii_lowercase())
                    .collect();
                name == key
            })
            .ok_or_else(|| SearchError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsoReduction {
    None,
    Isomorphism,
}

/// Tie-break among cells with equally few candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FillOrder {
    RowMajor,
    ColumnMajor,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub order: usize,
    pub mode: Mode,
    pub iso_reduction: IsoReduction,
    pub limits: Limits,
    pub fill_order: FillOrder,
    /// branching levels expanded before subtrees are handed to workers
    pub split_depth: usize,
    /// run the coverage sweep every this many nodes (van Rees modes)
    pub coverage_interval: u64,
    /// cells fixed in advance, `(row, col, symbol)`
    pub seed: Vec<(usize, usize, usize)>,
    /// completed tables kept in a raw search (the count is always exact)
    pub max_witnesses: usize,
    pub checkpoint: Option<PathBuf>,
    pub long_run: bool,
}

impl SearchSpec {
    pub fn new(order: usize, mode: Mode) -> Self {
        SearchSpec {
            order,
            mode,
            iso_reduction: IsoReduction::Isomorphism,
            limits: Limits::default(),
            fill_order: FillOrder::RowMajor,
            split_depth: 3,
            coverage_interval: 1,
            seed: Vec::new(),
            max_witnesses: 10_000,
            checkpoint: None,
            long_run: false,
        }
    }

    pub fn raw(mut self) -> Self {
        self.iso_reduction = IsoReduction::None;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_fill_order(mut self, order: FillOrder) -> Self {
        self.fill_order = order;
        self
    }

    pub fn with_seed(mut self, seed: Vec<(usize, usize, usize)>) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// the whole tree was explored
    Exhausted,
    /// a node or time limit stopped the search early
    BudgetExceeded,
    /// no tree was needed (the order rules out any solution)
    Immediate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    /// complete tables that failed the independent re-check
    pub rejected_leaves: u64,
    pub subtrees: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub order: usize,
    pub mode: Mode,
    pub iso_reduction: IsoReduction,
    pub completed: bool,
    /// isomorphism classes when reducing, otherwise tables
    pub count: u64,
    pub witnesses: Vec<LoopTable>,
    pub stats: SearchStats,
    pub certificate: Certificate,
    pub reason: Option<String>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("order {0} is below the minimum 3")]
    OrderTooSmall(usize),
    #[error("order {0} exceeds the supported maximum {MAX_SEARCH_ORDER}")]
    OrderTooLarge(usize),
    #[error("order {order} in mode {mode} needs the long-run flag")]
    NeedsLongRun { order: usize, mode: Mode },
    #[error("order {order} exceeds the classification cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("the order must be odd, got {0}")]
    EvenOrder(usize),
    #[error("seed cell ({0}, {1}) = {2} is out of range or contradicts the fixed cells")]
    SeedConflict(usize, usize, usize),
    #[error("unknown search mode '{0}'")]
    UnknownMode(String),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
}

/// Independent check of a completed table against the mode.
pub fn satisfies_mode(q: &LoopTable, mode: Mode) -> bool {
    let holds = |p| check_identity(q, p).map(|v| v.holds).unwrap_or(false);
    match mode {
        Mode::VanRees => verify_theorem1(q).is_ok_and(|r| r.van_rees),
        Mode::VanReesNontrivialNucleus => {
            verify_theorem1(q).is_ok_and(|r| r.van_rees)
                && nuclei_and_center(q).sizes().iter().any(|&s| s > 1)
        }
        Mode::Exp3RegularTranslations => {
            has_exponent3(q).holds
                && (1..q.order()).all(|x| {
                    is_regular_order3(&q.translation(Side::Left, x))
                        && is_regular_order3(&q.translation(Side::Right, x))
                })
        }
        Mode::Vrl123Not4 => {
            holds(NamedProperty::VRL1)
                && holds(NamedProperty::VRL2)
                && holds(NamedProperty::VRL3)
                && !holds(NamedProperty::VRL4)
        }
    }
}

/// Cells fixed by the isomorphism reduction.
fn reduction_cells(n: usize) -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for k in 0..(n - 1) / 2 {
        let (a, b) = (2 * k + 1, 2 * k + 2);
        cells.extend([(a, a, b), (b, b, a), (a, b, 0), (b, a, 0)]);
    }
    if n >= 7 {
        cells.push((1, 3, 5));
    }
    cells
}

fn identity_border(n: usize) -> Vec<(usize, usize, usize)> {
    (0..n).flat_map(|i| [(0, i, i), (i, 0, i)]).collect()
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    start: Instant,
    limits: Limits,
}

impl Shared {
    /// Counts one node; false once a limit is hit.
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limits.max_nodes.is_some_and(|m| k > m);
        let over_time = k % 1024 == 0
            && self
                .limits
                .max_time
                .is_some_and(|t| self.start.elapsed() > t);
        if over_nodes || over_time {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Results of one subtree.
#[derive(Debug, Clone, Default)]
pub(crate) struct SubtreeOutcome {
    pub nodes: u64,
    pub count: u64,
    pub leaves: u64,
    pub rejected: u64,
    pub witnesses: Vec<Vec<u8>>,
}

struct Worker<'a> {
    spec: &'a SearchSpec,
    shared: &'a Shared,
    prop: Propagator,
    out: SubtreeOutcome,
}

impl<'a> Worker<'a> {
    fn new(spec: &'a SearchSpec, shared: &'a Shared) -> Self {
        Worker {
            spec,
            shared,
            prop: Propagator::new(Rules::for_mode(spec.mode)),
            out: SubtreeOutcome::default(),
        }
    }

    /// Explores below `st`; false when the search was stopped.
    fn dfs(&mut self, mut st: State) -> bool {
        if !self.shared.tick() {
            return false;
        }
        self.out.nodes += 1;
        if self.prop.rules.coverage
            && self.out.nodes % self.spec.coverage_interval.max(1) == 0
            && self.prop.coverage_sweep(&mut st).is_err()
        {
            return true;
        }
        if st.is_complete() {
            self.leaf(&st);
            return true;
        }
        let (r, c) = st.choose_cell(self.spec.fill_order).expect("incomplete");
        let mut mask = branch_values(self.spec, &st, r, c);
        while mask != 0 {
            let s = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            let mut child = st.clone();
            if self.prop.assign(&mut child, r, c, s).is_ok() && !self.dfs(child) {
                return false;
            }
        }
        true
    }

    fn leaf(&mut self, st: &State) {
        self.out.leaves += 1;
        let q = to_loop(st);
        if !satisfies_mode(&q, self.spec.mode) {
            self.out.rejected += 1;
            return;
        }
        match self.spec.iso_reduction {
            IsoReduction::None => {
                self.out.count += 1;
                if self.out.witnesses.len() < self.spec.max_witnesses {
                    self.out.witnesses.push(st.cells.clone());
                }
            }
            IsoReduction::Isomorphism => {
                if insert_class(&mut self.out.witnesses, &st.cells, st.n) {
                    self.out.count += 1;
                }
            }
        }
    }
}

/// Candidates at `(r, c)`. Under isomorphism reduction, symbols from pairs
/// that the partial table has not touched are interchangeable as long as
/// neither `r` nor `c` is one of them, so only the smallest is tried.
fn branch_values(spec: &SearchSpec, st: &State, r: usize, c: usize) -> u32 {
    let mask = st.candidates(r, c);
    if spec.iso_reduction != IsoReduction::Isomorphism {
        return mask;
    }
    let free = st.untouched();
    if free & ((1 << r) | (1 << c)) != 0 || mask & free == 0 {
        return mask;
    }
    let spare = mask & free;
    (mask & !free) | (spare & spare.wrapping_neg())
}

fn to_loop(st: &State) -> LoopTable {
    let cells: Vec<usize> = st.cells.iter().map(|&v| v as usize).collect();
    LoopTable::new(LatinSquare::new(st.n, &cells).expect("complete state is latin")).expect("border is fixed")
}

fn cells_to_loop(n: usize, cells: &[u8]) -> LoopTable {
    let cells: Vec<usize> = cells.iter().map(|&v| v as usize).collect();
    LoopTable::new(LatinSquare::new(n, &cells).expect("stored tables are latin")).expect("border is fixed")
}

/// Adds `cells` unless a stored table is isomorphic to it.
fn insert_class(classes: &mut Vec<Vec<u8>>, cells: &[u8], n: usize) -> bool {
    let q = cells_to_loop(n, cells);
    if classes
        .iter()
        .any(|c| find_isomorphism(&cells_to_loop(n, c), &q).is_some())
    {
        return false;
    }
    classes.push(cells.to_vec());
    true
}

/// Expands the first `depth` branching levels, returning the subtree roots in
/// tree order. Leaves met on the way are recorded in `early`.
fn frontier(spec: &SearchSpec, shared: &Shared, root: State, depth: usize, early: &mut Worker<'_>) -> Vec<State> {
    let mut level = vec![root];
    for _ in 0..depth {
        let mut next = Vec::new();
        for st in level {
            if !shared.tick() {
                return Vec::new();
            }
            early.out.nodes += 1;
            if st.is_complete() {
                early.leaf(&st);
                continue;
            }
            let (r, c) = st.choose_cell(spec.fill_order).expect("incomplete");
            let mut mask = branch_values(spec, &st, r, c);
            while mask != 0 {
                let s = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                let mut child = st.clone();
                if early.prop.assign(&mut child, r, c, s).is_ok() {
                    next.push(child);
                }
            }
        }
        level = next;
    }
    level
}

fn immediate(spec: &SearchSpec, reason: &str, start: Instant) -> SearchResult {
    SearchResult {
        order: spec.order,
        mode: spec.mode,
        iso_reduction: spec.iso_reduction,
        completed: true,
        count: 0,
        witnesses: Vec::new(),
        stats: SearchStats::default(),
        certificate: Certificate::Immediate,
        reason: Some(reason.to_string()),
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn root_state(spec: &SearchSpec) -> Result<Option<State>, SearchError> {
    let n = spec.order;
    let mut st = State::new(n);
    let mut prop = Propagator::new(Rules::for_mode(spec.mode));
    if prop.assign_all(&mut st, &identity_border(n)).is_err() {
        return Ok(None);
    }
    if spec.iso_reduction == IsoReduction::Isomorphism
        && prop.assign_all(&mut st, &reduction_cells(n)).is_err()
    {
        return Ok(None);
    }
    for &(r, c, s) in &spec.seed {
        if r >= n || c >= n || s >= n {
            return Err(SearchError::SeedConflict(r, c, s));
        }
        if prop.assign(&mut st, r, c, s).is_err() {
            return Err(SearchError::SeedConflict(r, c, s));
        }
    }
    Ok(Some(st))
}

/// Runs the search described by `spec`.
pub fn search_loops(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let start = Instant::now();
    let n = spec.order;
    if n < 3 {
        return Err(SearchError::OrderTooSmall(n));
    }
    if n > MAX_SEARCH_ORDER {
        return Err(SearchError::OrderTooLarge(n));
    }
    if spec.mode.is_van_rees() {
        if n % 6 != 3 {
            return Ok(immediate(spec, "3mod6", start));
        }
        if n > LONG_RUN_THRESHOLD && !spec.long_run {
            return Err(SearchError::NeedsLongRun { order: n, mode: spec.mode });
        }
    } else if n % 2 == 0 {
        return Ok(immediate(spec, "even-order", start));
    }

    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        start,
        limits: spec.limits,
    };
    let Some(root) = root_state(spec)? else {
        return Ok(finish(spec, &shared, vec![SubtreeOutcome::default()], 0, start));
    };

    let mut head = Worker::new(spec, &shared);
    // the frontier is deterministic, so a resumed run rebuilds it to recover
    // the leaves met on the way and to check the saved records
    let roots: Vec<checkpoint::Record> = frontier(spec, &shared, root, spec.split_depth, &mut head)
        .into_iter()
        .map(|st| checkpoint::Record::pending(st.cells))
        .collect();
    let mut records = match &spec.checkpoint {
        _ if shared.stop.load(Ordering::Relaxed) => Vec::new(),
        Some(path) => match checkpoint::load(path, spec)? {
            Some(saved) => {
                if saved.len() != roots.len() || saved.iter().zip(&roots).any(|(a, b)| a.cells != b.cells) {
                    return Err(CheckpointError::Mismatch.into());
                }
                saved
            }
            None => {
                checkpoint::save(path, spec, &roots)?;
                roots
            }
        },
        None => roots,
    };
    let restored: u64 = records.iter().filter_map(|r| r.done.as_ref()).map(|d| d.nodes).sum();
    let subtrees = records.len() as u64;

    let saver = Mutex::new(());
    let snapshot = Mutex::new(records.clone());
    let outcomes: Vec<Option<SubtreeOutcome>> = records
        .par_iter()
        .enumerate()
        .map(|(i, rec)| {
            if let Some(done) = &rec.done {
                return Some(done.clone());
            }
            let mut st = State::new(n);
            let mut w = Worker::new(spec, &shared);
            let given: Vec<(usize, usize, usize)> = rec
                .cells
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != EMPTY)
                .map(|(k, &v)| (k / n, k % n, v as usize))
                .collect();
            let finished = match w.prop.assign_all(&mut st, &given) {
                Ok(()) => w.dfs(st),
                Err(_) => true,
            };
            if !finished {
                return None;
            }
            if let Some(path) = &spec.checkpoint {
                let _guard = saver.lock().expect("checkpoint lock");
                let mut snap = snapshot.lock().expect("snapshot lock");
                snap[i].done = Some(w.out.clone());
                // a failed write only loses resumability, never results
                let _ = checkpoint::save(path, spec, &snap);
            }
            Some(w.out)
        })
        .collect();

    let stopped = outcomes.iter().any(|o| o.is_none());
    for (rec, out) in records.iter_mut().zip(&outcomes) {
        if rec.done.is_none() {
            rec.done = out.clone();
        }
    }
    let mut all = vec![head.out];
    all.extend(outcomes.into_iter().flatten());
    let mut result = finish(spec, &shared, all, subtrees, start);
    result.stats.nodes += restored;
    if stopped || shared.stop.load(Ordering::Relaxed) {
        result.completed = false;
        result.certificate = Certificate::BudgetExceeded;
    }
    Ok(result)
}

fn finish(spec: &SearchSpec, shared: &Shared, parts: Vec<SubtreeOutcome>, subtrees: u64, start: Instant) -> SearchResult {
    let n = spec.order;
    let mut stats = SearchStats {
        nodes: shared.nodes.load(Ordering::Relaxed),
        subtrees,
        ..SearchStats::default()
    };
    let mut count = 0;
    let mut kept: Vec<Vec<u8>> = Vec::new();
    for p in parts {
        stats.leaves += p.leaves;
        stats.rejected_leaves += p.rejected;
        match spec.iso_reduction {
            IsoReduction::None => {
                count += p.count;
                for w in p.witnesses {
                    if kept.len() < spec.max_witnesses {
                        kept.push(w);
                    }
                }
            }
            IsoReduction::Isomorphism => {
                for w in p.witnesses {
                    if insert_class(&mut kept, &w, n) {
                        count += 1;
                    }
                }
            }
        }
    }
    let stopped = shared.stop.load(Ordering::Relaxed);
    SearchResult {
        order: n,
        mode: spec.mode,
        iso_reduction: spec.iso_reduction,
        completed: !stopped,
        count,
        witnesses: kept.iter().map(|c| cells_to_loop(n, c)).collect(),
        stats,
        certificate: if stopped {
            Certificate::BudgetExceeded
        } else {
            Certificate::Exhausted
        },
        reason: None,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// One loop from each isomorphism class with the property, at the default cap.
pub fn classify_order(n: usize, mode: Mode) -> Result<Vec<LoopTable>, SearchError> {
    classify_order_with_cap(n, mode, mode.classify_cap())
}

pub fn classify_order_with_cap(n: usize, mode: Mode, cap: usize) -> Result<Vec<LoopTable>, SearchError> {
    if n > cap {
        return Err(SearchError::CapExceeded { order: n, cap });
    }
    let result = search_loops(&SearchSpec::new(n, mode))?;
    debug_assert!(result.completed);
    Ok(result.witnesses)
}

/// Looks for a loop satisfying vRL1–vRL3 but not vRL4.
pub fn probe_problem1(n: usize, limits: Limits) -> Result<SearchResult, SearchError> {
    if n % 2 == 0 {
        return Err(SearchError::EvenOrder(n));
    }
    search_loops(&SearchSpec::new(n, Mode::Vrl123Not4).with_limits(limits))
}

/// Relabels an exponent-3 loop so its squaring pairs are `(1,2), (3,4), …`
/// and, from order 7 on, `1·3 = 5`: the cells fixed by the isomorphism
/// reduction. Returns `None` if the loop does not have exponent 3.
pub fn reduction_form(q: &LoopTable) -> Option<LoopTable> {
    let n = q.order();
    if !has_exponent3(q).holds || n % 2 == 0 {
        return None;
    }
    let mut image = vec![usize::MAX; n];
    image[0] = 0;
    let mut next = 1;
    let place = |x: usize, image: &mut Vec<usize>, next: &mut usize| {
        image[x] = *next;
        image[q.product(x, x)] = *next + 1;
        *next += 2;
    };
    if n >= 7 {
        // 1 := some x, 3 := some y outside {ε, x, xx}, then x·y lands on 5
        let x = 1;
        let y = (1..n).find(|&y| y != x && y != q.product(x, x)).expect("n ≥ 7");
        place(x, &mut image, &mut next);
        place(y, &mut image, &mut next);
        place(q.product(x, y), &mut image, &mut next);
    }
    for x in 1..n {
        if image[x] == usize::MAX {
            place(x, &mut image, &mut next);
        }
    }
    let p = crate::perm::Permutation::new(image).ok()?;
    let relabeled = crate::transforms::apply_isotopy(q, &crate::transforms::IsotopyTriple::isomorphism(p)).ok()?;
    LoopTable::new(relabeled.without_labels()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_has_one_van_rees_loop() {
        let r = search_loops(&SearchSpec::new(3, Mode::VanRees)).unwrap();
        assert!(r.completed);
        assert_eq!(r.count, 1);
        assert_eq!(r.witnesses[0].get(1, 1), 2);
    }

    #[test]
    fn orders_outside_three_mod_six_expand_nothing() {
        for n in [4, 5, 7, 11, 13] {
            let r = search_loops(&SearchSpec::new(n, Mode::VanRees)).unwrap();
            assert_eq!(r.count, 0);
            assert_eq!(r.stats.nodes, 0);
            assert_eq!(r.reason.as_deref(), Some("3mod6"));
        }
    }

    #[test]
    fn mode_names_parse() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert_eq!("vrl123not4".parse::<Mode>().unwrap(), Mode::Vrl123Not4);
    }

    #[test]
    fn long_orders_need_the_flag() {
        assert!(matches!(
            search_loops(&SearchSpec::new(21, Mode::VanRees)),
            Err(SearchError::NeedsLongRun { .. })
        ));
    }
}
