//! Cell-by-cell completion of a partial loop table with constraint propagation.

use super::{FillOrder, Mode};

pub(crate) const EMPTY: u8 = u8::MAX;

/// Which translation quotients are constrained to be regular of order 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pairs {
    /// only `L_y` itself (pairs `(0, y)`)
    WithZero,
    All,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Rules {
    pub rows: Pairs,
    pub cols: Pairs,
    pub coverage: bool,
}

impl Rules {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::VanRees | Mode::VanReesNontrivialNucleus => Rules {
                rows: Pairs::All,
                cols: Pairs::All,
                coverage: true,
            },
            Mode::Exp3RegularTranslations => Rules {
                rows: Pairs::WithZero,
                cols: Pairs::WithZero,
                coverage: false,
            },
            Mode::Vrl123Not4 => Rules {
                rows: Pairs::All,
                cols: Pairs::WithZero,
                coverage: false,
            },
        }
    }

    fn pairs(&self, transposed: bool) -> Pairs {
        if transposed {
            self.cols
        } else {
            self.rows
        }
    }
}

/// Contradiction during propagation.
#[derive(Debug)]
pub(crate) struct Conflict;

type Res = Result<(), Conflict>;

#[derive(Clone)]
pub(crate) struct State {
    pub n: usize,
    pub cells: Vec<u8>,
    cand: Vec<u32>,
    rowpos: Vec<u8>,
    colpos: Vec<u8>,
    pub filled: usize,
}

impl State {
    pub fn new(n: usize) -> Self {
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut cand = vec![full; n * n];
        // x·x is never ε for x ≠ ε in an exponent-3 loop
        for x in 1..n {
            cand[x * n + x] &= !1;
        }
        State {
            n,
            cells: vec![EMPTY; n * n],
            cand,
            rowpos: vec![EMPTY; n * n],
            colpos: vec![EMPTY; n * n],
            filled: 0,
        }
    }

    #[inline]
    pub fn cell(&self, r: usize, c: usize) -> Option<usize> {
        let v = self.cells[r * self.n + c];
        (v != EMPTY).then_some(v as usize)
    }

    #[inline]
    fn get(&self, t: bool, i: usize, j: usize) -> Option<usize> {
        if t {
            self.cell(j, i)
        } else {
            self.cell(i, j)
        }
    }

    /// Where symbol `s` sits in line `i` (row, or column when transposed).
    #[inline]
    fn pos(&self, t: bool, i: usize, s: usize) -> Option<usize> {
        let v = if t {
            self.colpos[i * self.n + s]
        } else {
            self.rowpos[i * self.n + s]
        };
        (v != EMPTY).then_some(v as usize)
    }

    /// `P(z)` for `P = L_x⁻¹L_y` in the chosen orientation.
    #[inline]
    fn next(&self, t: bool, x: usize, y: usize, z: usize) -> Option<usize> {
        self.pos(t, x, self.get(t, y, z)?)
    }

    #[inline]
    fn prev(&self, t: bool, x: usize, y: usize, w: usize) -> Option<usize> {
        self.pos(t, y, self.get(t, x, w)?)
    }

    pub fn is_complete(&self) -> bool {
        self.filled == self.n * self.n
    }

    /// Elements of the pairs `{2k-1, 2k}` that occur in no filled cell off
    /// the border and off their own pair block. Any relabeling that permutes
    /// these pairs fixes the partial table.
    pub fn untouched(&self) -> u32 {
        let n = self.n;
        let pair = |x: usize| (x + 1) / 2;
        let mut touched = 1u32;
        for r in 1..n {
            for c in 1..n {
                let v = self.cells[r * n + c];
                if v == EMPTY || pair(r) == pair(c) {
                    continue;
                }
                touched |= (1 << r) | (1 << c) | (1 << v);
            }
        }
        let mut free = 0u32;
        for k in 0..(n - 1) / 2 {
            let pm = 0b11u32 << (2 * k + 1);
            if touched & pm == 0 {
                free |= pm;
            }
        }
        free
    }

    pub fn candidates(&self, r: usize, c: usize) -> u32 {
        self.cand[r * self.n + c]
    }

    /// Empty cell with fewest candidates; ties go to the first in fill order.
    pub fn choose_cell(&self, order: FillOrder) -> Option<(usize, usize)> {
        let n = self.n;
        let mut best: Option<(u32, usize, usize)> = None;
        for a in 0..n {
            for b in 0..n {
                let (r, c) = match order {
                    FillOrder::RowMajor => (a, b),
                    FillOrder::ColumnMajor => (b, a),
                };
                if self.cells[r * n + c] != EMPTY {
                    continue;
                }
                let k = self.cand[r * n + c].count_ones();
                if best.map_or(true, |(bk, _, _)| k < bk) {
                    best = Some((k, r, c));
                    if k <= 1 {
                        return Some((r, c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }
}

/// Propagation engine for one search tree.
pub(crate) struct Propagator {
    pub rules: Rules,
    queue: Vec<(usize, usize, usize)>,
}

impl Propagator {
    pub fn new(rules: Rules) -> Self {
        Propagator {
            rules,
            queue: Vec::new(),
        }
    }

    /// Sets `(r, c) = s` and propagates to a fixpoint.
    pub fn assign(&mut self, st: &mut State, r: usize, c: usize, s: usize) -> Res {
        self.queue.clear();
        self.queue.push((r, c, s));
        self.run(st)
    }

    pub fn assign_all(&mut self, st: &mut State, cells: &[(usize, usize, usize)]) -> Res {
        self.queue.clear();
        self.queue.extend_from_slice(cells);
        self.run(st)
    }

    fn run(&mut self, st: &mut State) -> Res {
        loop {
            while let Some((r, c, s)) = self.queue.pop() {
                self.place(st, r, c, s)?;
            }
            self.hidden_singles(st)?;
            if self.queue.is_empty() {
                return Ok(());
            }
        }
    }

    fn place(&mut self, st: &mut State, r: usize, c: usize, s: usize) -> Res {
        let n = st.n;
        let idx = r * n + c;
        match st.cell(r, c) {
            Some(v) if v == s => return Ok(()),
            Some(_) => return Err(Conflict),
            None => {}
        }
        if st.cand[idx] & (1 << s) == 0 {
            return Err(Conflict);
        }
        st.cells[idx] = s as u8;
        st.cand[idx] = 1 << s;
        st.rowpos[r * n + s] = c as u8;
        st.colpos[c * n + s] = r as u8;
        st.filled += 1;
        let bit = !(1u32 << s);
        for k in 0..n {
            for j in [r * n + k, k * n + c] {
                if st.cells[j] == EMPTY {
                    st.cand[j] &= bit;
                    match st.cand[j].count_ones() {
                        0 => return Err(Conflict),
                        1 => self
                            .queue
                            .push((j / n, j % n, st.cand[j].trailing_zeros() as usize)),
                        _ => {}
                    }
                }
            }
        }
        // exponent 3: {ε, x, xx} is a subloop
        if r == c && r != 0 {
            if s == 0 {
                return Err(Conflict);
            }
            self.queue.extend([(s, s, r), (r, s, 0), (s, r, 0)]);
        }
        if s == 0 && r != 0 {
            self.queue.push((r, r, c));
        }
        for t in [false, true] {
            let (i, j) = if t { (c, r) } else { (r, c) };
            match self.rules.pairs(t) {
                Pairs::WithZero => {
                    if i != 0 {
                        self.cell_in_y(st, t, 0, i, j, s)?;
                    } else {
                        for y in 1..n {
                            self.cell_in_x(st, t, 0, y, j, s)?;
                        }
                    }
                }
                Pairs::All => {
                    for other in (0..n).filter(|&o| o != i) {
                        self.cell_in_y(st, t, other, i, j, s)?;
                        self.cell_in_x(st, t, i, other, j, s)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, t: bool, i: usize, j: usize, s: usize) {
        self.queue.push(if t { (j, i, s) } else { (i, j, s) });
    }

    /// Line `y` received `s` at position `z`; `P = L_x⁻¹L_y`.
    fn cell_in_y(&mut self, st: &State, t: bool, x: usize, y: usize, z: usize, s: usize) -> Res {
        if let Some(w) = st.pos(t, x, s) {
            return self.edge(st, t, x, y, z, w);
        }
        // z closes the 3-cycle through its two predecessors
        if let Some(w1) = st.prev(t, x, y, z) {
            if let Some(z0) = st.prev(t, x, y, w1) {
                if z0 == z {
                    return Err(Conflict);
                }
                self.push(t, x, z0, s);
            }
        }
        Ok(())
    }

    /// Line `x` received `s` at position `w`; `P = L_x⁻¹L_y`.
    fn cell_in_x(&mut self, st: &State, t: bool, x: usize, y: usize, w: usize, s: usize) -> Res {
        if let Some(z) = st.pos(t, y, s) {
            return self.edge(st, t, x, y, z, w);
        }
        if let Some(w1) = st.next(t, x, y, w) {
            if let Some(v) = st.next(t, x, y, w1) {
                if v == w {
                    return Err(Conflict);
                }
                self.push(t, y, v, s);
            }
        }
        Ok(())
    }

    /// New arrow `P(z) = w`, i.e. `y·z = x·w`.
    fn edge(&mut self, st: &State, t: bool, x: usize, y: usize, z: usize, w: usize) -> Res {
        if let Some(v) = st.next(t, x, y, w) {
            if v == z {
                return Err(Conflict);
            }
            // P(v) = z
            self.equate(st, t, (y, v), (x, z))?;
        }
        if let Some(u) = st.prev(t, x, y, z) {
            if u == w {
                return Err(Conflict);
            }
            // P(w) = u
            self.equate(st, t, (y, w), (x, u))?;
        }
        Ok(())
    }

    fn equate(&mut self, st: &State, t: bool, a: (usize, usize), b: (usize, usize)) -> Res {
        match (st.get(t, a.0, a.1), st.get(t, b.0, b.1)) {
            (Some(p), Some(q)) => {
                if p != q {
                    return Err(Conflict);
                }
            }
            (Some(p), None) => self.push(t, b.0, b.1, p),
            (None, Some(q)) => self.push(t, a.0, a.1, q),
            (None, None) => {}
        }
        Ok(())
    }

    fn hidden_singles(&mut self, st: &State) -> Res {
        let n = st.n;
        for line in 0..n {
            for t in [false, true] {
                let mut seen = 0u32;
                let mut twice = 0u32;
                let mut placed = 0u32;
                for k in 0..n {
                    let idx = if t { k * n + line } else { line * n + k };
                    let m = st.cand[idx];
                    if st.cells[idx] != EMPTY {
                        placed |= m;
                    }
                    twice |= seen & m;
                    seen |= m;
                }
                let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
                if seen != full {
                    return Err(Conflict);
                }
                let mut once = seen & !twice & !placed;
                while once != 0 {
                    let s = once.trailing_zeros() as usize;
                    once &= once - 1;
                    let k = (0..n)
                        .find(|&k| {
                            let idx = if t { k * n + line } else { line * n + k };
                            st.cand[idx] & (1 << s) != 0
                        })
                        .expect("seen once");
                    let (r, c) = if t { (k, line) } else { (line, k) };
                    self.queue.push((r, c, s));
                }
            }
        }
        Ok(())
    }

    /// Forces the order-3 subsquare through every pair of equal known symbols,
    /// and rejects intercalates.
    pub fn coverage_sweep(&mut self, st: &mut State) -> Res {
        let n = st.n;
        self.queue.clear();
        for s in 0..n {
            for r1 in 0..n {
                let Some(c1) = st.pos(false, r1, s) else { continue };
                for r2 in r1 + 1..n {
                    let Some(c2) = st.pos(false, r2, s) else { continue };
                    let (Some(tt), Some(u)) = (st.cell(r1, c2), st.cell(r2, c1)) else {
                        continue;
                    };
                    if tt == u {
                        return Err(Conflict);
                    }
                    // rows r1, r2, r3 over columns c1, c2, c3 with symbols s, t, u
                    let r3 = st.pos(true, c1, tt);
                    let c3 = st.pos(false, r1, u);
                    if let Some(r3) = r3 {
                        self.queue.push((r3, c2, u));
                        if let Some(c3) = c3 {
                            self.queue.push((r3, c3, s));
                        }
                    }
                    if let Some(c3) = c3 {
                        self.queue.push((r2, c3, tt));
                    }
                    if let Some(c3) = st.pos(false, r2, tt) {
                        self.queue.push((r1, c3, u));
                    }
                    if let Some(r3) = st.pos(true, c2, u) {
                        self.queue.push((r3, c1, tt));
                    }
                }
            }
        }
        if self.queue.is_empty() {
            return Ok(());
        }
        self.run(st)
    }
}
