//! Named tables: the printed examples plus small generated groups and loops.

pub mod random;

use serde::Serialize;
use thiserror::Error;

use crate::identities::NamedProperty;
use crate::square::{parse_table, LatinSquare, LoopTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus entry '{0}'")]
    UnknownName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    PaperTable,
    Generator,
}

/// Declared facts about an entry. Tests recompute every one of them.
#[derive(Debug, Clone, Serialize)]
pub struct Expectations {
    pub van_rees: bool,
    pub count3: usize,
    /// properties declared to hold (`true`) or fail (`false`)
    pub properties: Vec<(NamedProperty, bool)>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub source: Source,
    pub description: &'static str,
    pub table: LoopTable,
    pub expected: Expectations,
}

pub const NAMES: [&str; 11] = [
    "table1",
    "table2",
    "table3",
    "table4",
    "table5",
    "table6",
    "ccloop9_3",
    "z3",
    "z3sq",
    "z3cube",
    "heisenberg27",
];

/// Raw file text for the printed tables.
pub fn table_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "table1" => include_str!("data/table1.txt"),
        "table2" => include_str!("data/table2.txt"),
        "table3" => include_str!("data/table3.txt"),
        "table4" => include_str!("data/table4.txt"),
        "table5" => include_str!("data/table5.txt"),
        "table6" => include_str!("data/table6.txt"),
        _ => return None,
    })
}

/// Direct product of `k` copies of Z₃; index `Σ dᵢ 3ⁱ` with digit-wise addition.
pub fn elementary_abelian3(k: u32) -> LoopTable {
    let n = 3usize.pow(k);
    let sq = LatinSquare::from_fn(n, |x, y| {
        let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
        for _ in 0..k {
            out += ((x % 3 + y % 3) % 3) * place;
            x /= 3;
            y /= 3;
            place *= 3;
        }
        out
    });
    LoopTable::new(sq).expect("zero is neutral")
}

/// Upper unitriangular 3×3 matrices over GF(3); `(a,b,c)` has index `9a + 3b + c`.
pub fn heisenberg27() -> LoopTable {
    let sq = LatinSquare::from_fn(27, |x, y| {
        let (a, b, c) = (x / 9, x / 3 % 3, x % 3);
        let (a2, b2, c2) = (y / 9, y / 3 % 3, y % 3);
        9 * ((a + a2) % 3) + 3 * ((b + b2) % 3) + (c + c2 + a * b2) % 3
    });
    LoopTable::new(sq).expect("zero is neutral")
}

/// `(x,a)(y,b) = (x+y, a+b+x²y)` on Z₃×Z₃; `(x,a)` has index `3x + a`.
pub fn ccloop9_3() -> LoopTable {
    let sq = LatinSquare::from_fn(9, |u, v| {
        let (x, a) = (u / 3, u % 3);
        let (y, b) = (v / 3, v % 3);
        3 * ((x + y) % 3) + (a + b + x * x * y) % 3
    });
    LoopTable::new(sq).expect("zero is neutral")
}

fn printed_table(name: &str) -> LoopTable {
    let sq = parse_table(table_text(name).expect("known table")).expect("embedded table parses");
    LoopTable::new(sq).expect("embedded tables list the neutral element first")
}

pub fn get_named(name: &str) -> Result<CorpusEntry, CorpusError> {
    use NamedProperty::*;
    let (source, description, table, van_rees, count3, properties): (_, _, _, _, _, Vec<_>) =
        match name {
            "table1" => (
                Source::PaperTable,
                "order-7 loop of exponent 3 that is not van Rees",
                printed_table(name),
                false,
                7,
                vec![(Exponent3, true)],
            ),
            "table2" => (
                Source::PaperTable,
                "order-9 loop with all translations regular of order 3, not van Rees",
                printed_table(name),
                false,
                12,
                vec![(Exponent3, true)],
            ),
            "table3" => (
                Source::PaperTable,
                "order-15 loop of exponent 3 with regular translations, not van Rees",
                printed_table(name),
                false,
                24,
                vec![(Exponent3, true)],
            ),
            "table4" => (
                Source::PaperTable,
                "order-27 van Rees loop, left inverse property, universal left conjugacy closed",
                printed_table(name),
                true,
                1053,
                vec![
                    (LeftInverse, true),
                    (UniversalLeftConjugacyClosed, true),
                    (Associative, false),
                ],
            ),
            "table5" => (
                Source::PaperTable,
                "order-27 commutative van Rees loop with the weak inverse property",
                printed_table(name),
                true,
                1053,
                vec![(Commutative, true), (WeakInverse, true), (Associative, false)],
            ),
            "table6" => (
                Source::PaperTable,
                "order-27 van Rees loop, weak inverse property, each L_x^-1 R_x an automorphism",
                printed_table(name),
                true,
                1053,
                vec![(WeakInverse, true), (LrAutomorphism, true), (Associative, false)],
            ),
            "ccloop9_3" => (
                Source::Generator,
                "order-9 conjugacy closed loop (x,a)(y,b) = (x+y, a+b+x^2 y)",
                ccloop9_3(),
                false,
                9,
                vec![(PowerAssocSpot, false)],
            ),
            "z3" => (
                Source::Generator,
                "cyclic group of order 3",
                elementary_abelian3(1),
                true,
                1,
                vec![(Associative, true), (Commutative, true)],
            ),
            "z3sq" => (
                Source::Generator,
                "elementary abelian group of order 9",
                elementary_abelian3(2),
                true,
                36,
                vec![(Associative, true), (Commutative, true)],
            ),
            "z3cube" => (
                Source::Generator,
                "elementary abelian group of order 27",
                elementary_abelian3(3),
                true,
                1053,
                vec![(Associative, true), (Commutative, true)],
            ),
            "heisenberg27" => (
                Source::Generator,
                "nonabelian group of order 27 and exponent 3",
                heisenberg27(),
                true,
                1053,
                vec![(Associative, true), (Commutative, false), (Exponent3, true)],
            ),
            _ => return Err(CorpusError::UnknownName(name.to_string())),
        };
    let name = NAMES.iter().copied().find(|&n| n == name).expect("listed");
    Ok(CorpusEntry {
        name,
        source,
        description,
        table,
        expected: Expectations {
            van_rees,
            count3,
            properties,
        },
    })
}

/// Every entry, in listing order.
pub fn all() -> Vec<CorpusEntry> {
    NAMES.iter().map(|n| get_named(n).expect("listed")).collect()
}

/// Entries whose declared verdict is van Rees.
pub fn van_rees_entries() -> Vec<CorpusEntry> {
    all().into_iter().filter(|e| e.expected.van_rees).collect()
}
