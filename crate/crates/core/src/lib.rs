//! Latin squares, quasigroups and loops whose order-3 subsquare count meets
//! the bound `n²(n−1)/18`, with the tools to recognise, transform, compare
//! and search for them.

pub mod corpus;
pub mod derived;
pub mod equivalence;
pub mod identities;
pub mod perm;
pub mod search;
pub mod set;
pub mod square;
pub mod structure;
pub mod subsquares;
pub mod transforms;

pub use identities::{check_identity, evaluate_conditions, verify_theorem1, ConditionReport, NamedProperty};
pub use perm::Permutation;
pub use square::{parse_table, validate_latin, LatinSquare, LoopTable, Operation, Side};
pub use subsquares::{check_conditions_123, enumerate_subsquares, van_rees_bound, Subsquare};
pub use transforms::{apply_isotopy, conjugate, loop_isotope, normalize_loop, ConjugateName, IsotopyTriple};
