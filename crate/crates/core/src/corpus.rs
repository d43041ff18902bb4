//! The nine benchmark programs, embedded at build time.

use crate::program::{parse_program, Program};

/// `(name, source, expected fixpoint index)` in table order.
pub const CORPUS: [(&str, &str, u64); 9] = [
    ("running", include_str!("../corpus/running.mpp"), 1),
    ("liu1", include_str!("../corpus/liu1.mpp"), 0),
    ("liu2", include_str!("../corpus/liu2.mpp"), 0),
    ("loop", include_str!("../corpus/loop.mpp"), 2),
    ("liu3", include_str!("../corpus/liu3.mpp"), 2),
    ("ineq", include_str!("../corpus/ineq.mpp"), 2),
    ("prod", include_str!("../corpus/prod.mpp"), 4),
    ("liu4", include_str!("../corpus/liu4.mpp"), 4),
    ("var4", include_str!("../corpus/var4.mpp"), 5),
];

/// Parses a corpus program by name.
pub fn corpus_program(name: &str) -> Option<Program> {
    CORPUS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, src, _)| parse_program(src).expect("corpus programs parse"))
}
