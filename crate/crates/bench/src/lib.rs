//! Shared fixtures for the criterion benches.

use kplane::graphs::{gen_complete, gen_cycle, gen_gadget_x, LabeledGraph};

/// Graphs of increasing search difficulty, with a short name each.
pub fn fixtures() -> Vec<(&'static str, LabeledGraph)> {
    vec![
        ("c6", gen_cycle(6).expect("valid cycle")),
        ("k5", gen_complete(5)),
        ("k6", gen_complete(6)),
        ("gadget-x", gen_gadget_x()),
    ]
}
