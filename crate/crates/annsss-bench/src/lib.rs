//! Benchmark fixtures.

use annsss::{parse_braid, BraidWord};

/// Braids of increasing size used across the benches.
pub const WORDS: &[&str] = &["n=2; 1 1 1", "n=3; 1 -2 1 -2", "n=3; 1 2 1 2 1 2", "n=4; 1 2 3 -1 2 -3"];

pub fn words() -> Vec<(String, BraidWord)> {
    WORDS.iter().map(|w| (w.to_string(), parse_braid(w).expect("fixture parses"))).collect()
}
