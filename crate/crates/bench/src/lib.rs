//! Fixtures shared by the benchmarks in `benches/`.

use knotform_core::{eval, parse, SeifertMatrix};

/// Expressions of increasing matrix size.
pub const EXPRESSIONS: [&str; 4] = ["torus(2,13)", "cable(2,13,torus(2,3))", "torus(7,8)", "LM"];

pub fn matrix(text: &str) -> SeifertMatrix {
    eval(&parse(text).expect("fixture parses")).expect("fixture evaluates")
}
