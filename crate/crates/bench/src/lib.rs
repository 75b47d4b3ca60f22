//! Criterion benchmarks for the special-function and secrecy evaluators; see `benches/`.
