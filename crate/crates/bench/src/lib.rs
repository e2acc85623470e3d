//! Criterion benchmarks for `superlie`; see `benches/algebra.rs`.
