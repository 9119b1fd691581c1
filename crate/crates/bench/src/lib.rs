//! Criterion benchmarks for polysmith; see `benches/`.
