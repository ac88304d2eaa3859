//! Criterion benchmarks for rforge; see `benches/`.
