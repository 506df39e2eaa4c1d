//! Criterion benchmarks for hh3-core; see `benches/`.
