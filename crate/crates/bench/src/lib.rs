//! Criterion benchmarks for `symcut-core`; see `benches/`.
