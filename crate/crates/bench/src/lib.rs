//! Criterion benchmarks for `roundlab-core`; see `benches/`.
