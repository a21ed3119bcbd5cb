//! Criterion benchmarks for nccalc live in `benches/`.
