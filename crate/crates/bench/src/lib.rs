//! Criterion benchmarks for curvelab; see `benches/`.
