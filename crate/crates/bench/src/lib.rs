//! Benchmarks for the check, decomposition and so(4,1) pipelines; see `benches/`.
