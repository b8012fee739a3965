//! Benchmarks for the catamp pipeline live in `benches/`.
