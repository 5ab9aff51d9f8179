//! Criterion benchmarks for `toric-ihc-core`; see `benches/`.
