//! Benchmarks for `qpg-core` live in `benches/`; run them with `cargo bench -p qpg-bench`.
