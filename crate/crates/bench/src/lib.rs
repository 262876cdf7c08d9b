//! Benchmarks for `modhyp` live in `benches/`; run them with
//! `cargo bench -p modhyp-bench`.
