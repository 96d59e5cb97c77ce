//! Benchmarks only; see `benches/pipelines.rs`.
