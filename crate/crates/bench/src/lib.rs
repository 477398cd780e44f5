//! Benchmark-only crate; see `benches/steering.rs`.
