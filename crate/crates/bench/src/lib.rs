//! Benchmark-only crate; see `benches/ratchet.rs`.
