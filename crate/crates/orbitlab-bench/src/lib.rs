//! Benchmark-only crate; see `benches/core.rs` for the criterion targets.
