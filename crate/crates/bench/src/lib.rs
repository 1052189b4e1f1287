//! Benchmark-only crate; the measurements live in `benches/core_paths.rs`.
