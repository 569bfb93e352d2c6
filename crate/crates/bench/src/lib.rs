//! Benchmarks for the scattering crate live in `benches/`.
