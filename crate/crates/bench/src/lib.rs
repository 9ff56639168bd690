//! Criterion benchmarks for `mertens-core`; the code lives in `benches/`.
