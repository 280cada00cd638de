//! Holds the acceptance test target only; run it with
//! `cargo test -p e2e-spin-acceptance --test acceptance -- --nocapture`.
