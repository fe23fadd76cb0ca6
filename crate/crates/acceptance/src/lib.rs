//! End-to-end acceptance checks for `mqnmr`; see `tests/acceptance.rs`.
