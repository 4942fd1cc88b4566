//! Library surface of the CLI: dataset I/O, seeded generators, and the
//! bench harness, shared by the binary and the acceptance tests.

pub mod bench;
pub mod dataset;
pub mod generate;
