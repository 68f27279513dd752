//! Library surface of the `hbl` binary: input schemas, report types, and the
//! SVG renderer, exposed so integration tests can round-trip reports.

pub mod config;
pub mod report;
pub mod svg;
