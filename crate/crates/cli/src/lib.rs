//! Expression parser, spec and fixture loaders, and the named check suites behind `jetcert`.

pub mod fixture;
pub mod parser;
pub mod report;
pub mod specfile;
pub mod suites;

pub use report::SuiteReport;
pub use suites::{run_suite, Options, SuiteError, SUITES};
