//! Scheme files, reports and verification suites behind the `kahler` binary.

pub mod report;
pub mod scheme_file;
pub mod verify;
