//! Batch front end for exheart: the workspace format, query runner and bundled examples.

pub mod golden;
pub mod run;
pub mod workspace;
