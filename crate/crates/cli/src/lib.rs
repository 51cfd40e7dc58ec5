//! Experiment drivers, report serialization, and plotting behind the
//! `greedylab` command-line tool.

pub mod experiment;
pub mod report;
pub mod svg;
