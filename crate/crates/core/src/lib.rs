//! Exact 2-parameter Green functions for finite reductive groups of type A.

pub mod bruteforce;
pub mod green2;
pub mod partitions;
pub mod qpoly;
pub mod report;
pub mod tabledb;
pub mod typea;
