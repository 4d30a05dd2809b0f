//! Command-line driver for latclif: form files, operator expressions and
//! the line-oriented verification reports.

pub mod commands;
pub mod expr;
pub mod formfile;
