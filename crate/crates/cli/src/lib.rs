//! Configuration parsing, output writers and self-checks behind `fbgsim`.

pub mod config;
pub mod output;
pub mod selftest;
