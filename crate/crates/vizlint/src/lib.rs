//! Command-line and HTTP front ends for `vizlint-core`.
//!
//! Both share [`engine`], so a chart linted or fixed through the CLI gets
//! exactly the report or plan the HTTP service would return.

pub mod cli;
pub mod engine;
pub mod server;
