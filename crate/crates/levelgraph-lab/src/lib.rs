//! Exact combinatorics of enhanced level graphs: validation, slopes and
//! level structures, twist groups and prong matchings, basic log monoids,
//! genus-zero blowup ideals, and tropical fan subdivisions.
//!
//! Everything is computed over exact integer / rational arithmetic; there
//! is no floating point anywhere in the crate.

pub mod cli;
pub mod corpus;
pub mod fan;
pub mod fixtures;
pub mod graph;
pub mod ideal;
pub mod matrix;
pub mod monoid;
pub mod slopes;
pub mod torus;
