//! Dyadic sawtooth laboratory: dyadic grids on the sphere, Whitney and
//! Carleson decompositions of the unit ball, average-smallness
//! classification of singular drift fields, stopping-time sawtooth domains,
//! and Monte Carlo estimation of elliptic measure with analytic and
//! finite-difference cross-checks.

pub mod checks;
pub mod cli;
pub mod constants;
pub mod drift;
pub mod dyadic;
pub mod geometry;
pub mod measure;
pub mod sawtooth;
pub mod whitney;
