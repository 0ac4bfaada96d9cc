//! Multiperiod power-sector decarbonisation planning.
//!
//! The crate assembles a superstructural mixed-integer linear program from a
//! validated planning [`domain::Instance`] (power plants, CCS retrofits,
//! alternative fuels, renewables and negative-emissions technologies), solves
//! it to proven global optimality with an embedded bounded-variable simplex
//! plus branch-and-bound, and converts the optimum back into per-period
//! deployment, emissions and cost reports.
//!
//! The companion `decarb-cli` crate adds the CSV workbook formats and the
//! command-line front end; everything in here is pure computation.

pub mod domain;
pub mod milp;
pub mod model;
pub mod report;
pub mod solver;

#[cfg(any(test, feature = "fixtures"))]
pub mod fixtures;
