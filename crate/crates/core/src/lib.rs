//! Solver core for the capacitated arc routing problem with time-dependent
//! service costs.
//!
//! The crate is `no_std` (it needs `alloc`). It holds the instance model,
//! piecewise-linear service-cost functions, route evaluation, the memetic
//! routing search and the per-route departure-time optimizers. Parsing,
//! reporting and the command line live in the `carptdsc` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cost;
pub mod departure;
pub mod error;
pub mod eval;
pub mod instance;
pub mod paths;
pub mod plan;
pub mod rng;
pub mod routing;
pub mod solver;

pub use cost::{classify, Family, InstanceKind, ServiceCostFunction};
pub use error::{Error, Result};
pub use eval::{
    check_feasibility, evaluate_route, evaluate_solution, FeasibilityReport, RouteEval,
};
pub use instance::{Arc, Instance, Task, TaskId, TaskSpec};
pub use paths::ShortestPaths;
pub use plan::{DepartureTimes, RoutingPlan, Solution};
pub use solver::{solve, Algorithm, SolveOutcome, SolverParams};
