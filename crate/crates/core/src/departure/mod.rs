//! Second stage: per-route departure-time optimization.
//!
//! The objective is separable over routes, so each route's departure is
//! optimized on its own over `[0, T]`. Two-segment instances always depart
//! at 0 (route cost never decreases with departure). Three-segment instances
//! with slope magnitude `k <= 1` have convex route cost and use golden-section
//! search; steeper slopes make it multimodal and use negatively correlated
//! search.

mod gss;
mod ncs;
mod oracle;

pub use gss::{gss, gss_evaluation_bound, GssParams};
pub use ncs::{ncs, NcsParams};
pub use oracle::grid_oracle;

use alloc::vec::Vec;

use crate::cost::{classify, Family, InstanceKind};
use crate::error::{Error, Result};
use crate::eval::summarize_route;
use crate::instance::{Instance, TaskId};
use crate::paths::ShortestPaths;
use crate::plan::{DepartureTimes, RoutingPlan};
use crate::rng;

/// Scalar function of the departure time with an evaluation counter.
pub struct ScalarObjective<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(f64) -> f64> ScalarObjective<F> {
    pub fn new(f: F) -> Self {
        Self { f, evaluations: 0 }
    }

    pub fn eval(&mut self, t: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(t)
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }
}

/// Total cost of `route` as a function of its departure time.
pub fn route_objective<'a>(
    route: &'a [TaskId],
    instance: &'a Instance,
    sp: &'a ShortestPaths,
) -> ScalarObjective<impl FnMut(f64) -> f64 + 'a> {
    ScalarObjective::new(move |t| summarize_route(route, t, instance, sp).total)
}

/// Which optimizer a route of the given instance kind is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DepartAtZero,
    GoldenSection,
    NegativelyCorrelated,
}

impl Method {
    pub fn for_kind(kind: InstanceKind) -> Self {
        match kind.family {
            Family::TwoSegment => Method::DepartAtZero,
            Family::ThreeSegment if kind.k <= 1.0 => Method::GoldenSection,
            Family::ThreeSegment => Method::NegativelyCorrelated,
        }
    }
}

/// Optimized departure and resulting cost for route number `index`.
pub fn optimize_route(
    route: &[TaskId],
    index: usize,
    method: Method,
    instance: &Instance,
    sp: &ShortestPaths,
    gss_params: &GssParams,
    ncs_params: &NcsParams,
) -> Result<(f64, f64)> {
    let horizon = instance.horizon();
    let mut obj = route_objective(route, instance, sp);
    match method {
        Method::DepartAtZero => Ok((0.0, obj.eval(0.0))),
        _ if !horizon.is_finite() => Err(Error::InvalidParameter(
            "departure search needs a finite planning horizon",
        )),
        Method::GoldenSection => gss(&mut obj, 0.0, horizon, gss_params.epsilon),
        Method::NegativelyCorrelated => {
            let mut rng = rng::stream(ncs_params.seed, index as u64);
            ncs(&mut obj, 0.0, horizon, ncs_params, &mut rng)
        }
    }
}

/// Departure time for every route of `plan`.
pub fn optimize_departures(
    plan: &RoutingPlan,
    instance: &Instance,
    sp: &ShortestPaths,
    gss_params: &GssParams,
    ncs_params: &NcsParams,
) -> Result<DepartureTimes> {
    let method = Method::for_kind(classify(instance)?);
    let times = plan
        .route_slices()
        .enumerate()
        .map(|(i, route)| {
            optimize_route(route, i, method, instance, sp, gss_params, ncs_params).map(|r| r.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DepartureTimes(times))
}
