//! Route and solution evaluation.
//!
//! A vehicle leaves the depot at its departure time and never waits: the
//! time of beginning of service on a task is the previous task's start plus
//! its (time-dependent) service time plus the shortest-path travel time in
//! between. Service time equals service cost.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Instance, TaskId};
use crate::paths::ShortestPaths;
use crate::plan::Solution;

/// Detailed evaluation of one route at one departure time.
///
/// `arrival_times` and `service_costs` follow the route with the depot at
/// both ends: index 0 is the departure, the last index the return.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteEval {
    pub arrival_times: Vec<f64>,
    pub service_costs: Vec<f64>,
    pub deadhead_cost: f64,
    pub total: f64,
    pub horizon_violation: f64,
}

impl RouteEval {
    pub fn task_arrivals(&self) -> &[f64] {
        &self.arrival_times[1..self.arrival_times.len() - 1]
    }

    pub fn service_total(&self) -> f64 {
        self.service_costs.iter().sum()
    }

    pub fn return_time(&self) -> f64 {
        *self.arrival_times.last().expect("depot entries always present")
    }
}

pub fn evaluate_route(
    route: &[TaskId],
    departure: f64,
    instance: &Instance,
    sp: &ShortestPaths,
) -> Result<RouteEval> {
    if departure < 0.0 || departure.is_nan() {
        return Err(Error::NegativeTime(departure));
    }
    let mut arrival_times = Vec::with_capacity(route.len() + 2);
    let mut service_costs = Vec::with_capacity(route.len() + 2);
    arrival_times.push(departure);
    service_costs.push(0.0);

    let mut clock = departure;
    let mut deadhead = 0.0;
    let mut at = instance.depot();
    for &id in route {
        let task = instance.task(id)?;
        let (dt, dc) = sp.leg(at, task.arc.tail)?;
        clock += dt;
        deadhead += dc;
        let sc = task.cost_fn.value_at(clock);
        arrival_times.push(clock);
        service_costs.push(sc);
        clock += sc;
        at = task.arc.head;
    }
    let (dt, dc) = sp.leg(at, instance.depot())?;
    clock += dt;
    deadhead += dc;
    arrival_times.push(clock);
    service_costs.push(0.0);

    let service: f64 = service_costs.iter().sum();
    Ok(RouteEval {
        arrival_times,
        service_costs,
        deadhead_cost: deadhead,
        total: service + deadhead,
        horizon_violation: (clock - instance.horizon()).max(0.0),
    })
}

/// Allocation-free route figures used inside the searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteSummary {
    pub total: f64,
    pub load: f64,
    pub return_time: f64,
}

impl RouteSummary {
    pub const EMPTY: Self = Self {
        total: 0.0,
        load: 0.0,
        return_time: 0.0,
    };

    pub fn capacity_excess(&self, capacity: f64) -> f64 {
        (self.load - capacity).max(0.0)
    }

    pub fn horizon_excess(&self, horizon: f64) -> f64 {
        (self.return_time - horizon).max(0.0)
    }
}

/// Cost, load and return time of `route`. Tasks must exist in `instance`;
/// unreachable legs yield infinite cost.
pub fn summarize_route(
    route: &[TaskId],
    departure: f64,
    instance: &Instance,
    sp: &ShortestPaths,
) -> RouteSummary {
    if route.is_empty() {
        return RouteSummary {
            return_time: departure,
            ..RouteSummary::EMPTY
        };
    }
    let mut clock = departure;
    let mut total = 0.0;
    let mut load = 0.0;
    let mut at = instance.depot();
    for &id in route {
        let task = instance.get(id).expect("route holds a known task");
        clock += sp.time(at, task.arc.tail);
        total += sp.cost(at, task.arc.tail);
        let sc = task.cost_fn.value_at(clock);
        clock += sc;
        total += sc;
        load += task.demand;
        at = task.arc.head;
    }
    clock += sp.time(at, instance.depot());
    total += sp.cost(at, instance.depot());
    RouteSummary {
        total,
        load,
        return_time: clock,
    }
}

/// Objective value: the sum of route totals at their departure times.
pub fn evaluate_solution(
    solution: &Solution,
    instance: &Instance,
    sp: &ShortestPaths,
) -> Result<f64> {
    let routes = solution.plan.route_count();
    let departures = solution.departures.as_slice();
    if routes != departures.len() {
        return Err(Error::DepartureCountMismatch {
            routes,
            departures: departures.len(),
        });
    }
    solution
        .plan
        .route_slices()
        .zip(departures)
        .try_fold(0.0, |acc, (route, &t)| {
            Ok(acc + evaluate_route(route, t, instance, sp)?.total)
        })
}

/// Per-constraint outcome of a solution check.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    /// Every route begins and ends at the depot.
    pub depot_delimited: bool,
    /// No task is served twice.
    pub no_duplicates: bool,
    /// No task is served together with its inverse.
    pub no_inverse_conflicts: bool,
    /// Every required task (or its inverse) is served and nothing unknown is.
    pub all_served: bool,
    /// Each route's demand is within capacity.
    pub capacity_respected: bool,
    /// Departures and service starts lie in `[0, T]`.
    pub service_within_horizon: bool,
    /// Each vehicle is back at the depot by `T`.
    pub return_within_horizon: bool,
    pub capacity_excess: Vec<f64>,
    pub duplicates: Vec<TaskId>,
    pub inverse_conflicts: Vec<(TaskId, TaskId)>,
    pub missing: Vec<TaskId>,
    pub unknown: Vec<TaskId>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.depot_delimited
            && self.no_duplicates
            && self.no_inverse_conflicts
            && self.all_served
            && self.capacity_respected
            && self.service_within_horizon
            && self.return_within_horizon
    }

    /// Coverage constraints only: duplicates, inverses and completeness.
    pub fn covers_all_tasks(&self) -> bool {
        self.no_duplicates && self.no_inverse_conflicts && self.all_served
    }
}

pub fn check_feasibility(
    solution: &Solution,
    instance: &Instance,
    sp: &ShortestPaths,
) -> FeasibilityReport {
    let seq = solution.plan.sequence();
    let mut report = FeasibilityReport {
        depot_delimited: seq.first().is_some_and(|t| t.is_depot())
            && seq.last().is_some_and(|t| t.is_depot()),
        ..FeasibilityReport::default()
    };

    let mut seen: BTreeMap<TaskId, usize> = BTreeMap::new();
    for id in solution.plan.served() {
        if instance.get(id).is_none() {
            report.unknown.push(id);
        }
        *seen.entry(id).or_default() += 1;
    }
    report.duplicates = seen
        .iter()
        .filter(|&(_, &n)| n > 1)
        .map(|(&id, _)| id)
        .collect();
    for &id in seen.keys() {
        if let Some(inv) = instance.get(id).and_then(|t| t.inverse) {
            if id < inv && seen.contains_key(&inv) {
                report.inverse_conflicts.push((id, inv));
            }
        }
    }
    report.missing = instance
        .tasks()
        .filter(|t| t.inverse.is_none_or(|inv| t.id < inv))
        .filter(|t| {
            !seen.contains_key(&t.id) && !t.inverse.is_some_and(|inv| seen.contains_key(&inv))
        })
        .map(|t| t.id)
        .collect();
    let served_count: usize = seen.values().sum();
    report.no_duplicates = report.duplicates.is_empty();
    report.no_inverse_conflicts = report.inverse_conflicts.is_empty();
    report.all_served = report.missing.is_empty()
        && report.unknown.is_empty()
        && served_count == instance.required_count();

    let capacity = instance.capacity();
    report.capacity_excess = solution
        .plan
        .route_slices()
        .map(|route| {
            let load: f64 = route
                .iter()
                .filter_map(|&id| instance.get(id))
                .map(|t| t.demand)
                .sum();
            (load - capacity).max(0.0)
        })
        .collect();
    report.capacity_respected = report.capacity_excess.iter().all(|&e| e == 0.0);

    let horizon = instance.horizon();
    let within = |t: f64| (0.0..=horizon).contains(&t);
    report.service_within_horizon = true;
    report.return_within_horizon = true;
    let departures = solution.departures.as_slice();
    if departures.len() != report.capacity_excess.len() {
        report.service_within_horizon = false;
        report.return_within_horizon = false;
    } else if report.unknown.is_empty() {
        for (route, &t) in solution.plan.route_slices().zip(departures) {
            match evaluate_route(route, t, instance, sp) {
                Ok(eval) => {
                    let starts = &eval.arrival_times[..eval.arrival_times.len() - 1];
                    report.service_within_horizon &= starts.iter().all(|&a| within(a));
                    report.return_within_horizon &= within(eval.return_time());
                }
                Err(_) => {
                    report.service_within_horizon = false;
                    report.return_within_horizon = false;
                }
            }
        }
    } else {
        report.service_within_horizon = false;
        report.return_within_horizon = false;
    }
    report
}
