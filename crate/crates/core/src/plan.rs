//! Solution encoding: a zero-separated task sequence plus one departure time
//! per route.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::TaskId;

/// Splits a zero-delimited sequence into its routes, dropping empty runs.
pub fn split_routes(sequence: &[TaskId]) -> Result<Vec<Vec<TaskId>>> {
    match (sequence.first(), sequence.last()) {
        (Some(first), Some(last)) if first.is_depot() && last.is_depot() => {}
        _ => return Err(Error::MalformedPlan),
    }
    Ok(sequence
        .split(|t| t.is_depot())
        .filter(|run| !run.is_empty())
        .map(<[TaskId]>::to_vec)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RoutingPlan {
    sequence: Vec<TaskId>,
}

impl RoutingPlan {
    pub fn from_sequence(sequence: Vec<TaskId>) -> Result<Self> {
        split_routes(&sequence)?;
        Ok(Self { sequence })
    }

    /// Canonical plan: one separator between consecutive non-empty routes.
    pub fn from_routes<R: AsRef<[TaskId]>>(routes: &[R]) -> Self {
        let mut sequence = vec![TaskId::DEPOT];
        for route in routes.iter().map(AsRef::as_ref).filter(|r| !r.is_empty()) {
            sequence.extend_from_slice(route);
            sequence.push(TaskId::DEPOT);
        }
        if sequence.len() == 1 {
            sequence.push(TaskId::DEPOT);
        }
        Self { sequence }
    }

    pub fn sequence(&self) -> &[TaskId] {
        &self.sequence
    }

    pub fn routes(&self) -> Vec<Vec<TaskId>> {
        split_routes(&self.sequence).expect("validated at construction")
    }

    /// Borrowed routes, same order as [`routes`](Self::routes).
    pub fn route_slices(&self) -> impl Iterator<Item = &[TaskId]> {
        self.sequence.split(|t| t.is_depot()).filter(|r| !r.is_empty())
    }

    pub fn route_count(&self) -> usize {
        self.route_slices().count()
    }

    /// Real task ids in plan order.
    pub fn served(&self) -> impl Iterator<Item = TaskId> + '_ {
        self.sequence.iter().copied().filter(|t| !t.is_depot())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DepartureTimes(pub Vec<f64>);

impl DepartureTimes {
    pub fn zeros(routes: usize) -> Self {
        Self(vec![0.0; routes])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub plan: RoutingPlan,
    pub departures: DepartureTimes,
    pub cost: Option<f64>,
}

impl Solution {
    pub fn new(plan: RoutingPlan, departures: DepartureTimes) -> Result<Self> {
        let routes = plan.route_count();
        if routes != departures.len() {
            return Err(Error::DepartureCountMismatch {
                routes,
                departures: departures.len(),
            });
        }
        Ok(Self {
            plan,
            departures,
            cost: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<TaskId> {
        v.iter().copied().map(TaskId).collect()
    }

    #[test]
    fn split_examples() {
        assert_eq!(
            split_routes(&ids(&[0, 1, 3, 0, 2, 4, 0])).unwrap(),
            vec![ids(&[1, 3]), ids(&[2, 4])]
        );
        assert!(split_routes(&ids(&[0, 0])).unwrap().is_empty());
        assert_eq!(split_routes(&ids(&[0, 5, 0])).unwrap(), vec![ids(&[5])]);
        assert_eq!(split_routes(&ids(&[0, 5, 0, 0, 6, 0])).unwrap().len(), 2);
    }

    #[test]
    fn undelimited_plans_rejected() {
        assert_eq!(split_routes(&ids(&[1, 3, 0])), Err(Error::MalformedPlan));
        assert_eq!(split_routes(&ids(&[0, 1, 3])), Err(Error::MalformedPlan));
        assert_eq!(split_routes(&[]), Err(Error::MalformedPlan));
    }

    #[test]
    fn from_routes_is_canonical() {
        let plan = RoutingPlan::from_routes(&[ids(&[1, 3]), vec![], ids(&[2])]);
        assert_eq!(plan.sequence(), ids(&[0, 1, 3, 0, 2, 0]).as_slice());
        assert_eq!(plan.route_count(), 2);
        assert_eq!(RoutingPlan::from_routes::<Vec<TaskId>>(&[]).sequence(), ids(&[0, 0]).as_slice());
    }

    #[test]
    fn departure_count_checked() {
        let plan = RoutingPlan::from_routes(&[ids(&[1])]);
        assert!(Solution::new(plan.clone(), DepartureTimes::zeros(1)).is_ok());
        assert_eq!(
            Solution::new(plan, DepartureTimes::zeros(2)).unwrap_err(),
            Error::DepartureCountMismatch { routes: 1, departures: 2 }
        );
    }
}
