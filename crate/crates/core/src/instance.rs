//! Directed-graph model of an instance.
//!
//! Task id 0 is the depot dummy: a zero-length loop at the depot vertex with
//! every attribute zero. Real tasks carry positive ids; an undirected source
//! edge becomes two tasks that name each other as inverse.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cost::ServiceCostFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TaskId(pub u32);

impl TaskId {
    pub const DEPOT: TaskId = TaskId(0);

    pub fn is_depot(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed arc between dense vertex indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub id: u32,
    pub tail: usize,
    pub head: usize,
    pub length: f64,
    pub travel_time: f64,
    pub travel_cost: f64,
}

impl Arc {
    /// Arc whose length, travel time and travel cost coincide.
    pub fn uniform(id: u32, tail: usize, head: usize, cost: f64) -> Self {
        Self {
            id,
            tail,
            head,
            length: cost,
            travel_time: cost,
            travel_cost: cost,
        }
    }
}

/// A required arc.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: TaskId,
    pub arc: Arc,
    pub demand: f64,
    pub inverse: Option<TaskId>,
    pub cost_fn: ServiceCostFunction,
}

/// Input record for [`Instance::build`]; identical in shape to [`Task`].
pub type TaskSpec = Task;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    vertex_count: usize,
    arcs: Vec<Arc>,
    /// `tasks[0]` is the depot dummy, the rest are sorted by id.
    tasks: Vec<Task>,
    slot: Vec<u32>,
    depot: usize,
    capacity: f64,
    fleet_size: usize,
    horizon: f64,
    vertex_labels: Vec<u32>,
}

impl Instance {
    /// Validates the pieces of an instance and installs the depot dummy task.
    ///
    /// `travel_arcs` are the arcs usable only for deadheading; each task's own
    /// arc is added to the traversable graph automatically.
    pub fn build(
        vertex_count: usize,
        travel_arcs: Vec<Arc>,
        mut tasks: Vec<TaskSpec>,
        depot: usize,
        capacity: f64,
        fleet_size: usize,
        horizon: f64,
    ) -> Result<Self> {
        let check_vertex = |v: usize| {
            if v < vertex_count {
                Ok(())
            } else {
                Err(Error::DanglingVertex {
                    vertex: v,
                    count: vertex_count,
                })
            }
        };
        check_vertex(depot)?;
        if !(capacity > 0.0) {
            return Err(Error::InvalidAttribute("capacity must be positive"));
        }
        if !(horizon > 0.0) {
            return Err(Error::NonPositiveHorizon);
        }
        for arc in travel_arcs.iter().chain(tasks.iter().map(|t| &t.arc)) {
            check_vertex(arc.tail)?;
            check_vertex(arc.head)?;
            if !(arc.travel_time >= 0.0 && arc.travel_cost >= 0.0) {
                return Err(Error::InvalidAttribute("travel time and cost must be non-negative"));
            }
        }

        tasks.sort_by_key(|t| t.id);
        for pair in tasks.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateTask(pair[0].id));
            }
        }
        let max_id = tasks.last().map_or(0, |t| t.id.0 as usize);
        let mut slot = vec![ABSENT; max_id + 1];
        for (i, task) in tasks.iter().enumerate() {
            if task.id.is_depot() {
                return Err(Error::ReservedTaskId);
            }
            if !(task.demand >= 0.0) {
                return Err(Error::InvalidAttribute("demand must be non-negative"));
            }
            if task.demand > capacity {
                return Err(Error::DemandAboveCapacity {
                    task: task.id,
                    demand: task.demand,
                    capacity,
                });
            }
            task.cost_fn.validate()?;
            slot[task.id.0 as usize] = (i + 1) as u32;
        }
        slot[0] = 0;

        let depot_task = Task {
            id: TaskId::DEPOT,
            arc: Arc {
                id: 0,
                tail: depot,
                head: depot,
                length: 0.0,
                travel_time: 0.0,
                travel_cost: 0.0,
            },
            demand: 0.0,
            inverse: None,
            cost_fn: ServiceCostFunction::ZERO,
        };
        let mut all = Vec::with_capacity(tasks.len() + 1);
        all.push(depot_task);
        all.extend(tasks);

        let instance_arcs: Vec<Arc> = all[1..]
            .iter()
            .map(|t| t.arc)
            .chain(travel_arcs)
            .collect();

        let instance = Self {
            name: String::new(),
            vertex_count,
            arcs: instance_arcs,
            tasks: all,
            slot,
            depot,
            capacity,
            fleet_size,
            horizon,
            vertex_labels: (1..=vertex_count as u32).collect(),
        };
        for task in instance.tasks() {
            if let Some(inv) = task.inverse {
                match instance.get(inv) {
                    Some(other) if other.inverse == Some(task.id) && inv != task.id => {}
                    _ => {
                        return Err(Error::InverseMismatch {
                            task: task.id,
                            inverse: inv,
                        })
                    }
                }
            }
        }
        Ok(instance)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Attaches the external vertex labels used for reporting.
    pub fn with_vertex_labels(mut self, labels: Vec<u32>) -> Self {
        debug_assert_eq!(labels.len(), self.vertex_count);
        self.vertex_labels = labels;
        self
    }

    /// Replaces every real task's cost function and the horizon.
    pub fn with_time_dependence(
        &self,
        horizon: f64,
        mut cost_of: impl FnMut(&Task) -> ServiceCostFunction,
    ) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::NonPositiveHorizon);
        }
        let mut next = self.clone();
        for task in next.tasks.iter_mut().skip(1) {
            let f = cost_of(task);
            f.validate()?;
            task.cost_fn = f;
        }
        next.horizon = horizon;
        Ok(next)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertex_label(&self, v: usize) -> u32 {
        self.vertex_labels[v]
    }

    /// Every traversable arc: task arcs first, then travel-only arcs.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn depot(&self) -> usize {
        self.depot
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn depot_task(&self) -> &Task {
        &self.tasks[0]
    }

    /// Real tasks in ascending id order.
    pub fn tasks(&self) -> impl ExactSizeIterator<Item = &Task> + Clone {
        self.tasks[1..].iter()
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len() - 1
    }

    /// Number of tasks that must be served: inverse pairs count once.
    pub fn required_count(&self) -> usize {
        self.tasks()
            .filter(|t| t.inverse.is_none_or(|inv| t.id < inv))
            .count()
    }

    /// The depot dummy for id 0, the task for a known id, `None` otherwise.
    #[inline]
    pub fn get(&self, id: TaskId) -> Option<&Task> {
        match self.slot.get(id.0 as usize) {
            Some(&s) if s != ABSENT => Some(&self.tasks[s as usize]),
            _ => None,
        }
    }

    pub fn task(&self, id: TaskId) -> Result<&Task> {
        self.get(id).ok_or(Error::UnknownTask(id))
    }

    pub fn inverse_of(&self, id: TaskId) -> Result<Option<TaskId>> {
        Ok(self.task(id)?.inverse)
    }

    /// Smallest id of the task and its inverse; identifies what must be served.
    pub fn requirement_of(&self, id: TaskId) -> TaskId {
        match self.get(id).and_then(|t| t.inverse) {
            Some(inv) if inv < id => inv,
            _ => id,
        }
    }

    pub fn total_demand(&self) -> f64 {
        self.tasks()
            .filter(|t| t.inverse.is_none_or(|inv| t.id < inv))
            .map(|t| t.demand)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(id: u32, tail: usize, head: usize, demand: f64, inverse: Option<u32>) -> Task {
        Task {
            id: TaskId(id),
            arc: Arc::uniform(id, tail, head, 2.0),
            demand,
            inverse: inverse.map(TaskId),
            cost_fn: ServiceCostFunction::constant(2.0).unwrap(),
        }
    }

    #[test]
    fn minimal_instance_has_depot_dummy() {
        let inst = Instance::build(2, vec![], vec![task(1, 0, 1, 3.0, None)], 0, 5.0, 1, 10.0)
            .unwrap();
        assert_eq!(inst.task_count(), 1);
        let depot = inst.task(TaskId::DEPOT).unwrap();
        assert_eq!(depot.demand, 0.0);
        assert_eq!(depot.cost_fn, ServiceCostFunction::ZERO);
        assert_eq!(inst.arcs().len(), 1);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = Instance::build(
            2,
            vec![],
            vec![task(7, 0, 1, 1.0, None), task(7, 1, 0, 1.0, None)],
            0,
            5.0,
            1,
            10.0,
        )
        .unwrap_err();
        assert_eq!(err, Error::DuplicateTask(TaskId(7)));
    }

    #[test]
    fn construction_errors() {
        let over = Instance::build(2, vec![], vec![task(1, 0, 1, 6.0, None)], 0, 5.0, 1, 10.0);
        assert!(matches!(over, Err(Error::DemandAboveCapacity { .. })));
        let dangling = Instance::build(2, vec![], vec![task(1, 0, 4, 1.0, None)], 0, 5.0, 1, 10.0);
        assert!(matches!(dangling, Err(Error::DanglingVertex { vertex: 4, .. })));
        let zero = Instance::build(2, vec![], vec![task(0, 0, 1, 1.0, None)], 0, 5.0, 1, 10.0);
        assert_eq!(zero.unwrap_err(), Error::ReservedTaskId);
        let horizon = Instance::build(2, vec![], vec![task(1, 0, 1, 1.0, None)], 0, 5.0, 1, 0.0);
        assert_eq!(horizon.unwrap_err(), Error::NonPositiveHorizon);
        let one_sided = Instance::build(
            2,
            vec![],
            vec![task(1, 0, 1, 1.0, Some(2)), task(2, 1, 0, 1.0, None)],
            0,
            5.0,
            1,
            10.0,
        );
        assert!(matches!(one_sided, Err(Error::InverseMismatch { .. })));
    }

    #[test]
    fn inverse_lookup() {
        let inst = Instance::build(
            3,
            vec![],
            vec![
                task(1, 0, 1, 1.0, Some(2)),
                task(2, 1, 0, 1.0, Some(1)),
                task(3, 1, 2, 1.0, None),
            ],
            0,
            5.0,
            1,
            10.0,
        )
        .unwrap();
        assert_eq!(inst.inverse_of(TaskId(1)).unwrap(), Some(TaskId(2)));
        assert_eq!(inst.inverse_of(TaskId(2)).unwrap(), Some(TaskId(1)));
        assert_eq!(inst.inverse_of(TaskId(3)).unwrap(), None);
        assert_eq!(inst.inverse_of(TaskId(9)), Err(Error::UnknownTask(TaskId(9))));
        assert_eq!(inst.required_count(), 2);
        assert_eq!(inst.requirement_of(TaskId(2)), TaskId(1));
        assert_eq!(inst.total_demand(), 2.0);
    }
}
