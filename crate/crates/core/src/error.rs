use crate::instance::TaskId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate task id {0}")]
    DuplicateTask(TaskId),
    #[error("task id 0 is reserved for the depot")]
    ReservedTaskId,
    #[error("task {task} has demand {demand} above vehicle capacity {capacity}")]
    DemandAboveCapacity {
        task: TaskId,
        demand: f64,
        capacity: f64,
    },
    #[error("vertex {vertex} is out of range (instance has {count} vertices)")]
    DanglingVertex { vertex: usize, count: usize },
    #[error("task {task} names inverse {inverse} which does not point back")]
    InverseMismatch { task: TaskId, inverse: TaskId },
    #[error("invalid attribute: {0}")]
    InvalidAttribute(&'static str),
    #[error("planning horizon must be positive")]
    NonPositiveHorizon,
    #[error("unknown task id {0}")]
    UnknownTask(TaskId),
    #[error("cost function evaluated at negative time {0}")]
    NegativeTime(f64),
    #[error("instance has no real tasks")]
    NoTasks,
    #[error("tasks use different slope magnitudes ({0} and {1})")]
    HeterogeneousSlope(f64, f64),
    #[error("routing plan must begin and end with the depot separator 0")]
    MalformedPlan,
    #[error("no path from vertex {from} to vertex {to}")]
    Unreachable { from: usize, to: usize },
    #[error("{routes} routes but {departures} departure times")]
    DepartureCountMismatch { routes: usize, departures: usize },
    #[error("search interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("no feasible routing plan found")]
    NoFeasiblePlan,
}
