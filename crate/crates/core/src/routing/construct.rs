//! Constructive heuristics: nearest-task route building, path scanning and
//! the optimal split of a task sequence into capacity-feasible routes.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{Instance, Task, TaskId};
use crate::paths::ShortestPaths;
use crate::plan::RoutingPlan;
use crate::routing::Evaluator;

/// Lower bound on a task's service cost when scoring it.
const SCORE_FLOOR: f64 = 1e-9;

/// How ties between equally near tasks are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Roulette wheel on `1 / SC(task, arrival)`.
    Roulette,
    Uniform,
}

fn near_tie(d: f64, best: f64) -> bool {
    best.is_finite() && (d - best).abs() <= 1e-9 * best.abs().max(1.0)
}

/// Selection probability of each candidate when all start service at
/// `arrival`: proportional to the reciprocal of its service cost.
pub fn selection_probabilities(candidates: &[TaskId], arrival: f64, instance: &Instance) -> Vec<f64> {
    let scores: Vec<f64> = candidates
        .iter()
        .map(|&id| {
            let sc = instance
                .get(id)
                .expect("candidate is a known task")
                .cost_fn
                .value_at(arrival);
            1.0 / sc.max(SCORE_FLOOR)
        })
        .collect();
    let sum: f64 = scores.iter().sum();
    scores.into_iter().map(|s| s / sum).collect()
}

/// Roulette-wheel draw among tied candidates.
pub fn select_next_task<R: Rng + ?Sized>(
    candidates: &[TaskId],
    arrival: f64,
    instance: &Instance,
    rng: &mut R,
) -> TaskId {
    debug_assert!(!candidates.is_empty());
    if candidates.len() == 1 {
        return candidates[0];
    }
    let probs = selection_probabilities(candidates, arrival, instance);
    let mut u: f64 = rng.random();
    for (&id, p) in candidates.iter().zip(probs) {
        if u < p {
            return id;
        }
        u -= p;
    }
    *candidates.last().expect("non-empty")
}

/// Tracks which requirements are still unserved.
struct Pending {
    open: Vec<bool>,
    left: usize,
}

impl Pending {
    fn new(instance: &Instance, tasks: impl Iterator<Item = TaskId>) -> Self {
        let max = instance.tasks().map(|t| t.id.0).max().unwrap_or(0) as usize;
        let mut open = vec![false; max + 1];
        let mut left = 0;
        for id in tasks {
            let t = instance.get(id).expect("known task");
            if !open[id.0 as usize] && !t.inverse.is_some_and(|inv| open[inv.0 as usize]) {
                left += 1;
            }
            open[id.0 as usize] = true;
            if let Some(inv) = t.inverse {
                open[inv.0 as usize] = true;
            }
        }
        Self { open, left }
    }

    fn is_open(&self, id: TaskId) -> bool {
        self.open.get(id.0 as usize).copied().unwrap_or(false)
    }

    fn close(&mut self, task: &Task) {
        self.open[task.id.0 as usize] = false;
        if let Some(inv) = task.inverse {
            self.open[inv.0 as usize] = false;
        }
        self.left -= 1;
    }
}

/// Builds routes one at a time, always extending with the nearest unserved
/// task that still fits. `pick` resolves ties given the candidates, their
/// common arrival time and the current load.
fn nearest_task_routes(
    instance: &Instance,
    sp: &ShortestPaths,
    tasks: impl Iterator<Item = TaskId>,
    mut pick: impl FnMut(&[TaskId], f64, f64) -> TaskId,
) -> Vec<Vec<TaskId>> {
    let mut pending = Pending::new(instance, tasks);
    let capacity = instance.capacity();
    let mut routes = Vec::new();
    let mut candidates = Vec::new();
    while pending.left > 0 {
        let mut route = Vec::new();
        let (mut load, mut clock, mut at) = (0.0, 0.0, instance.depot());
        loop {
            let mut best = f64::INFINITY;
            candidates.clear();
            for task in instance.tasks() {
                if !pending.is_open(task.id) || load + task.demand > capacity {
                    continue;
                }
                let d = sp.time(at, task.arc.tail);
                if !d.is_finite() {
                    continue;
                }
                if near_tie(d, best) {
                    candidates.push(task.id);
                } else if d < best {
                    best = d;
                    candidates.clear();
                    candidates.push(task.id);
                }
            }
            if candidates.is_empty() {
                break;
            }
            let arrival = clock + best;
            let id = pick(&candidates, arrival, load);
            let task = instance.get(id).expect("candidate is known");
            route.push(id);
            load += task.demand;
            clock = arrival + task.cost_fn.value_at(arrival);
            at = task.arc.head;
            pending.close(task);
        }
        if route.is_empty() {
            // the rest cannot be reached from the depot; park each on its own route
            for task in instance.tasks() {
                if pending.is_open(task.id) {
                    routes.push(vec![task.id]);
                    pending.close(task);
                }
            }
            break;
        }
        routes.push(route);
    }
    routes
}

/// One individual from the nearest-task constructor at departure 0.
pub fn init_individual<R: Rng + ?Sized>(
    instance: &Instance,
    sp: &ShortestPaths,
    tie_break: TieBreak,
    rng: &mut R,
) -> RoutingPlan {
    let routes = nearest_task_routes(
        instance,
        sp,
        instance.tasks().map(|t| t.id),
        |cands, arrival, _| match tie_break {
            TieBreak::Roulette => select_next_task(cands, arrival, instance, rng),
            TieBreak::Uniform => cands[rng.random_range(0..cands.len())],
        },
    );
    RoutingPlan::from_routes(&routes)
}

/// Deterministic tie-breaking rules of path scanning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanRule {
    /// Prefer tasks ending far from the depot.
    FarFromDepot,
    NearDepot,
    /// Prefer a high demand to service-cost ratio.
    HighYield,
    LowYield,
    /// Far from the depot while under half capacity, near it afterwards.
    HalfCapacity,
}

impl ScanRule {
    pub const ALL: [ScanRule; 5] = [
        ScanRule::FarFromDepot,
        ScanRule::NearDepot,
        ScanRule::HighYield,
        ScanRule::LowYield,
        ScanRule::HalfCapacity,
    ];
}

/// Path scanning over `tasks` (both orientations of each are candidates).
pub fn path_scanning(
    instance: &Instance,
    sp: &ShortestPaths,
    tasks: &[TaskId],
    rule: ScanRule,
) -> Vec<Vec<TaskId>> {
    let depot = instance.depot();
    let half = 0.5 * instance.capacity();
    nearest_task_routes(instance, sp, tasks.iter().copied(), |cands, arrival, load| {
        let key = |id: TaskId| -> f64 {
            let t = instance.get(id).expect("known task");
            let back = sp.time(t.arc.head, depot);
            let ratio = t.demand / t.cost_fn.value_at(arrival).max(SCORE_FLOOR);
            match rule {
                ScanRule::FarFromDepot => -back,
                ScanRule::NearDepot => back,
                ScanRule::HighYield => -ratio,
                ScanRule::LowYield => ratio,
                ScanRule::HalfCapacity if load < half => -back,
                ScanRule::HalfCapacity => back,
            }
        };
        *cands
            .iter()
            .min_by(|&&a, &&b| key(a).total_cmp(&key(b)).then(a.cmp(&b)))
            .expect("non-empty")
    })
}

/// Uniformly shuffled requirements with random orientation, cut greedily
/// whenever capacity would be exceeded.
pub fn random_plan<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> RoutingPlan {
    let mut order: Vec<TaskId> = instance
        .tasks()
        .filter(|t| t.inverse.is_none_or(|inv| t.id < inv))
        .map(|t| match t.inverse {
            Some(inv) if rng.random::<bool>() => inv,
            _ => t.id,
        })
        .collect();
    order.shuffle(rng);
    let mut routes: Vec<Vec<TaskId>> = vec![Vec::new()];
    let mut load = 0.0;
    for id in order {
        let d = instance.get(id).expect("known").demand;
        if load + d > instance.capacity() {
            routes.push(Vec::new());
            load = 0.0;
        }
        load += d;
        routes.last_mut().expect("non-empty").push(id);
    }
    RoutingPlan::from_routes(&routes)
}

/// Minimum-cost split of an ordered task sequence into consecutive routes
/// that each respect capacity. Route costs are evaluated at departure 0 with
/// the evaluator's horizon rule.
pub fn split_tour(tour: &[TaskId], eval: &Evaluator<'_>) -> Vec<Vec<TaskId>> {
    let instance = eval.instance;
    let sp = eval.sp;
    let depot = instance.depot();
    let capacity = instance.capacity();
    let horizon = instance.horizon();
    let n = tour.len();
    let mut best = vec![f64::INFINITY; n + 1];
    let mut cut = vec![0usize; n + 1];
    best[0] = 0.0;
    for i in 0..n {
        if !best[i].is_finite() {
            continue;
        }
        let (mut clock, mut cost, mut load, mut at) = (0.0, 0.0, 0.0, depot);
        for j in i..n {
            let t = instance.get(tour[j]).expect("known task");
            load += t.demand;
            if load > capacity && j > i {
                break;
            }
            clock += sp.time(at, t.arc.tail);
            cost += sp.cost(at, t.arc.tail);
            let sc = t.cost_fn.value_at(clock);
            clock += sc;
            cost += sc;
            at = t.arc.head;
            let mut route_cost = cost + sp.cost(at, depot);
            if eval.penalize_horizon {
                let back = clock + sp.time(at, depot);
                route_cost += eval.lambda * (back - horizon).max(0.0);
            }
            if best[i] + route_cost < best[j + 1] {
                best[j + 1] = best[i] + route_cost;
                cut[j + 1] = i;
            }
        }
    }
    let mut routes = Vec::new();
    let mut j = n;
    while j > 0 {
        let i = cut[j];
        routes.push(tour[i..j].to_vec());
        j = i;
    }
    routes.reverse();
    routes
}
