#![allow(dead_code)]

use carptdsc_core::{Arc, Instance, ServiceCostFunction, Task, TaskId};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Layer {
    Static,
    TwoSegment,
    ThreeSegment(f64),
}

/// Ring-connected graph with `edges` required undirected edges, each split
/// into an inverse pair. Horizon 0 means "derive one from the costs".
pub fn random_instance<R: Rng>(rng: &mut R, vertices: usize, edges: usize, capacity: f64, layer: Layer) -> Instance {
    let mut arcs = Vec::new();
    for v in 0..vertices {
        let w = (v + 1) % vertices;
        let c = rng.random_range(1..20) as f64;
        arcs.push(Arc::uniform(1000 + 2 * v as u32, v, w, c));
        arcs.push(Arc::uniform(1001 + 2 * v as u32, w, v, c));
    }
    let horizon = 40.0 * edges as f64;
    let mut tasks = Vec::new();
    for e in 0..edges {
        let u = rng.random_range(0..vertices);
        let mut v = rng.random_range(0..vertices);
        if v == u {
            v = (u + 1) % vertices;
        }
        let c = rng.random_range(1..15) as f64;
        let demand = rng.random_range(1..=capacity as u32).min(capacity as u32) as f64;
        let f = match layer {
            Layer::Static => ServiceCostFunction::constant(c).unwrap(),
            Layer::TwoSegment => ServiceCostFunction::two_segment(c, 1.0).unwrap(),
            Layer::ThreeSegment(k) => {
                let mid = horizon * rng.random_range(0.1..0.9);
                let w = c * rng.random_range(1.0..3.0);
                ServiceCostFunction::new(c, (mid - w / 2.0).max(0.0), mid + w / 2.0, k).unwrap()
            }
        };
        let (a, b) = (TaskId(2 * e as u32 + 1), TaskId(2 * e as u32 + 2));
        for (id, inv, t, h) in [(a, b, u, v), (b, a, v, u)] {
            tasks.push(Task {
                id,
                arc: Arc::uniform(id.0, t, h, c),
                demand,
                inverse: Some(inv),
                cost_fn: f,
            });
        }
    }
    let h = if layer == Layer::Static { f64::INFINITY } else { horizon };
    Instance::build(vertices, arcs, tasks, 0, capacity, edges, h).unwrap()
}

/// Single-vertex instance of loops with the given cost functions and no
/// deadheading.
pub fn loops(funcs: &[ServiceCostFunction], horizon: f64) -> Instance {
    let tasks = funcs
        .iter()
        .enumerate()
        .map(|(i, &f)| Task {
            id: TaskId(i as u32 + 1),
            arc: Arc::uniform(i as u32 + 1, 0, 0, 0.0),
            demand: 1.0,
            inverse: None,
            cost_fn: f,
        })
        .collect();
    Instance::build(1, vec![], tasks, 0, funcs.len() as f64, funcs.len(), horizon).unwrap()
}

pub fn fig4() -> Instance {
    let f = |c, b, e, k| ServiceCostFunction::new(c, b, e, k).unwrap();
    loops(&[f(1.0, 1.0, 3.0, 2.0), f(1.0, 10.0, 12.0, 2.0), f(1.0, 14.0, 16.0, 2.0)], 20.0)
}

pub fn ids(v: &[u32]) -> Vec<TaskId> {
    v.iter().copied().map(TaskId).collect()
}

/// Every requirement served exactly once, in one orientation.
pub fn covers(instance: &Instance, routes: &[Vec<TaskId>]) -> bool {
    let mut seen = std::collections::BTreeMap::new();
    for id in routes.iter().flatten() {
        if instance.get(*id).is_none() || id.is_depot() {
            return false;
        }
        *seen.entry(instance.requirement_of(*id)).or_insert(0) += 1;
    }
    seen.len() == instance.required_count() && seen.values().all(|&c| c == 1)
}
