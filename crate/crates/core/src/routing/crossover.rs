//! Sequence-based crossover with greedy repair.

use alloc::vec::Vec;

use rand::Rng;

use super::{Evaluator, Individual};
use crate::instance::{Instance, TaskId};

/// Where a task goes: an existing route and position, or a fresh route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(super) struct Insertion {
    pub route: Option<usize>,
    pub position: usize,
    pub task: TaskId,
    pub delta: f64,
}

fn with_inserted(route: &[TaskId], position: usize, task: TaskId) -> Vec<TaskId> {
    let mut r = Vec::with_capacity(route.len() + 1);
    r.extend_from_slice(&route[..position]);
    r.push(task);
    r.extend_from_slice(&route[position..]);
    r
}

/// Cheapest penalized insertion of a requirement, trying both orientations
/// at every position of every route and on a route of its own.
pub(super) fn cheapest_insertion(
    routes: &[Vec<TaskId>],
    costs: &[f64],
    task: TaskId,
    eval: &Evaluator<'_>,
) -> Insertion {
    let inverse = eval.instance.get(task).and_then(|t| t.inverse);
    let mut best = Insertion {
        route: None,
        position: 0,
        task,
        delta: f64::INFINITY,
    };
    for id in core::iter::once(task).chain(inverse) {
        let alone = eval.penalized(&[id]);
        if alone < best.delta {
            best = Insertion {
                route: None,
                position: 0,
                task: id,
                delta: alone,
            };
        }
        for (r, route) in routes.iter().enumerate() {
            for p in 0..=route.len() {
                let delta = eval.penalized(&with_inserted(route, p, id)) - costs[r];
                if delta < best.delta {
                    best = Insertion {
                        route: Some(r),
                        position: p,
                        task: id,
                        delta,
                    };
                }
            }
        }
    }
    best
}

pub(super) fn apply_insertion(routes: &mut Vec<Vec<TaskId>>, costs: &mut Vec<f64>, ins: Insertion, eval: &Evaluator<'_>) {
    match ins.route {
        Some(r) => {
            routes[r].insert(ins.position, ins.task);
            costs[r] = eval.penalized(&routes[r]);
        }
        None => {
            routes.push(alloc::vec![ins.task]);
            costs.push(eval.penalized(&routes[routes.len() - 1]));
        }
    }
}

fn slot(instance: &Instance, id: TaskId) -> usize {
    instance.requirement_of(id).0 as usize
}

/// Combines a head of one parent's route with a tail of another parent's
/// route, replaces the first route with the result, then removes duplicated
/// requirements where that saves most and reinserts any lost ones cheaply.
pub fn crossover<R: Rng + ?Sized>(
    a: &Individual,
    b: &Individual,
    eval: &Evaluator<'_>,
    rng: &mut R,
) -> Individual {
    let instance = eval.instance;
    if a.routes().is_empty() || b.routes().is_empty() {
        return a.clone();
    }
    let mut routes = a.routes().to_vec();
    let r1 = rng.random_range(0..routes.len());
    let donor = &b.routes()[rng.random_range(0..b.routes().len())];
    let c1 = rng.random_range(0..=routes[r1].len());
    let c2 = rng.random_range(0..=donor.len());
    let lost: Vec<TaskId> = routes[r1][c1..].to_vec();
    let mut child = routes[r1][..c1].to_vec();
    child.extend_from_slice(&donor[c2..]);
    routes[r1] = child;

    let size = instance.tasks().map(|t| t.id.0).max().unwrap_or(0) as usize + 1;
    let mut count = alloc::vec![0u32; size];
    for id in routes.iter().flatten() {
        count[slot(instance, *id)] += 1;
    }
    let mut costs: Vec<f64> = routes.iter().map(|r| eval.penalized(r)).collect();

    // duplicates: drop the occurrence whose removal saves most
    let mut dups: Vec<usize> = (0..size).filter(|&s| count[s] > 1).collect();
    dups.sort_unstable();
    for s in dups {
        while count[s] > 1 {
            let mut best: Option<(f64, usize, usize)> = None;
            for (r, route) in routes.iter().enumerate() {
                for (p, id) in route.iter().enumerate() {
                    if slot(instance, *id) != s {
                        continue;
                    }
                    let mut shorter = route.clone();
                    shorter.remove(p);
                    let saving = costs[r] - eval.penalized(&shorter);
                    if best.is_none_or(|(bs, _, _)| saving > bs) {
                        best = Some((saving, r, p));
                    }
                }
            }
            let (_, r, p) = best.expect("duplicate occurs");
            routes[r].remove(p);
            costs[r] = eval.penalized(&routes[r]);
            count[s] -= 1;
        }
    }

    for id in lost {
        let s = slot(instance, id);
        if count[s] > 0 {
            continue;
        }
        let ins = cheapest_insertion(&routes, &costs, id, eval);
        apply_insertion(&mut routes, &mut costs, ins, eval);
        count[s] = 1;
    }
    eval.individual(routes)
}
