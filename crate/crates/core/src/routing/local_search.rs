//! Improvement moves on a single individual.

use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::construct::{path_scanning, split_tour, ScanRule};
use super::{Evaluator, Individual};
use crate::instance::TaskId;

const IMPROVEMENT: f64 = 1e-9;
/// Safety cap on accepted moves per descent.
const MAX_MOVES: usize = 100_000;

struct Plan<'e, 'a> {
    routes: Vec<Vec<TaskId>>,
    costs: Vec<f64>,
    eval: &'e Evaluator<'a>,
}

impl Plan<'_, '_> {
    fn orientations(&self, id: TaskId) -> impl Iterator<Item = TaskId> {
        let inv = self.eval.instance.get(id).and_then(|t| t.inverse);
        core::iter::once(id).chain(inv)
    }

    fn reversed(&self, seg: &[TaskId]) -> Option<Vec<TaskId>> {
        seg.iter()
            .rev()
            .map(|&id| self.eval.instance.get(id).and_then(|t| t.inverse))
            .collect()
    }

    /// Moves `len` consecutive tasks starting at (r, p) to the first
    /// improving place found.
    fn try_insertion(&mut self, r: usize, p: usize, len: usize) -> bool {
        if p + len > self.routes[r].len() {
            return false;
        }
        let seg: Vec<TaskId> = self.routes[r][p..p + len].to_vec();
        let mut source = self.routes[r].clone();
        source.drain(p..p + len);
        let source_cost = self.eval.penalized(&source);
        let mut variants = alloc::vec![seg.clone()];
        if len == 1 {
            variants = self.orientations(seg[0]).map(|id| alloc::vec![id]).collect();
        } else if let Some(rev) = self.reversed(&seg) {
            variants.push(rev);
        }
        for v in &variants {
            // a route of its own
            if !source.is_empty() {
                let alone = self.eval.penalized(v);
                if source_cost + alone - self.costs[r] < -IMPROVEMENT {
                    self.routes[r] = source;
                    self.costs[r] = source_cost;
                    self.routes.push(v.clone());
                    self.costs.push(alone);
                    return true;
                }
            }
            for t in 0..self.routes.len() {
                let base: &[TaskId] = if t == r { &source } else { &self.routes[t] };
                for q in 0..=base.len() {
                    if t == r && q == p && *v == seg {
                        continue;
                    }
                    let mut cand = Vec::with_capacity(base.len() + len);
                    cand.extend_from_slice(&base[..q]);
                    cand.extend_from_slice(v);
                    cand.extend_from_slice(&base[q..]);
                    let c = self.eval.penalized(&cand);
                    let delta = if t == r {
                        c - self.costs[r]
                    } else {
                        c + source_cost - self.costs[r] - self.costs[t]
                    };
                    if delta < -IMPROVEMENT {
                        if t != r {
                            self.routes[r] = source;
                            self.costs[r] = source_cost;
                        }
                        self.routes[t] = cand;
                        self.costs[t] = c;
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Exchanges the task at (r, p) with another task, in either orientation.
    fn try_swap(&mut self, r: usize, p: usize) -> bool {
        let x = self.routes[r][p];
        for t in 0..self.routes.len() {
            for q in 0..self.routes[t].len() {
                if (t, q) == (r, p) {
                    continue;
                }
                let y = self.routes[t][q];
                for xo in self.orientations(x) {
                    for yo in self.orientations(y) {
                        let mut a = self.routes[r].clone();
                        if t == r {
                            a[p] = yo;
                            a[q] = xo;
                            let c = self.eval.penalized(&a);
                            if c - self.costs[r] < -IMPROVEMENT {
                                self.routes[r] = a;
                                self.costs[r] = c;
                                return true;
                            }
                        } else {
                            let mut b = self.routes[t].clone();
                            a[p] = yo;
                            b[q] = xo;
                            let (ca, cb) = (self.eval.penalized(&a), self.eval.penalized(&b));
                            if ca + cb - self.costs[r] - self.costs[t] < -IMPROVEMENT {
                                self.routes[r] = a;
                                self.routes[t] = b;
                                self.costs[r] = ca;
                                self.costs[t] = cb;
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn prune(&mut self) {
        let mut i = 0;
        while i < self.routes.len() {
            if self.routes[i].is_empty() {
                self.routes.swap_remove(i);
                self.costs.swap_remove(i);
            } else {
                i += 1;
            }
        }
    }

    fn descend<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let mut moves = 0;
        'outer: while moves < MAX_MOVES {
            self.prune();
            let mut positions: Vec<(usize, usize)> = self
                .routes
                .iter()
                .enumerate()
                .flat_map(|(r, route)| (0..route.len()).map(move |p| (r, p)))
                .collect();
            positions.shuffle(rng);
            for &(r, p) in &positions {
                if self.try_insertion(r, p, 1) || self.try_insertion(r, p, 2) || self.try_swap(r, p) {
                    moves += 1;
                    continue 'outer;
                }
            }
            break;
        }
        self.prune();
    }
}

/// Dissolves `k` random routes, rebuilds their tasks with every scanning
/// rule followed by an optimal split, and keeps the best rebuild if it beats
/// the original.
pub fn merge_split<R: Rng + ?Sized>(
    ind: &Individual,
    eval: &Evaluator<'_>,
    k: usize,
    rng: &mut R,
) -> Individual {
    let routes = ind.routes();
    if routes.len() < 2 || k < 2 {
        return ind.clone();
    }
    let chosen = index::sample(rng, routes.len(), k.min(routes.len())).into_vec();
    let tasks: Vec<TaskId> = chosen.iter().flat_map(|&i| routes[i].iter().copied()).collect();
    let kept: Vec<Vec<TaskId>> = routes
        .iter()
        .enumerate()
        .filter(|(i, _)| !chosen.contains(i))
        .map(|(_, r)| r.clone())
        .collect();
    let mut best = ind.clone();
    for rule in ScanRule::ALL {
        let tour: Vec<TaskId> = path_scanning(eval.instance, eval.sp, &tasks, rule)
            .into_iter()
            .flatten()
            .collect();
        let mut cand = kept.clone();
        cand.extend(split_tour(&tour, eval));
        let cand = eval.individual(cand);
        if cand.penalized_cost < best.penalized_cost - IMPROVEMENT {
            best = cand;
        }
    }
    best
}

/// Descent with insertion, double insertion and swap moves, one merge-split
/// step, then a second descent. Never returns a worse individual.
pub fn local_search<R: Rng + ?Sized>(
    ind: &Individual,
    eval: &Evaluator<'_>,
    ms_routes: usize,
    rng: &mut R,
) -> Individual {
    let run = |routes: &[Vec<TaskId>], rng: &mut R| {
        let mut plan = Plan {
            costs: routes.iter().map(|r| eval.penalized(r)).collect(),
            routes: routes.to_vec(),
            eval,
        };
        plan.descend(rng);
        eval.individual(plan.routes)
    };
    let first = run(ind.routes(), rng);
    let split = merge_split(&first, eval, ms_routes, rng);
    let second = run(split.routes(), rng);
    [second, split, first]
        .into_iter()
        .chain(core::iter::once(ind.clone()))
        .min_by(|a, b| a.penalized_cost.total_cmp(&b.penalized_cost))
        .expect("non-empty")
}
