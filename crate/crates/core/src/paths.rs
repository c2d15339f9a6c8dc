//! All-pairs shortest paths for deadheading between tasks.
//!
//! One Dijkstra run per source minimizes travel time; ties go to the lower
//! travel cost and then to the lower predecessor vertex, so reconstructed
//! paths are deterministic.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::instance::Instance;

const NO_PRED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    n: usize,
    time: Vec<f64>,
    cost: Vec<f64>,
    pred: Vec<u32>,
}

#[derive(Clone, Copy, PartialEq)]
struct Label {
    time: f64,
    cost: f64,
    vertex: usize,
}

impl Eq for Label {}

impl Ord for Label {
    // reversed so `BinaryHeap` pops the smallest label
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.cost.total_cmp(&self.cost))
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl ShortestPaths {
    pub fn compute(instance: &Instance) -> Self {
        let n = instance.vertex_count();
        let mut out_arcs: Vec<Vec<(usize, f64, f64)>> = vec![Vec::new(); n];
        for arc in instance.arcs() {
            out_arcs[arc.tail].push((arc.head, arc.travel_time, arc.travel_cost));
        }
        for list in &mut out_arcs {
            list.sort_by(|a, b| a.0.cmp(&b.0));
        }

        let mut time = vec![f64::INFINITY; n * n];
        let mut cost = vec![f64::INFINITY; n * n];
        let mut pred = vec![NO_PRED; n * n];
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();

        for source in 0..n {
            let row = source * n;
            settled.iter_mut().for_each(|s| *s = false);
            time[row + source] = 0.0;
            cost[row + source] = 0.0;
            heap.push(Label {
                time: 0.0,
                cost: 0.0,
                vertex: source,
            });
            while let Some(Label { time: t, cost: c, vertex: u }) = heap.pop() {
                if settled[u] {
                    continue;
                }
                settled[u] = true;
                for &(v, dt, dc) in &out_arcs[u] {
                    if settled[v] {
                        continue;
                    }
                    let (nt, nc) = (t + dt, c + dc);
                    let (ot, oc) = (time[row + v], cost[row + v]);
                    let better = nt < ot || (nt == ot && nc < oc);
                    let tie = nt == ot && nc == oc && (u as u32) < pred[row + v];
                    if better || tie {
                        time[row + v] = nt;
                        cost[row + v] = nc;
                        pred[row + v] = u as u32;
                        if better {
                            heap.push(Label {
                                time: nt,
                                cost: nc,
                                vertex: v,
                            });
                        }
                    }
                }
            }
        }
        Self { n, time, cost, pred }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn time(&self, from: usize, to: usize) -> f64 {
        self.time[from * self.n + to]
    }

    #[inline]
    pub fn cost(&self, from: usize, to: usize) -> f64 {
        self.cost[from * self.n + to]
    }

    #[inline]
    pub fn reachable(&self, from: usize, to: usize) -> bool {
        self.time(from, to).is_finite()
    }

    /// `(time, cost)` of the shortest path, or an error when unreachable.
    pub fn leg(&self, from: usize, to: usize) -> Result<(f64, f64)> {
        if self.reachable(from, to) {
            Ok((self.time(from, to), self.cost(from, to)))
        } else {
            Err(Error::Unreachable { from, to })
        }
    }

    /// Vertex sequence of the shortest path including both endpoints.
    pub fn path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if !self.reachable(from, to) {
            return None;
        }
        let mut rev = vec![to];
        let mut v = to;
        while v != from {
            v = self.pred[from * self.n + v] as usize;
            rev.push(v);
        }
        rev.reverse();
        Some(rev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::ServiceCostFunction;
    use crate::instance::{Arc, Task, TaskId};

    fn line_instance() -> Instance {
        let t = Task {
            id: TaskId(1),
            arc: Arc::uniform(1, 0, 1, 4.0),
            demand: 1.0,
            inverse: None,
            cost_fn: ServiceCostFunction::constant(4.0).unwrap(),
        };
        Instance::build(3, vec![Arc::uniform(2, 1, 2, 1.5)], vec![t], 0, 5.0, 1, 100.0).unwrap()
    }

    #[test]
    fn single_arc_distance_and_self_distance() {
        let sp = ShortestPaths::compute(&line_instance());
        assert_eq!(sp.time(0, 1), 4.0);
        assert_eq!(sp.time(0, 2), 5.5);
        for v in 0..3 {
            assert_eq!((sp.time(v, v), sp.cost(v, v)), (0.0, 0.0));
        }
        assert!(!sp.reachable(1, 0));
        assert_eq!(sp.leg(2, 0), Err(Error::Unreachable { from: 2, to: 0 }));
        assert_eq!(sp.path(0, 2).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn cost_breaks_time_ties() {
        let t = Task {
            id: TaskId(1),
            arc: Arc {
                id: 1,
                tail: 0,
                head: 1,
                length: 1.0,
                travel_time: 2.0,
                travel_cost: 9.0,
            },
            demand: 1.0,
            inverse: None,
            cost_fn: ServiceCostFunction::constant(1.0).unwrap(),
        };
        let detour = vec![
            Arc { id: 2, tail: 0, head: 2, length: 1.0, travel_time: 1.0, travel_cost: 1.0 },
            Arc { id: 3, tail: 2, head: 1, length: 1.0, travel_time: 1.0, travel_cost: 1.0 },
        ];
        let inst = Instance::build(3, detour, vec![t], 0, 5.0, 1, 100.0).unwrap();
        let sp = ShortestPaths::compute(&inst);
        assert_eq!((sp.time(0, 1), sp.cost(0, 1)), (2.0, 2.0));
        assert_eq!(sp.path(0, 1).unwrap(), vec![0, 2, 1]);
    }
}
