mod common;

use carptdsc_core::{Arc, Instance, ShortestPaths, TaskId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_instance, Layer};

/// All-pairs relaxation over the raw arc list.
fn floyd(instance: &Instance) -> Vec<Vec<f64>> {
    let n = instance.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for a in instance.arcs() {
        if a.travel_time < d[a.tail][a.head] {
            d[a.tail][a.head] = a.travel_time;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn random_digraph(seed: u64, n: usize, extra: usize) -> Instance {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs: Vec<Arc> = (0..n)
        .map(|v| Arc::uniform(v as u32 + 1, v, (v + 1) % n, rng.random_range(1..30) as f64))
        .collect();
    for i in 0..extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        arcs.push(Arc::uniform((n + i) as u32 + 1, u, v, rng.random_range(1..30) as f64));
    }
    Instance::build(n, arcs, vec![], 0, 1.0, 1, 1.0).unwrap()
}

proptest! {
    #[test]
    fn matches_floyd_warshall(seed in any::<u64>(), extra in 0usize..30) {
        let inst = random_digraph(seed, 8, extra);
        let sp = ShortestPaths::compute(&inst);
        let oracle = floyd(&inst);
        for (i, row) in oracle.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                prop_assert_eq!(sp.time(i, j), d);
            }
        }
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 10, 15, 10.0, Layer::Static);
        let sp = ShortestPaths::compute(&inst);
        let n = inst.vertex_count();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    prop_assert!(sp.time(a, c) <= sp.time(a, b) + sp.time(b, c) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn rebuild_is_identical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 9, 12, 10.0, Layer::Static);
        prop_assert_eq!(ShortestPaths::compute(&inst), ShortestPaths::compute(&inst));
    }

    #[test]
    fn inverse_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 6, 8, 10.0, Layer::Static);
        for t in inst.tasks() {
            if let Some(y) = inst.inverse_of(t.id).unwrap() {
                prop_assert_eq!(inst.inverse_of(y).unwrap(), Some(t.id));
            }
        }
    }
}

#[test]
fn path_follows_predecessors() {
    let inst = random_digraph(3, 8, 10);
    let sp = ShortestPaths::compute(&inst);
    let path = sp.path(0, 5).unwrap();
    assert_eq!((path[0], *path.last().unwrap()), (0, 5));
    let walked: f64 = path
        .windows(2)
        .map(|w| {
            inst.arcs()
                .iter()
                .filter(|a| a.tail == w[0] && a.head == w[1])
                .map(|a| a.travel_time)
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    assert_eq!(walked, sp.time(0, 5));
}

#[test]
fn unknown_task_is_an_error() {
    let inst = random_digraph(1, 3, 0);
    assert!(inst.inverse_of(TaskId(7)).is_err());
}
