mod common;

use carptdsc_core::eval::summarize_route;
use carptdsc_core::{evaluate_route, evaluate_solution, DepartureTimes, Instance, RoutingPlan, ShortestPaths, Solution, TaskId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fig4, ids, random_instance, Layer};

/// Service cost written out from the three-piece definition.
fn sc(c: f64, bt: f64, et: f64, k: f64, t: f64) -> f64 {
    if t < bt {
        c + k * (bt - t)
    } else if t <= et {
        c
    } else {
        c + k * (t - et)
    }
}

/// Walks every deadhead arc by arc along the reconstructed path.
fn event_walk(route: &[TaskId], t0: f64, inst: &Instance, sp: &ShortestPaths) -> (f64, f64) {
    let leg = |from: usize, to: usize| -> f64 {
        let path = sp.path(from, to).unwrap();
        path.windows(2)
            .map(|w| {
                inst.arcs()
                    .iter()
                    .filter(|a| a.tail == w[0] && a.head == w[1])
                    .map(|a| a.travel_time)
                    .fold(f64::INFINITY, f64::min)
            })
            .sum()
    };
    let (mut clock, mut total, mut at) = (t0, 0.0, inst.depot());
    for id in route {
        let t = inst.get(*id).unwrap();
        let d = leg(at, t.arc.tail);
        clock += d;
        total += d;
        let f = t.cost_fn;
        let s = sc(f.c_min, f.bt, f.et, f.k, clock);
        clock += s;
        total += s;
        at = t.arc.head;
    }
    let d = leg(at, inst.depot());
    (total + d, clock + d)
}

#[test]
fn worked_route_costs() {
    let inst = fig4();
    let sp = ShortestPaths::compute(&inst);
    let route = ids(&[1, 2, 3]);
    for (t, expected) in [(0.0, 23.0), (1.0, 25.0), (2.0, 21.0), (10.0, 115.0)] {
        let e = evaluate_route(&route, t, &inst, &sp).unwrap();
        assert_eq!(e.total, expected, "departure {t}");
        assert_eq!(e.service_total(), expected);
    }
}

#[test]
fn worked_route_arrivals() {
    let inst = fig4();
    let sp = ShortestPaths::compute(&inst);
    let e = evaluate_route(&ids(&[1, 2, 3]), 0.0, &inst, &sp).unwrap();
    assert_eq!(e.task_arrivals(), &[0.0, 3.0, 18.0]);
    assert_eq!(e.return_time(), 23.0);
}

proptest! {
    #[test]
    fn matches_event_walk(seed in any::<u64>(), k in prop::sample::select(vec![0.3, 0.5, 1.0, 2.0, 3.0])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 8, 10, 10.0, Layer::ThreeSegment(k));
        let sp = ShortestPaths::compute(&inst);
        let mut pool: Vec<TaskId> = inst.tasks().map(|t| t.id).filter(|id| id.0 % 2 == 1).collect();
        pool.shuffle(&mut rng);
        let len = rng.random_range(1..=pool.len());
        let route = &pool[..len];
        let t0 = rng.random_range(0.0..inst.horizon());
        let e = evaluate_route(route, t0, &inst, &sp).unwrap();
        let (total, back) = event_walk(route, t0, &inst, &sp);
        prop_assert!((e.total - total).abs() <= 1e-9 * total.max(1.0));
        prop_assert!((e.return_time() - back).abs() <= 1e-9 * back.max(1.0));
        let s = summarize_route(route, t0, &inst, &sp);
        prop_assert!((s.total - e.total).abs() <= 1e-9 * total.max(1.0));
    }

    #[test]
    fn solution_cost_is_separable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 8, 10, 10.0, Layer::ThreeSegment(0.5));
        let sp = ShortestPaths::compute(&inst);
        let mut reqs: Vec<TaskId> = inst.tasks().map(|t| t.id).filter(|id| id.0 % 2 == 1).collect();
        reqs.shuffle(&mut rng);
        let routes: Vec<Vec<TaskId>> = reqs.chunks(3).map(|c| c.to_vec()).collect();
        let deps: Vec<f64> = routes.iter().map(|_| rng.random_range(0.0..inst.horizon())).collect();
        let sol = Solution::new(RoutingPlan::from_routes(&routes), DepartureTimes(deps.clone())).unwrap();
        let whole = evaluate_solution(&sol, &inst, &sp).unwrap();
        let parts: f64 = routes
            .iter()
            .zip(&deps)
            .map(|(r, &t)| evaluate_route(r, t, &inst, &sp).unwrap().total)
            .sum();
        prop_assert!((whole - parts).abs() <= 1e-9 * whole);
    }
}

#[test]
fn negative_departure_rejected() {
    let inst = fig4();
    let sp = ShortestPaths::compute(&inst);
    assert!(evaluate_route(&ids(&[1]), -1.0, &inst, &sp).is_err());
}
