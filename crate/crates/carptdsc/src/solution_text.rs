//! Line-oriented solution text:
//!
//! ```text
//! route 1: 3 8 11; depart 0; cost 42.5
//! route 2: 6; depart 12.25; cost 17
//! total 59.5
//! ```

use std::fmt::Write as _;

use carptdsc_core::{evaluate_route, DepartureTimes, Instance, RoutingPlan, ShortestPaths, Solution, TaskId};

use crate::error::{Error, Result};

/// Formats `solution` with per-route costs evaluated on `instance`.
pub fn format_solution(solution: &Solution, instance: &Instance, sp: &ShortestPaths) -> Result<String> {
    let mut out = String::new();
    let mut total = 0.0;
    for (k, (route, &t)) in solution
        .plan
        .route_slices()
        .zip(solution.departures.as_slice())
        .enumerate()
    {
        let cost = evaluate_route(route, t, instance, sp)?.total;
        total += cost;
        let tasks: Vec<String> = route.iter().map(|id| id.to_string()).collect();
        let _ = writeln!(out, "route {}: {}; depart {t}; cost {cost}", k + 1, tasks.join(" "));
    }
    let _ = writeln!(out, "total {total}");
    Ok(out)
}

/// Parsed form: the solution (with the stated total as its cost) and the
/// stated per-route costs.
pub fn parse_solution(text: &str) -> Result<(Solution, Vec<f64>)> {
    let mut routes = Vec::new();
    let mut departs = Vec::new();
    let mut costs = Vec::new();
    let mut total = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| Error::Malformed {
            line: line_no,
            reason: reason.to_string(),
        };
        let num = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| Error::NotNumeric {
                line: line_no,
                field: s.trim().to_string(),
            })
        };
        if let Some(rest) = line.strip_prefix("total") {
            total = Some(num(rest)?);
            continue;
        }
        let rest = line
            .strip_prefix("route")
            .ok_or_else(|| malformed("expected `route` or `total`"))?;
        let (_, body) = rest.split_once(':').ok_or_else(|| malformed("expected `route k:`"))?;
        let mut parts = body.split(';');
        let tasks = parts
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|s| {
                s.parse::<u32>().map(TaskId).map_err(|_| Error::NotNumeric {
                    line: line_no,
                    field: s.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let depart = parts
            .next()
            .and_then(|p| p.trim().strip_prefix("depart"))
            .ok_or_else(|| malformed("expected `depart t`"))?;
        let cost = parts
            .next()
            .and_then(|p| p.trim().strip_prefix("cost"))
            .ok_or_else(|| malformed("expected `cost c`"))?;
        routes.push(tasks);
        departs.push(num(depart)?);
        costs.push(num(cost)?);
    }
    let mut solution = Solution::new(RoutingPlan::from_routes(&routes), DepartureTimes(departs))?;
    solution.cost = total;
    Ok((solution, costs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use carptdsc_core::{Arc, ServiceCostFunction, Task};

    fn inst() -> Instance {
        let task = |id, tail, head, f| Task {
            id: TaskId(id),
            arc: Arc::uniform(id, tail, head, 0.0),
            demand: 1.0,
            inverse: None,
            cost_fn: f,
        };
        Instance::build(
            1,
            vec![],
            vec![
                task(1, 0, 0, ServiceCostFunction::new(1.0, 1.0, 3.0, 2.0).unwrap()),
                task(2, 0, 0, ServiceCostFunction::new(1.0, 10.0, 12.0, 2.0).unwrap()),
            ],
            0,
            5.0,
            2,
            100.0,
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let inst = inst();
        let sp = ShortestPaths::compute(&inst);
        let plan = RoutingPlan::from_routes(&[vec![TaskId(1)], vec![TaskId(2)]]);
        let sol = Solution::new(plan, DepartureTimes(vec![0.0, 10.5])).unwrap();
        let text = format_solution(&sol, &inst, &sp).unwrap();
        assert_eq!(text, "route 1: 1; depart 0; cost 3\nroute 2: 2; depart 10.5; cost 1\ntotal 4\n");
        let (back, costs) = parse_solution(&text).unwrap();
        assert_eq!(back.plan, sol.plan);
        assert_eq!(back.departures, sol.departures);
        assert_eq!(back.cost, Some(4.0));
        assert_eq!(costs, vec![3.0, 1.0]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_solution("route 1: 1 x; depart 0; cost 1\n").is_err());
        assert!(parse_solution("hello\n").is_err());
    }
}
