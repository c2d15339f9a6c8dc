//! The two-stage solver: routing search at departure 0, then per-route
//! departure optimization.

use alloc::vec::Vec;

use crate::departure::{optimize_departures, GssParams, NcsParams};
use crate::error::{Error, Result};
use crate::eval::evaluate_solution;
use crate::instance::Instance;
use crate::paths::ShortestPaths;
use crate::plan::{DepartureTimes, Solution};
use crate::rng;
use crate::routing::{evolve, init_individual, Evaluator, GenerationRecord, Individual, MaensParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Routing search followed by departure optimization.
    MaensGn,
    /// Routing search with every route leaving at time 0.
    MaensOnly,
    /// Best constructed individual, leaving at time 0.
    InitOnly,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverParams {
    pub maens: MaensParams,
    /// Defaults to a tolerance relative to the horizon.
    pub gss: Option<GssParams>,
    pub ncs: NcsParams,
}

impl SolverParams {
    /// Same parameters with every random stream keyed by `seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.maens.seed = seed;
        self.ncs.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Solution,
    pub cost: f64,
    pub trace: Vec<GenerationRecord>,
}

fn best_initial(instance: &Instance, sp: &ShortestPaths, params: &MaensParams) -> Result<Individual> {
    let eval = Evaluator::new(instance, sp, 1.0);
    (0..params.psize as u32)
        .map(|i| {
            let mut rng = rng::stream(params.seed, rng::stream_index(0, i));
            let plan = init_individual(instance, sp, params.tie_break, &mut rng);
            Individual::from_plan(&plan, &eval)
        })
        .filter(Individual::is_feasible)
        .min_by(|a, b| a.total_cost.total_cmp(&b.total_cost))
        .ok_or(Error::NoFeasiblePlan)
}

pub fn solve(
    instance: &Instance,
    sp: &ShortestPaths,
    algorithm: Algorithm,
    params: &SolverParams,
) -> Result<SolveOutcome> {
    let (best, trace) = match algorithm {
        Algorithm::InitOnly => (best_initial(instance, sp, &params.maens)?, Vec::new()),
        _ => {
            let out = evolve(instance, sp, &params.maens)?;
            (out.best, out.trace)
        }
    };
    let plan = best.plan();
    let departures = match algorithm {
        Algorithm::MaensGn => {
            let gss = params
                .gss
                .unwrap_or_else(|| GssParams::for_horizon(instance.horizon()));
            optimize_departures(&plan, instance, sp, &gss, &params.ncs)?
        }
        _ => DepartureTimes::zeros(plan.route_count()),
    };
    let mut solution = Solution::new(plan, departures)?;
    let cost = evaluate_solution(&solution, instance, sp)?;
    solution.cost = Some(cost);
    Ok(SolveOutcome {
        solution,
        cost,
        trace,
    })
}
