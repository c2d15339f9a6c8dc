//! First stage: memetic search over routing plans.
//!
//! Candidate plans are scored with every route departing at time 0. Plans
//! may break capacity while searching; the excess is charged at an adaptive
//! penalty rate `lambda` that halves while the population's best is feasible
//! and doubles while it is not. Only feasible plans are ever returned.

mod construct;
mod crossover;
mod local_search;

pub use construct::{
    init_individual, path_scanning, random_plan, select_next_task, selection_probabilities,
    split_tour, ScanRule, TieBreak,
};
pub use crossover::crossover;
pub use local_search::{local_search, merge_split};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::Rng;

use crate::cost::{classify, Family};
use crate::error::{Error, Result};
use crate::eval::{summarize_route, RouteSummary};
use crate::instance::{Instance, TaskId};
use crate::paths::ShortestPaths;
use crate::plan::RoutingPlan;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct MaensParams {
    pub psize: usize,
    /// Number of generations.
    pub generations: usize,
    /// Probability of local search on an offspring.
    pub ls_probability: f64,
    pub offspring: usize,
    /// Routes dissolved by one merge-split move.
    pub ms_routes: usize,
    /// Generations between penalty adaptations.
    pub penalty_interval: usize,
    /// Starting penalty rate; derived from the initial population when `None`.
    pub initial_penalty: Option<f64>,
    pub tie_break: TieBreak,
    pub seed: u64,
}

impl Default for MaensParams {
    fn default() -> Self {
        Self {
            psize: 10,
            generations: 50,
            ls_probability: 0.1,
            offspring: 10,
            ms_routes: 2,
            penalty_interval: 5,
            initial_penalty: None,
            tie_break: TieBreak::Roulette,
            seed: 0,
        }
    }
}

impl MaensParams {
    fn validate(&self) -> Result<()> {
        if self.psize < 2 {
            return Err(Error::InvalidParameter("psize must be at least 2"));
        }
        if !(0.0..=1.0).contains(&self.ls_probability) {
            return Err(Error::InvalidParameter("local-search probability must lie in [0, 1]"));
        }
        if self.offspring == 0 || self.penalty_interval == 0 || self.ms_routes < 2 {
            return Err(Error::InvalidParameter(
                "offspring and penalty interval must be positive, merge-split needs two routes",
            ));
        }
        Ok(())
    }
}

/// Scores routes at departure 0 under the current penalty rate.
#[derive(Clone, Copy)]
pub struct Evaluator<'a> {
    pub instance: &'a Instance,
    pub sp: &'a ShortestPaths,
    pub lambda: f64,
    /// Whether returning after the horizon counts as a violation.
    pub penalize_horizon: bool,
}

impl<'a> Evaluator<'a> {
    /// Evaluator with the horizon penalty enabled only where departures stay
    /// at 0 in the second stage (two-segment instances).
    pub fn new(instance: &'a Instance, sp: &'a ShortestPaths, lambda: f64) -> Self {
        let penalize_horizon = classify(instance).map_or(true, |k| k.family == Family::TwoSegment);
        Self {
            instance,
            sp,
            lambda,
            penalize_horizon,
        }
    }

    pub fn summary(&self, route: &[TaskId]) -> RouteSummary {
        summarize_route(route, 0.0, self.instance, self.sp)
    }

    pub fn violation(&self, s: &RouteSummary) -> f64 {
        let mut v = s.capacity_excess(self.instance.capacity());
        if self.penalize_horizon {
            v += s.horizon_excess(self.instance.horizon());
        }
        v
    }

    pub fn penalized(&self, route: &[TaskId]) -> f64 {
        if route.is_empty() {
            return 0.0;
        }
        let s = self.summary(route);
        s.total + self.lambda * self.violation(&s)
    }

    pub fn individual(&self, routes: Vec<Vec<TaskId>>) -> Individual {
        Individual::evaluate(routes, self)
    }
}

/// A routing plan together with its stage-one scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    routes: Vec<Vec<TaskId>>,
    pub total_cost: f64,
    pub violation: f64,
    pub penalized_cost: f64,
}

impl Individual {
    /// Drops empty routes and sorts the rest so equal plans compare equal.
    pub fn evaluate(mut routes: Vec<Vec<TaskId>>, eval: &Evaluator<'_>) -> Self {
        routes.retain(|r| !r.is_empty());
        routes.sort();
        let (mut total, mut violation) = (0.0, 0.0);
        for route in &routes {
            let s = eval.summary(route);
            total += s.total;
            violation += eval.violation(&s);
        }
        Self {
            routes,
            total_cost: total,
            violation,
            penalized_cost: total + eval.lambda * violation,
        }
    }

    pub fn from_plan(plan: &RoutingPlan, eval: &Evaluator<'_>) -> Self {
        Self::evaluate(plan.routes(), eval)
    }

    pub fn routes(&self) -> &[Vec<TaskId>] {
        &self.routes
    }

    pub fn plan(&self) -> RoutingPlan {
        RoutingPlan::from_routes(&self.routes)
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }

    fn rescore(&mut self, lambda: f64) {
        self.penalized_cost = self.total_cost + lambda * self.violation;
    }
}

/// One line of the per-generation trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Population minimum before replacement, under this generation's lambda.
    pub parent_best_penalized: f64,
    /// Population minimum after replacement, under the same lambda.
    pub best_penalized: f64,
    /// Best feasible cost found so far.
    pub best_feasible: Option<f64>,
    pub lambda: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub best: Individual,
    pub trace: Vec<GenerationRecord>,
    pub population: Vec<Individual>,
}

fn dedup_sorted(pool: &mut Vec<Individual>) {
    pool.sort_by(|a, b| {
        a.penalized_cost
            .total_cmp(&b.penalized_cost)
            .then_with(|| a.routes.cmp(&b.routes))
    });
    pool.dedup_by(|a, b| a.routes == b.routes);
}

/// Initial population of up to `psize` distinct individuals.
///
/// The constructive heuristic is retried with fresh streams; tiny instances
/// that admit fewer distinct constructions are topped up with random plans
/// and, failing that, duplicates.
pub fn initial_population(
    instance: &Instance,
    sp: &ShortestPaths,
    params: &MaensParams,
    eval: &Evaluator<'_>,
) -> Vec<Individual> {
    let mut seen = BTreeSet::new();
    let mut population = Vec::with_capacity(params.psize);
    let attempts = 20 * params.psize as u32;
    for attempt in 0..attempts * 2 {
        if population.len() == params.psize {
            break;
        }
        let mut rng = rng::stream(params.seed, rng::stream_index(0, attempt));
        let plan = if attempt < attempts {
            init_individual(instance, sp, params.tie_break, &mut rng)
        } else {
            random_plan(instance, &mut rng)
        };
        let ind = Individual::from_plan(&plan, eval);
        if seen.insert(ind.routes.clone()) {
            population.push(ind);
        }
    }
    let mut i = 0;
    while population.len() < params.psize {
        population.push(population[i].clone());
        i += 1;
    }
    population
}

fn starting_penalty(population: &[Individual], instance: &Instance) -> f64 {
    let best = population
        .iter()
        .map(|i| i.total_cost)
        .fold(f64::INFINITY, f64::min);
    let lambda = best / instance.capacity();
    if lambda.is_finite() && lambda > 0.0 {
        lambda
    } else {
        1.0
    }
}

/// Runs the memetic search and returns the best feasible plan seen.
pub fn evolve(
    instance: &Instance,
    sp: &ShortestPaths,
    params: &MaensParams,
) -> Result<EvolveOutcome> {
    params.validate()?;
    let mut eval = Evaluator::new(instance, sp, 1.0);
    let mut population = initial_population(instance, sp, params, &eval);
    eval.lambda = params
        .initial_penalty
        .unwrap_or_else(|| starting_penalty(&population, instance));
    population.iter_mut().for_each(|i| i.rescore(eval.lambda));
    dedup_sorted(&mut population);
    while population.len() < params.psize {
        population.push(population[population.len() - 1].clone());
    }

    let mut best_feasible: Option<Individual> = None;
    let consider = |cand: &Individual, best: &mut Option<Individual>| {
        if cand.is_feasible() && best.as_ref().is_none_or(|b| cand.total_cost < b.total_cost) {
            *best = Some(cand.clone());
        }
    };
    population
        .iter()
        .for_each(|i| consider(i, &mut best_feasible));

    let mut trace = Vec::with_capacity(params.generations);
    for generation in 1..=params.generations {
        let parent_best = population[0].penalized_cost;
        let mut offspring = Vec::with_capacity(params.offspring);
        for o in 0..params.offspring {
            let mut rng = rng::stream(params.seed, rng::stream_index(generation as u32, o as u32));
            let a = rng.random_range(0..population.len());
            let b = match population.len() {
                1 => a,
                n => (a + rng.random_range(1..n)) % n,
            };
            let child = crossover(&population[a], &population[b], &eval, &mut rng);
            let child = if rng.random::<f64>() < params.ls_probability {
                local_search(&child, &eval, params.ms_routes, &mut rng)
            } else {
                child
            };
            consider(&child, &mut best_feasible);
            offspring.push(child);
        }
        population.extend(offspring);
        dedup_sorted(&mut population);
        population.truncate(params.psize);

        trace.push(GenerationRecord {
            generation,
            parent_best_penalized: parent_best,
            best_penalized: population[0].penalized_cost,
            best_feasible: best_feasible.as_ref().map(|b| b.total_cost),
            lambda: eval.lambda,
        });

        if generation % params.penalty_interval == 0 {
            if population[0].is_feasible() {
                eval.lambda *= 0.5;
            } else {
                eval.lambda *= 2.0;
            }
            population.iter_mut().for_each(|i| i.rescore(eval.lambda));
            dedup_sorted(&mut population);
        }
    }

    let best = best_feasible.ok_or(Error::NoFeasiblePlan)?;
    Ok(EvolveOutcome {
        best,
        trace,
        population,
    })
}
