//! Repeated seeded runs, aggregation and pairwise comparison.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use carptdsc_core::{solve, Algorithm, Instance, ShortestPaths, SolverParams};

use crate::error::{Error, Result};
use crate::stats::{pdr, wilcoxon_rank_sum, Verdict};

/// A loaded instance ready for benchmarking.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub name: String,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub base_seed: u64,
    pub params: SolverParams,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::MaensGn,
            runs: 20,
            base_seed: 0,
            params: SolverParams::default(),
            jobs: 0,
        }
    }
}

pub fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::MaensGn => "maens-gn",
        Algorithm::MaensOnly => "maens-only",
        Algorithm::InitOnly => "init-only",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    /// `None` when the run failed.
    pub cost: Option<f64>,
    pub wall_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub name: String,
    pub ave: f64,
    pub std: f64,
    pub best: f64,
    pub ave_time_seconds: f64,
    pub failed: usize,
    pub runs: Vec<RunRecord>,
}

impl InstanceReport {
    /// Aggregates over the successful runs. Standard deviation uses the
    /// n - 1 denominator and is 0 for a single run.
    pub fn from_runs(name: impl Into<String>, runs: Vec<RunRecord>) -> Self {
        let costs: Vec<f64> = runs.iter().filter_map(|r| r.cost).collect();
        let n = costs.len() as f64;
        let (ave, std, best) = if costs.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let ave = costs.iter().sum::<f64>() / n;
            let std = if costs.len() > 1 {
                (costs.iter().map(|c| (c - ave).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            (ave, std, costs.iter().copied().fold(f64::INFINITY, f64::min))
        };
        let ave_time_seconds = runs.iter().map(|r| r.wall_seconds).sum::<f64>() / runs.len().max(1) as f64;
        Self {
            name: name.into(),
            ave,
            std,
            best,
            ave_time_seconds,
            failed: runs.len() - costs.len(),
            runs,
        }
    }

    pub fn costs(&self) -> Vec<f64> {
        self.runs.iter().filter_map(|r| r.cost).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub algorithm: String,
    pub runs: usize,
    pub base_seed: u64,
    pub instances: Vec<InstanceReport>,
    pub ave_time_seconds: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per run.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("instance,algorithm,seed,cost,wall_seconds,error\n");
        for inst in &self.instances {
            for r in &inst.runs {
                let cost = r.cost.map(|c| c.to_string()).unwrap_or_default();
                let err = r.error.as_deref().unwrap_or("").replace([',', '\n'], " ");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    inst.name, self.algorithm, r.seed, cost, r.wall_seconds, err
                );
            }
        }
        s
    }

    /// The cost columns only, for comparing reruns.
    pub fn cost_columns(&self) -> Vec<(String, Vec<Option<f64>>)> {
        self.instances
            .iter()
            .map(|i| (i.name.clone(), i.runs.iter().map(|r| r.cost).collect()))
            .collect()
    }
}

/// Runs `solver(instance, paths, seed)` for every instance and seed
/// `base_seed + i`, in parallel up to `jobs` threads.
pub fn run_with<S>(instances: &[BenchInstance], config: &RunConfig, label: &str, solver: S) -> Result<ExperimentReport>
where
    S: Fn(&Instance, &ShortestPaths, u64) -> carptdsc_core::Result<f64> + Sync,
{
    if config.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let paths: Vec<ShortestPaths> = instances.iter().map(|b| ShortestPaths::compute(&b.instance)).collect();
    let jobs: Vec<(usize, u64)> = (0..instances.len())
        .flat_map(|i| (0..config.runs as u64).map(move |r| (i, config.base_seed + r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let records: Vec<(usize, RunRecord)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, seed)| {
                let start = Instant::now();
                let out = solver(&instances[i].instance, &paths[i], seed);
                let wall_seconds = start.elapsed().as_secs_f64();
                let record = match out {
                    Ok(cost) => RunRecord {
                        seed,
                        cost: Some(cost),
                        wall_seconds,
                        error: None,
                    },
                    Err(e) => RunRecord {
                        seed,
                        cost: None,
                        wall_seconds,
                        error: Some(e.to_string()),
                    },
                };
                (i, record)
            })
            .collect()
    });
    let mut per_instance: Vec<Vec<RunRecord>> = vec![Vec::new(); instances.len()];
    for (i, r) in records {
        per_instance[i].push(r);
    }
    let reports: Vec<InstanceReport> = instances
        .iter()
        .zip(per_instance)
        .map(|(b, runs)| {
            let rep = InstanceReport::from_runs(b.name.clone(), runs);
            if rep.failed > 0 {
                log::warn!("{}: {} of {} runs failed", rep.name, rep.failed, config.runs);
            }
            rep
        })
        .collect();
    let ave_time_seconds = reports.iter().map(|r| r.ave_time_seconds).sum::<f64>() / reports.len().max(1) as f64;
    Ok(ExperimentReport {
        algorithm: label.to_string(),
        runs: config.runs,
        base_seed: config.base_seed,
        instances: reports,
        ave_time_seconds,
    })
}

pub fn run_experiment(instances: &[BenchInstance], config: &RunConfig) -> Result<ExperimentReport> {
    let params = &config.params;
    let algorithm = config.algorithm;
    run_with(instances, config, algorithm_name(algorithm), |inst, sp, seed| {
        solve(inst, sp, algorithm, &params.clone().with_seed(seed)).map(|o| o.cost)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub verdict: Verdict,
    /// Reference cost the PDRs are taken against.
    pub reference: f64,
    pub subject_pdr: f64,
    pub baseline_pdr: f64,
    pub subject_hits_best: bool,
    pub baseline_hits_best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
    pub subject_no_best: usize,
    pub baseline_no_best: usize,
    pub subject_ave_pdr: f64,
    pub baseline_ave_pdr: f64,
    pub subject_ave_time: f64,
    pub baseline_ave_time: f64,
}

impl Comparison {
    pub fn wdl(&self) -> String {
        format!("{}-{}-{}", self.wins, self.draws, self.losses)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CompareOptions {
    pub alpha: f64,
    /// Count best hits on the average column instead of the best column.
    pub nobest_on_ave: bool,
    /// Per-instance lower bounds used as PDR reference when present.
    pub lower_bounds: BTreeMap<String, f64>,
}

/// Compares `subject` against `baseline` on the instances both contain.
pub fn compare(subject: &ExperimentReport, baseline: &ExperimentReport, opts: &CompareOptions) -> Result<Comparison> {
    let base: BTreeMap<&str, &InstanceReport> = baseline.instances.iter().map(|i| (i.name.as_str(), i)).collect();
    let mut rows = Vec::new();
    for s in &subject.instances {
        let Some(b) = base.get(s.name.as_str()) else {
            continue;
        };
        let verdict = wilcoxon_rank_sum(&s.costs(), &b.costs(), opts.alpha)?;
        let column = |r: &InstanceReport| if opts.nobest_on_ave { r.ave } else { r.best };
        let best = column(s).min(column(b));
        let reference = opts.lower_bounds.get(&s.name).copied().unwrap_or(s.best.min(b.best));
        rows.push(ComparisonRow {
            name: s.name.clone(),
            verdict,
            reference,
            subject_pdr: pdr(s.ave, reference)?,
            baseline_pdr: pdr(b.ave, reference)?,
            subject_hits_best: column(s) <= best,
            baseline_hits_best: column(b) <= best,
        });
    }
    let count = |v| rows.iter().filter(|r| r.verdict == v).count();
    let n = rows.len().max(1) as f64;
    let time = |r: &ExperimentReport| {
        let names: Vec<&str> = rows.iter().map(|x| x.name.as_str()).collect();
        let t: Vec<f64> = r
            .instances
            .iter()
            .filter(|i| names.contains(&i.name.as_str()))
            .map(|i| i.ave_time_seconds)
            .collect();
        t.iter().sum::<f64>() / t.len().max(1) as f64
    };
    Ok(Comparison {
        wins: count(Verdict::Better),
        draws: count(Verdict::Equivalent),
        losses: count(Verdict::Worse),
        subject_no_best: rows.iter().filter(|r| r.subject_hits_best).count(),
        baseline_no_best: rows.iter().filter(|r| r.baseline_hits_best).count(),
        subject_ave_pdr: rows.iter().map(|r| r.subject_pdr).sum::<f64>() / n,
        baseline_ave_pdr: rows.iter().map(|r| r.baseline_pdr).sum::<f64>() / n,
        subject_ave_time: time(subject),
        baseline_ave_time: time(baseline),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(seed: u64, cost: f64) -> RunRecord {
        RunRecord {
            seed,
            cost: Some(cost),
            wall_seconds: 0.5,
            error: None,
        }
    }

    #[test]
    fn single_run_aggregates() {
        let r = InstanceReport::from_runs("x", vec![run(0, 7.0)]);
        assert_eq!((r.ave, r.std, r.best), (7.0, 0.0, 7.0));
    }

    #[test]
    fn failed_runs_are_excluded() {
        let mut runs = vec![run(0, 2.0), run(1, 4.0)];
        runs.push(RunRecord {
            seed: 2,
            cost: None,
            wall_seconds: 0.1,
            error: Some("boom".into()),
        });
        let r = InstanceReport::from_runs("x", runs);
        assert_eq!(r.failed, 1);
        assert_eq!(r.ave, 3.0);
        assert!((r.std - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.best, 2.0);
    }

    #[test]
    fn comparison_counts() {
        let mk = |name: &str, alg: &str, costs: &[f64]| ExperimentReport {
            algorithm: alg.into(),
            runs: costs.len(),
            base_seed: 0,
            instances: vec![InstanceReport::from_runs(
                name,
                costs.iter().enumerate().map(|(i, &c)| run(i as u64, c)).collect(),
            )],
            ave_time_seconds: 0.5,
        };
        let low: Vec<f64> = (0..20).map(|i| 100.0 + i as f64).collect();
        let high: Vec<f64> = (0..20).map(|i| 200.0 + i as f64).collect();
        let a = mk("g", "a", &low);
        let b = mk("g", "b", &high);
        let c = compare(&a, &b, &CompareOptions { alpha: 0.05, ..Default::default() }).unwrap();
        assert_eq!(c.wdl(), "1-0-0");
        assert_eq!((c.subject_no_best, c.baseline_no_best), (1, 0));
        assert!((c.subject_ave_pdr - 9.5).abs() < 1e-9);
    }

    #[test]
    fn csv_has_a_row_per_run() {
        let rep = ExperimentReport {
            algorithm: "a".into(),
            runs: 2,
            base_seed: 0,
            instances: vec![InstanceReport::from_runs("g", vec![run(0, 1.0), run(1, 2.0)])],
            ave_time_seconds: 0.5,
        };
        assert_eq!(rep.to_csv().lines().count(), 3);
    }
}
