use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use carptdsc::annotation::{generate_td, TdAnnotation, TdFamily, DEFAULT_SLOPES};
use carptdsc::experiment::{algorithm_name, compare, run_experiment, BenchInstance, CompareOptions, ExperimentReport, RunConfig};
use carptdsc::io::{load_instance, parse_instance, Layer};
use carptdsc::solution_text::{format_solution, parse_solution};
use carptdsc::Error;
use carptdsc_core::departure::{grid_oracle, route_objective, GssParams, NcsParams};
use carptdsc_core::routing::{MaensParams, TieBreak};
use carptdsc_core::{solve, Algorithm, Instance, ShortestPaths, SolverParams};

#[derive(Parser)]
#[command(name = "carptdsc", version, about = "Arc routing with time-dependent service costs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance once and print the solution.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the solution text here as well.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-generation trace CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Repeated seeded runs over one or more instances.
    Bench {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// Base seed; run i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// JSON report path; a CSV with the same stem is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Create a time-dependent annotation for a static instance.
    Generate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        family: TdFamily,
        /// Slope magnitudes to draw from.
        #[arg(long, value_delimiter = ',')]
        slopes: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check each route's departure against an exhaustive grid search.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Solution text to verify; solved afresh when absent.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid step; defaults to horizon / 10^5.
        #[arg(long)]
        oracle_step: Option<f64>,
    },
    /// Compare two bench reports.
    Stats {
        /// Report of the algorithm under test.
        subject: PathBuf,
        /// Report it is compared against.
        baseline: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        nobest_on_ave: bool,
        /// TOML table `name = bound` used as PDR reference.
        #[arg(long)]
        lower_bounds: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long = "instance", required = true, num_args = 1..)]
    instances: Vec<PathBuf>,
    /// Annotation sidecar applied to the (single) instance.
    #[arg(long, conflicts_with = "family")]
    annotation: Option<PathBuf>,
    /// Generate a time-dependent layer on the fly.
    #[arg(long)]
    family: Option<TdFamily>,
    /// Seed of the generated layer.
    #[arg(long, default_value_t = 0)]
    td_seed: u64,
    /// Keep only this many Solomon customers.
    #[arg(long)]
    customers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    MaensGn,
    MaensOnly,
    InitOnly,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Roulette,
    Uniform,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "maens-gn")]
    algorithm: AlgorithmArg,
    #[arg(long)]
    psize: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    ls_prob: Option<f64>,
    #[arg(long)]
    ms_routes: Option<usize>,
    #[arg(long, value_enum)]
    tie_break: Option<TieBreakArg>,
    #[arg(long)]
    gss_eps: Option<f64>,
    #[arg(long)]
    ncs_budget: Option<usize>,
    #[arg(long)]
    ncs_procs: Option<usize>,
}

impl SolverArgs {
    fn algorithm(&self) -> Algorithm {
        match self.algorithm {
            AlgorithmArg::MaensGn => Algorithm::MaensGn,
            AlgorithmArg::MaensOnly => Algorithm::MaensOnly,
            AlgorithmArg::InitOnly => Algorithm::InitOnly,
        }
    }

    fn params(&self) -> SolverParams {
        let d = MaensParams::default();
        let maens = MaensParams {
            psize: self.psize.unwrap_or(d.psize),
            generations: self.generations.unwrap_or(d.generations),
            ls_probability: self.ls_prob.unwrap_or(d.ls_probability),
            ms_routes: self.ms_routes.unwrap_or(d.ms_routes),
            tie_break: match self.tie_break {
                Some(TieBreakArg::Uniform) => TieBreak::Uniform,
                _ => TieBreak::Roulette,
            },
            ..d
        };
        let n = NcsParams::default();
        SolverParams {
            maens,
            gss: self.gss_eps.map(|epsilon| GssParams { epsilon }),
            ncs: NcsParams {
                budget: self.ncs_budget.unwrap_or(n.budget),
                process_count: self.ncs_procs.unwrap_or(n.process_count),
                ..n
            },
        }
    }
}

impl InputArgs {
    fn layer(&self) -> Result<Layer, Error> {
        if let Some(path) = &self.annotation {
            if self.instances.len() > 1 {
                return Err(Error::Config("an annotation applies to a single instance".into()));
            }
            return Ok(Layer::Annotation(TdAnnotation::parse(&fs::read_to_string(path)?)?));
        }
        Ok(match self.family {
            Some(family) => Layer::generate(family, self.td_seed),
            None => Layer::None,
        })
    }

    fn load(&self) -> Result<Vec<BenchInstance>, Error> {
        let layer = self.layer()?;
        self.instances
            .iter()
            .map(|p| {
                let instance = load_instance(p, self.customers, &layer)?;
                Ok(BenchInstance {
                    name: instance.name().to_string(),
                    instance,
                })
            })
            .collect()
    }

    fn load_one(&self) -> Result<Instance, Error> {
        let mut all = self.load()?;
        if all.len() != 1 {
            return Err(Error::Config("expected exactly one --instance".into()));
        }
        Ok(all.remove(0).instance)
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve {
            input,
            solver,
            seed,
            out,
            trace,
        } => {
            let instance = input.load_one()?;
            let sp = ShortestPaths::compute(&instance);
            let outcome = solve(&instance, &sp, solver.algorithm(), &solver.params().with_seed(seed))?;
            let text = format_solution(&outcome.solution, &instance, &sp)?;
            print!("{text}");
            if let Some(p) = out {
                fs::write(p, &text)?;
            }
            if let Some(p) = trace {
                let mut csv = String::from("generation,best_penalized,best_feasible\n");
                for r in &outcome.trace {
                    let feasible = r.best_feasible.map(|c| c.to_string()).unwrap_or_default();
                    csv.push_str(&format!("{},{},{}\n", r.generation, r.best_penalized, feasible));
                }
                fs::write(p, csv)?;
            }
        }
        Command::Bench {
            input,
            solver,
            runs,
            seed,
            jobs,
            out,
        } => {
            let instances = input.load()?;
            let config = RunConfig {
                algorithm: solver.algorithm(),
                runs,
                base_seed: seed,
                params: solver.params(),
                jobs,
            };
            let report = run_experiment(&instances, &config)?;
            println!("{:<16} {:>12} {:>10} {:>12} {:>10}", "instance", "ave", "std", "best", "time(s)");
            for r in &report.instances {
                println!(
                    "{:<16} {:>12.2} {:>10.2} {:>12.2} {:>10.3}",
                    r.name, r.ave, r.std, r.best, r.ave_time_seconds
                );
            }
            println!("{} over {} runs, Ave.Time {:.3}s", algorithm_name(config.algorithm), runs, report.ave_time_seconds);
            if let Some(p) = out {
                fs::write(&p, report.to_json()?)?;
                fs::write(p.with_extension("csv"), report.to_csv())?;
            }
        }
        Command::Generate {
            instance,
            family,
            slopes,
            seed,
            out,
        } => {
            let inst = parse_instance(&fs::read_to_string(&instance)?, None)?;
            let slopes = slopes.unwrap_or_else(|| DEFAULT_SLOPES.to_vec());
            let (_, ann) = generate_td(&inst, family, &slopes, seed)?;
            write_or_print(out.as_deref(), &ann.serialize()?)?;
        }
        Command::Oracle {
            input,
            solution,
            solver,
            seed,
            oracle_step,
        } => {
            let instance = input.load_one()?;
            let sp = ShortestPaths::compute(&instance);
            let sol = match solution {
                Some(p) => parse_solution(&fs::read_to_string(p)?)?.0,
                None => solve(&instance, &sp, solver.algorithm(), &solver.params().with_seed(seed))?.solution,
            };
            let horizon = instance.horizon();
            if !horizon.is_finite() {
                return Err(Error::Config("the oracle needs a finite horizon".into()));
            }
            let step = oracle_step.unwrap_or(horizon / 1e5);
            let mut worst: f64 = 0.0;
            for (k, (route, &t)) in sol.plan.route_slices().zip(sol.departures.as_slice()).enumerate() {
                let mut obj = route_objective(route, &instance, &sp);
                let cost = obj.eval(t);
                let (t_star, c_star) = grid_oracle(&mut obj, 0.0, horizon, step)?;
                let gap = (cost - c_star) / c_star.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(gap);
                println!("route {}: depart {t} cost {cost}; oracle {t_star} cost {c_star}; gap {:+.3e}", k + 1, gap);
            }
            println!("worst relative gap {worst:+.3e}");
        }
        Command::Stats {
            subject,
            baseline,
            alpha,
            nobest_on_ave,
            lower_bounds,
            out,
        } => {
            let a = ExperimentReport::from_json(&fs::read_to_string(subject)?)?;
            let b = ExperimentReport::from_json(&fs::read_to_string(baseline)?)?;
            let lower_bounds = match lower_bounds {
                Some(p) => toml::from_str(&fs::read_to_string(p)?)?,
                None => Default::default(),
            };
            let cmp = compare(
                &a,
                &b,
                &CompareOptions {
                    alpha,
                    nobest_on_ave,
                    lower_bounds,
                },
            )?;
            println!("{:<16} {:>12} {:>10} {:>10} {:>10}", "instance", "verdict", "pdr", "base pdr", "reference");
            for r in &cmp.rows {
                println!(
                    "{:<16} {:>12} {:>9.2}% {:>9.2}% {:>10.2}",
                    r.name,
                    format!("{:?}", r.verdict).to_lowercase(),
                    r.subject_pdr,
                    r.baseline_pdr,
                    r.reference
                );
            }
            println!("w-d-l {}", cmp.wdl());
            println!("No.best {} vs {}", cmp.subject_no_best, cmp.baseline_no_best);
            println!("Ave.PDR {:.2}% vs {:.2}%", cmp.subject_ave_pdr, cmp.baseline_ave_pdr);
            println!("Ave.Time {:.3}s vs {:.3}s", cmp.subject_ave_time, cmp.baseline_ave_time);
            if let Some(p) = out {
                fs::write(p, serde_json::to_string_pretty(&cmp)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
