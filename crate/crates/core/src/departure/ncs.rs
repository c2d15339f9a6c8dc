//! Negatively correlated search on a scalar interval.
//!
//! Each search process is a Gaussian `N(mean, sigma^2)`. Every epoch each
//! process samples one offspring; the offspring replaces its parent when its
//! normalized cost over its normalized diversity falls below a noisy
//! threshold around 1. Diversity is the smallest Bhattacharyya distance to
//! any other process, so processes are pushed apart while they descend.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::departure::ScalarObjective;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcsParams {
    pub process_count: usize,
    /// Hard cap on objective evaluations.
    pub budget: usize,
    /// Initial standard deviation; `None` means a sixth of the interval.
    pub sigma_init: Option<f64>,
    /// Epochs between step-size adaptations.
    pub epoch: usize,
    /// Step-size multiplier of the 1/5 success rule, in `(0, 1)`.
    pub shrink: f64,
    pub seed: u64,
}

impl Default for NcsParams {
    fn default() -> Self {
        Self {
            process_count: 10,
            budget: 2000,
            sigma_init: None,
            epoch: 10,
            shrink: 0.8,
            seed: 0,
        }
    }
}

fn bhattacharyya(m1: f64, s1: f64, m2: f64, s2: f64) -> f64 {
    let v = s1 * s1 + s2 * s2;
    let d = m1 - m2;
    d * d / (4.0 * v) + 0.5 * libm::log(v / (2.0 * s1 * s2))
}

/// Best point seen within `params.budget` evaluations, clamped to `[lo, hi]`.
pub fn ncs<F: FnMut(f64) -> f64, R: Rng + ?Sized>(
    obj: &mut ScalarObjective<F>,
    lo: f64,
    hi: f64,
    params: &NcsParams,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(Error::EmptyInterval { lo, hi });
    }
    if params.process_count < 2 {
        return Err(Error::InvalidParameter("ncs needs at least two processes"));
    }
    if params.budget == 0 {
        return Err(Error::InvalidParameter("ncs budget must be positive"));
    }
    if params.epoch == 0 || !(params.shrink > 0.0 && params.shrink < 1.0) {
        return Err(Error::InvalidParameter("ncs epoch must be positive and shrink in (0, 1)"));
    }
    let sigma0 = params.sigma_init.unwrap_or((hi - lo) / 6.0);
    if !(sigma0 > 0.0) {
        return Err(Error::InvalidParameter("ncs sigma must be positive"));
    }

    let n = params.process_count;
    let budget = params.budget;
    let mut mean: Vec<f64> = Vec::with_capacity(n);
    let mut fit: Vec<f64> = Vec::with_capacity(n);
    let mut best = (lo, f64::INFINITY);
    for _ in 0..n.min(budget) {
        let x = rng.random_range(lo..=hi);
        let f = obj.eval(x);
        if f < best.1 {
            best = (x, f);
        }
        mean.push(x);
        fit.push(f);
    }
    if mean.len() < n {
        return Ok(best);
    }

    let mut sigma = vec![sigma0; n];
    let mut successes = vec![0usize; n];
    let mut children = vec![0.0; n];
    let mut child_fit = vec![0.0; n];
    let mut used = n;
    let mut epochs = 0usize;
    // smallest admissible step so sigma never collapses to zero
    let sigma_floor = (hi - lo) * 1e-12;

    while used < budget {
        let batch = n.min(budget - used);
        for i in 0..batch {
            let z: f64 = StandardNormal.sample(rng);
            let x = (mean[i] + sigma[i] * z).clamp(lo, hi);
            let f = obj.eval(x);
            if f < best.1 {
                best = (x, f);
            }
            children[i] = x;
            child_fit[i] = f;
        }
        used += batch;

        let progress = used as f64 / budget as f64;
        let lambda_sd = 0.1 * (1.0 - progress);
        let shift = best.1 - 1e-12 * best.1.abs().max(1.0);
        for i in 0..batch {
            let mut d_parent = f64::INFINITY;
            let mut d_child = f64::INFINITY;
            for j in (0..n).filter(|&j| j != i) {
                d_parent = d_parent.min(bhattacharyya(mean[i], sigma[i], mean[j], sigma[j]));
                d_child = d_child.min(bhattacharyya(children[i], sigma[i], mean[j], sigma[j]));
            }
            let (fp, fc) = (fit[i] - shift, child_fit[i] - shift);
            let f_norm = fc / (fp + fc);
            let d_sum = d_parent + d_child;
            let d_norm = if d_sum > 0.0 { d_child / d_sum } else { 0.5 };
            let z: f64 = StandardNormal.sample(rng);
            let lambda = 1.0 + lambda_sd * z;
            if d_norm > 0.0 && f_norm / d_norm < lambda {
                mean[i] = children[i];
                fit[i] = child_fit[i];
                successes[i] += 1;
            }
        }

        epochs += 1;
        if epochs % params.epoch == 0 {
            for i in 0..n {
                let rate = successes[i] as f64 / params.epoch as f64;
                if rate > 0.2 {
                    sigma[i] /= params.shrink;
                } else if rate < 0.2 {
                    sigma[i] = (sigma[i] * params.shrink).max(sigma_floor);
                }
                sigma[i] = sigma[i].min(hi - lo);
                successes[i] = 0;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn constant_objective() {
        let mut obj = ScalarObjective::new(|_| 4.5);
        let (_, c) = ncs(&mut obj, 0.0, 10.0, &NcsParams::default(), &mut rng::stream(1, 0)).unwrap();
        assert_eq!(c, 4.5);
        assert_eq!(obj.evaluations(), 2000);
    }

    #[test]
    fn budget_of_one() {
        let mut seen = Vec::new();
        let mut obj = ScalarObjective::new(|t: f64| {
            seen.push(t);
            t * t
        });
        let params = NcsParams {
            budget: 1,
            ..NcsParams::default()
        };
        let (t, c) = ncs(&mut obj, 0.0, 10.0, &params, &mut rng::stream(2, 0)).unwrap();
        assert_eq!(obj.evaluations(), 1);
        drop(obj);
        assert_eq!(seen, vec![t]);
        assert_eq!(c, t * t);
    }

    #[test]
    fn budget_never_exceeded_and_result_in_range() {
        for budget in [3, 10, 11, 57, 2000] {
            let mut obj = ScalarObjective::new(|t: f64| libm::sin(t) * t);
            let params = NcsParams {
                budget,
                ..NcsParams::default()
            };
            let (t, _) = ncs(&mut obj, -3.0, 12.0, &params, &mut rng::stream(3, 0)).unwrap();
            assert!(obj.evaluations() <= budget);
            assert!((-3.0..=12.0).contains(&t));
        }
    }

    #[test]
    fn finds_the_deeper_of_two_basins() {
        let f = |t: f64| libm::fmin(libm::fabs(t - 2.0) + 1.0, 2.0 * libm::fabs(t - 15.0));
        let mut obj = ScalarObjective::new(f);
        let (t, c) = ncs(&mut obj, 0.0, 20.0, &NcsParams::default(), &mut rng::stream(4, 0)).unwrap();
        assert!(c < 0.05, "t={t} c={c}");
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut obj = ScalarObjective::new(|t: f64| t);
        let mut r = rng::stream(5, 0);
        let one = NcsParams { process_count: 1, ..NcsParams::default() };
        assert!(ncs(&mut obj, 0.0, 1.0, &one, &mut r).is_err());
        let zero = NcsParams { budget: 0, ..NcsParams::default() };
        assert!(ncs(&mut obj, 0.0, 1.0, &zero, &mut r).is_err());
        assert!(ncs(&mut obj, 2.0, 1.0, &NcsParams::default(), &mut r).is_err());
    }
}
