//! Comparison statistics for benchmark reports.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Percentage deviation of `tc1` from the reference `tc2`.
pub fn pdr(tc1: f64, tc2: f64) -> Result<f64> {
    if !(tc2 > 0.0) {
        return Err(Error::NonPositiveReference(tc2));
    }
    Ok((tc1 - tc2) / tc2 * 100.0)
}

/// Outcome for sample `a` against sample `b` where lower is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Better,
    Equivalent,
    Worse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSum {
    /// Sum of the (mid)ranks of the first sample in the pooled ordering.
    pub statistic: f64,
    pub p_value: f64,
    /// Whether the p-value comes from full enumeration.
    pub exact: bool,
    mean_rank_a: f64,
    mean_rank_b: f64,
}

/// Samples this small in either group get the exact null distribution,
/// provided the number of rank assignments stays manageable.
const EXACT_BELOW: usize = 10;
const EXACT_MAX_ASSIGNMENTS: f64 = 1e6;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Midranks (1-based) of the pooled samples, plus the tie-group sizes.
fn midranks(pooled: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

/// Two-sided p-value by counting, over all ways of drawing `n1` of the
/// pooled ranks, those whose sum is at least as far from the mean.
fn exact_p(ranks: &[f64], n1: usize, w: f64) -> f64 {
    // doubled midranks are integers
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    let mut ways = vec![vec![0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for &d in &doubled {
        for j in (1..=n1).rev() {
            for s in (d..=max_sum).rev() {
                let add = ways[j - 1][s - d];
                if add != 0.0 {
                    ways[j][s] += add;
                }
            }
        }
    }
    let total: f64 = ways[n1].iter().sum();
    let mean2 = n1 as f64 * max_sum as f64 / ranks.len() as f64;
    let observed = (2.0 * w - mean2).abs();
    let extreme: f64 = ways[n1]
        .iter()
        .enumerate()
        .filter(|&(s, _)| (s as f64 - mean2).abs() >= observed - 1e-9)
        .map(|(_, &c)| c)
        .sum();
    (extreme / total).min(1.0)
}

/// Two-sided Wilcoxon rank-sum test with midranks for ties.
pub fn rank_sum(a: &[f64], b: &[f64]) -> Result<RankSum> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&pooled);
    let w: f64 = ranks[..n1].iter().sum();
    let mean_rank_a = w / n1 as f64;
    let mean_rank_b = ranks[n1..].iter().sum::<f64>() / n2 as f64;

    if (n1 < EXACT_BELOW || n2 < EXACT_BELOW) && binomial(n, n1) <= EXACT_MAX_ASSIGNMENTS {
        return Ok(RankSum {
            statistic: w,
            p_value: exact_p(&ranks, n1, w),
            exact: true,
            mean_rank_a,
            mean_rank_b,
        });
    }
    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let mean = n1f * (nf + 1.0) / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (nf * (nf - 1.0));
    let var = n1f * n2f / 12.0 * (nf + 1.0 - tie_term);
    let p_value = if var <= 0.0 {
        1.0
    } else {
        let diff = (w - mean).abs();
        let z = (diff - 0.5).max(0.0) / var.sqrt();
        let std = Normal::standard();
        (2.0 * (1.0 - std.cdf(z))).min(1.0)
    };
    Ok(RankSum {
        statistic: w,
        p_value,
        exact: false,
        mean_rank_a,
        mean_rank_b,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Verdict for `a` against `b` at significance `alpha`; direction by
/// medians, falling back to mean ranks when the medians coincide.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<Verdict> {
    let test = rank_sum(a, b)?;
    if test.p_value >= alpha {
        return Ok(Verdict::Equivalent);
    }
    let (ma, mb) = (median(a), median(b));
    let a_lower = if ma != mb {
        ma < mb
    } else {
        test.mean_rank_a < test.mean_rank_b
    };
    Ok(if a_lower {
        Verdict::Better
    } else {
        Verdict::Worse
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pdr_values() {
        assert_eq!(pdr(316.0, 316.0).unwrap(), 0.0);
        assert!((pdr(363.0, 316.0).unwrap() - 14.873417721518987).abs() < 1e-12);
        assert!(pdr(1.0, 0.0).is_err());
    }

    #[test]
    fn identical_samples_are_equivalent() {
        let a = [5.0; 20];
        assert_eq!(wilcoxon_rank_sum(&a, &a, 0.05).unwrap(), Verdict::Equivalent);
    }

    #[test]
    fn separated_samples() {
        let a: Vec<f64> = (0..20).map(f64::from).collect();
        let b: Vec<f64> = (100..120).map(f64::from).collect();
        assert_eq!(wilcoxon_rank_sum(&a, &b, 0.05).unwrap(), Verdict::Better);
        assert_eq!(wilcoxon_rank_sum(&b, &a, 0.05).unwrap(), Verdict::Worse);
    }

    #[test]
    fn midranks_with_ties() {
        let (r, t) = midranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(t, vec![1, 1, 2]);
    }

    #[test]
    fn empty_sample() {
        assert!(rank_sum(&[], &[1.0]).is_err());
    }
}
