//! Time-dependent service-cost functions.
//!
//! Every task carries a three-segment piecewise-linear function of its time
//! of beginning of service: decreasing with slope `-k` before `bt`, flat at
//! `c_min` on `[bt, et]` and increasing with slope `k` after `et`. The
//! two-segment family is the degenerate case `bt = et = 0`.

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Piecewise-linear service cost `SC(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceCostFunction {
    pub c_min: f64,
    pub bt: f64,
    pub et: f64,
    pub k: f64,
}

impl ServiceCostFunction {
    pub const ZERO: Self = Self {
        c_min: 0.0,
        bt: 0.0,
        et: 0.0,
        k: 0.0,
    };

    pub fn new(c_min: f64, bt: f64, et: f64, k: f64) -> Result<Self> {
        let f = Self { c_min, bt, et, k };
        f.validate()?;
        Ok(f)
    }

    /// Increasing from time zero with slope `k`.
    pub fn two_segment(c_min: f64, k: f64) -> Result<Self> {
        Self::new(c_min, 0.0, 0.0, k)
    }

    /// Flat at `c_min` for every time.
    pub fn constant(c_min: f64) -> Result<Self> {
        Self::new(c_min, 0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        if !(finite(self.c_min) && self.c_min >= 0.0) {
            return Err(Error::InvalidAttribute("c_min must be finite and non-negative"));
        }
        if !(finite(self.bt) && finite(self.et) && 0.0 <= self.bt && self.bt <= self.et) {
            return Err(Error::InvalidAttribute("flat segment must satisfy 0 <= bt <= et"));
        }
        if !(finite(self.k) && self.k >= 0.0) {
            return Err(Error::InvalidAttribute("slope magnitude must be finite and non-negative"));
        }
        Ok(())
    }

    /// No decreasing segment: flat from time 0, then rising.
    pub fn is_two_segment(&self) -> bool {
        self.bt == 0.0
    }

    /// Cost of beginning service at `t`, rejecting negative times.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.value_at(t))
    }

    /// Unchecked variant of [`evaluate`](Self::evaluate) for hot loops where
    /// `t >= 0` already holds.
    #[inline]
    pub fn value_at(&self, t: f64) -> f64 {
        if t < self.bt {
            self.c_min + self.k * (self.bt - t)
        } else if t > self.et {
            self.c_min + self.k * (t - self.et)
        } else {
            self.c_min
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    TwoSegment,
    ThreeSegment,
}

/// Instance-wide classification used to dispatch departure optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceKind {
    pub family: Family,
    pub k: f64,
}

/// Classifies an instance by its real tasks' cost functions.
///
/// All tasks must share one slope magnitude.
pub fn classify(instance: &Instance) -> Result<InstanceKind> {
    let mut tasks = instance.tasks();
    let first = tasks.next().ok_or(Error::NoTasks)?;
    let k = first.cost_fn.k;
    let mut two_segment = first.cost_fn.is_two_segment();
    for task in tasks {
        if task.cost_fn.k != k {
            return Err(Error::HeterogeneousSlope(k, task.cost_fn.k));
        }
        two_segment &= task.cost_fn.is_two_segment();
    }
    let family = if two_segment {
        Family::TwoSegment
    } else {
        Family::ThreeSegment
    };
    Ok(InstanceKind { family, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(c: f64, bt: f64, et: f64, k: f64) -> ServiceCostFunction {
        ServiceCostFunction::new(c, bt, et, k).unwrap()
    }

    #[test]
    fn worked_values() {
        assert_eq!(f(1.0, 1.0, 3.0, 2.0).evaluate(0.0).unwrap(), 3.0);
        assert_eq!(f(1.0, 10.0, 12.0, 2.0).evaluate(3.0).unwrap(), 15.0);
        assert_eq!(f(1.0, 14.0, 16.0, 2.0).evaluate(18.0).unwrap(), 5.0);
    }

    #[test]
    fn breakpoints_are_flat() {
        let g = f(4.0, 2.5, 7.0, 0.3);
        assert_eq!(g.value_at(2.5), 4.0);
        assert_eq!(g.value_at(7.0), 4.0);
    }

    #[test]
    fn negative_time_rejected() {
        assert!(matches!(
            f(1.0, 0.0, 0.0, 1.0).evaluate(-0.5),
            Err(Error::NegativeTime(_))
        ));
    }

    #[test]
    fn bad_shapes_rejected() {
        assert!(ServiceCostFunction::new(1.0, 3.0, 2.0, 1.0).is_err());
        assert!(ServiceCostFunction::new(-1.0, 0.0, 0.0, 1.0).is_err());
        assert!(ServiceCostFunction::new(1.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn two_segment_is_non_decreasing() {
        let g = f(3.0, 0.0, 0.0, 1.0);
        let mut prev = g.value_at(0.0);
        for i in 1..100 {
            let v = g.value_at(i as f64 * 0.37);
            assert!(v >= prev);
            prev = v;
        }
    }
}
