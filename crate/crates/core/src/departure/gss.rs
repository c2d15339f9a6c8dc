use crate::departure::ScalarObjective;
use crate::error::{Error, Result};

/// `1 / φ`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GssParams {
    /// Search stops once the bracket is shorter than this.
    pub epsilon: f64,
}

impl GssParams {
    /// Default tolerance: a thousandth of the planning horizon.
    pub fn for_horizon(horizon: f64) -> Self {
        Self {
            epsilon: 1e-3 * horizon,
        }
    }
}

/// Most evaluations [`gss`] makes after its initial pair on an interval of
/// length `len`.
pub fn gss_evaluation_bound(len: f64, epsilon: f64) -> usize {
    let iterations = libm::ceil(libm::log(epsilon / len) / libm::log(INV_PHI)).max(0.0);
    iterations as usize + 2
}

/// Golden-section search for the minimum of `obj` on `[lo, hi]`.
///
/// Returns the midpoint of the final bracket and its cost. Ties keep the
/// left part, so flat optimal regions resolve toward earlier times.
pub fn gss<F: FnMut(f64) -> f64>(
    obj: &mut ScalarObjective<F>,
    lo: f64,
    hi: f64,
    epsilon: f64,
) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(Error::EmptyInterval { lo, hi });
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("gss epsilon must be positive"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = obj.eval(c);
    let mut fd = obj.eval(d);
    while b - a >= epsilon {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = obj.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = obj.eval(d);
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, obj.eval(mid)))
}
