use crate::departure::ScalarObjective;
use crate::error::{Error, Result};

/// Exhaustive minimum over `lo, lo + step, ..., hi`; ties go to smaller `t`.
///
/// Used to verify the departure optimizers.
pub fn grid_oracle<F: FnMut(f64) -> f64>(
    obj: &mut ScalarObjective<F>,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<(f64, f64)> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("oracle step must be positive"));
    }
    if !(lo <= hi) || !hi.is_finite() {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let n = libm::floor((hi - lo) / step + 1e-9) as u64;
    let mut best = (lo, obj.eval(lo));
    let mut consider = |t: f64, obj: &mut ScalarObjective<F>| {
        let c = obj.eval(t);
        if c < best.1 {
            best = (t, c);
        }
    };
    for i in 1..=n {
        consider((lo + i as f64 * step).min(hi), obj);
    }
    if lo + n as f64 * step < hi {
        consider(hi, obj);
    }
    Ok(best)
}
