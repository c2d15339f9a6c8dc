//! Time-dependent annotation sidecar and its seeded generator.
//!
//! ```toml
//! format = "carptdsc-td/1"
//! family = "3lp"
//! k = 2.0
//! horizon = 640.0
//! seed = 7
//!
//! [[task]]
//! id = 1
//! c_min = 13.0
//! bt = 210.5
//! et = 236.0
//! ```

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use carptdsc_core::routing::{path_scanning, ScanRule};
use carptdsc_core::{Instance, ServiceCostFunction, ShortestPaths, TaskId};

use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "carptdsc-td/1";

/// Slope magnitudes the three-segment generator draws from by default.
pub const DEFAULT_SLOPES: [f64; 5] = [0.3, 0.5, 1.0, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TdFamily {
    #[serde(rename = "2lp")]
    TwoSegment,
    #[serde(rename = "3lp")]
    ThreeSegment,
}

impl std::str::FromStr for TdFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "2lp" => Ok(TdFamily::TwoSegment),
            "3lp" => Ok(TdFamily::ThreeSegment),
            other => Err(format!("unknown family `{other}` (expected 2lp or 3lp)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: u32,
    pub c_min: f64,
    pub bt: f64,
    pub et: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdAnnotation {
    pub format: String,
    pub family: TdFamily,
    pub k: f64,
    pub horizon: f64,
    pub seed: u64,
    #[serde(rename = "task")]
    pub tasks: Vec<TaskRecord>,
}

impl TdAnnotation {
    pub fn parse(text: &str) -> Result<Self> {
        let a: TdAnnotation = toml::from_str(text)?;
        if a.format != FORMAT_TAG {
            return Err(Error::Annotation(format!(
                "unsupported format tag `{}`",
                a.format
            )));
        }
        Ok(a)
    }

    pub fn serialize(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// The instance with these cost functions and horizon installed. Every
    /// task of the instance must be listed exactly once.
    pub fn apply(&self, instance: &Instance) -> Result<Instance> {
        let mut by_id = BTreeMap::new();
        for rec in &self.tasks {
            if by_id.insert(rec.id, rec).is_some() {
                return Err(Error::Annotation(format!("task {} listed twice", rec.id)));
            }
            instance.task(TaskId(rec.id))?;
        }
        if by_id.len() != instance.task_count() {
            return Err(Error::Annotation(format!(
                "annotation covers {} tasks, instance has {}",
                by_id.len(),
                instance.task_count()
            )));
        }
        let mut funcs = BTreeMap::new();
        for (&id, rec) in &by_id {
            funcs.insert(id, ServiceCostFunction::new(rec.c_min, rec.bt, rec.et, self.k)?);
        }
        Ok(instance.with_time_dependence(self.horizon, |t| funcs[&t.id.0])?)
    }
}

/// Cost at departure 0 of one deterministic path-scanning plan.
fn scan_cost(instance: &Instance) -> f64 {
    let sp = ShortestPaths::compute(instance);
    let ids: Vec<TaskId> = instance.tasks().map(|t| t.id).collect();
    path_scanning(instance, &sp, &ids, ScanRule::FarFromDepot)
        .iter()
        .map(|r| carptdsc_core::eval::summarize_route(r, 0.0, instance, &sp).total)
        .sum()
}

/// Seeded time-dependent layer for a static instance.
///
/// The static service cost becomes `c_min`. Two-segment layers rise with
/// slope 1 from time 0. Three-segment layers share one slope drawn from
/// `slopes`; each requirement (a task and its inverse alike) gets a flat
/// window centred uniformly in `[0.1 T, 0.9 T]` with width uniform in
/// `[c, 3c]`. The horizon `T` is twice the cost of a path-scanning plan
/// departing at 0, priced with the new functions for two-segment layers and
/// with the static ones otherwise.
pub fn generate_td(
    instance: &Instance,
    family: TdFamily,
    slopes: &[f64],
    seed: u64,
) -> Result<(Instance, TdAnnotation)> {
    if slopes.is_empty() {
        return Err(Error::Annotation("empty slope set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let static_cost = |id: TaskId| instance.task(id).map(|t| t.cost_fn.c_min);
    let (k, horizon, mut records) = match family {
        TdFamily::TwoSegment => {
            let records = instance
                .tasks()
                .map(|t| TaskRecord {
                    id: t.id.0,
                    c_min: t.cost_fn.c_min,
                    bt: 0.0,
                    et: 0.0,
                })
                .collect::<Vec<_>>();
            let draft = instance.with_time_dependence(f64::INFINITY, |t| {
                ServiceCostFunction::two_segment(t.cost_fn.c_min, 1.0).expect("valid static cost")
            })?;
            (1.0, 2.0 * scan_cost(&draft), records)
        }
        TdFamily::ThreeSegment => {
            let k = slopes[rng.random_range(0..slopes.len())];
            let horizon = 2.0 * scan_cost(instance);
            let mut records = Vec::with_capacity(instance.task_count());
            for t in instance.tasks() {
                if instance.requirement_of(t.id) != t.id {
                    continue;
                }
                let st = static_cost(t.id)?;
                let mid = horizon * (0.1 + 0.8 * rng.random::<f64>());
                let width = st * (1.0 + 2.0 * rng.random::<f64>());
                let bt = (mid - 0.5 * width).max(0.0);
                let et = mid + 0.5 * width;
                for id in std::iter::once(t.id).chain(t.inverse) {
                    records.push(TaskRecord {
                        id: id.0,
                        c_min: st,
                        bt,
                        et,
                    });
                }
            }
            (k, horizon, records)
        }
    };
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Annotation(format!(
            "derived horizon {horizon} is not a positive finite time"
        )));
    }
    records.sort_by_key(|r| r.id);
    let annotation = TdAnnotation {
        format: FORMAT_TAG.to_string(),
        family,
        k,
        horizon,
        seed,
        tasks: records,
    };
    let annotated = annotation.apply(instance)?;
    Ok((annotated, annotation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carp_file::parse_carp;
    use carptdsc_core::{classify, Family};

    const TINY: &str = "NOMBRE : tiny
VERTICES : 4
ARISTAS_REQ : 3
ARISTAS_NOREQ : 0
VEHICULOS : 2
CAPACIDAD : 5
LISTA_ARISTAS_REQ :
( 1, 2)   coste 4   demanda 2
( 2, 3)   coste 3   demanda 1
( 3, 4)   coste 5   demanda 3
DEPOSITO :   1
";

    fn tiny() -> Instance {
        parse_carp(TINY).unwrap().1
    }

    #[test]
    fn two_segment_layer() {
        let (inst, ann) = generate_td(&tiny(), TdFamily::TwoSegment, &DEFAULT_SLOPES, 1).unwrap();
        assert_eq!(ann.tasks.len(), 6);
        assert!(ann.tasks.iter().all(|r| r.bt == 0.0 && r.et == 0.0));
        assert_eq!(ann.k, 1.0);
        assert_eq!(classify(&inst).unwrap().family, Family::TwoSegment);
    }

    #[test]
    fn three_segment_pairs_share_windows() {
        let (inst, ann) = generate_td(&tiny(), TdFamily::ThreeSegment, &[2.0], 3).unwrap();
        assert_eq!(ann.k, 2.0);
        for pair in ann.tasks.chunks(2) {
            assert_eq!((pair[0].bt, pair[0].et), (pair[1].bt, pair[1].et));
        }
        assert_eq!(classify(&inst).unwrap().k, 2.0);
    }

    #[test]
    fn empty_slopes_rejected() {
        assert!(generate_td(&tiny(), TdFamily::ThreeSegment, &[], 0).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let (_, ann) = generate_td(&tiny(), TdFamily::ThreeSegment, &DEFAULT_SLOPES, 9).unwrap();
        let text = ann.serialize().unwrap();
        assert!(text.starts_with("format = \"carptdsc-td/1\""));
        assert_eq!(TdAnnotation::parse(&text).unwrap(), ann);
    }

    #[test]
    fn apply_requires_full_coverage() {
        let (_, mut ann) = generate_td(&tiny(), TdFamily::TwoSegment, &DEFAULT_SLOPES, 0).unwrap();
        ann.tasks.pop();
        assert!(ann.apply(&tiny()).is_err());
    }
}
