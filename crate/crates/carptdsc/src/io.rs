//! Loading instances from disk in any supported layout.

use std::path::Path;

use carptdsc_core::Instance;

use crate::annotation::{generate_td, TdAnnotation, TdFamily, DEFAULT_SLOPES};
use crate::carp_file::parse_carp;
use crate::error::Result;
use crate::solomon::parse_solomon;

/// How the time-dependent layer of a loaded instance is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    /// Keep the file's own costs.
    None,
    Annotation(TdAnnotation),
    Generate { family: TdFamily, slopes: Vec<f64>, seed: u64 },
}

impl Layer {
    pub fn generate(family: TdFamily, seed: u64) -> Self {
        Layer::Generate {
            family,
            slopes: DEFAULT_SLOPES.to_vec(),
            seed,
        }
    }
}

/// Whether the text looks like a keyworded arc-routing file.
pub fn is_carp_text(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.contains(':'))
}

/// Parses either layout; `customers` truncates Solomon files.
pub fn parse_instance(text: &str, customers: Option<usize>) -> Result<Instance> {
    if is_carp_text(text) {
        Ok(parse_carp(text)?.1)
    } else {
        parse_solomon(text, customers)
    }
}

pub fn apply_layer(instance: &Instance, layer: &Layer) -> Result<Instance> {
    match layer {
        Layer::None => Ok(instance.clone()),
        Layer::Annotation(a) => a.apply(instance),
        Layer::Generate { family, slopes, seed } => Ok(generate_td(instance, *family, slopes, *seed)?.0),
    }
}

pub fn load_instance(path: &Path, customers: Option<usize>, layer: &Layer) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let instance = parse_instance(&text, customers)?;
    let instance = if instance.name().is_empty() {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        instance.with_name(stem)
    } else {
        instance
    };
    apply_layer(&instance, layer)
}
