//! Solomon-style VRPTW files read as node-task instances.
//!
//! Each customer becomes a zero-length required loop at its own vertex whose
//! service cost is flat at the service duration over the time window and
//! rises with slope 1 on either side. Deadheading follows Euclidean distances
//! on the complete digraph; the horizon is the depot's due date.

use carptdsc_core::{Arc, Instance, ServiceCostFunction, Task, TaskId};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Customer {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolomonFile {
    pub name: String,
    pub vehicles: usize,
    pub capacity: f64,
    /// Depot first.
    pub rows: Vec<Customer>,
}

fn numbers(line: &str) -> Option<Vec<f64>> {
    line.split_whitespace().map(|f| f.parse().ok()).collect()
}

impl SolomonFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::new();
        let mut fleet: Option<(usize, f64)> = None;
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let Some(fields) = numbers(line) else {
                if name.is_empty() && rows.is_empty() && fleet.is_none() {
                    name = line.to_string();
                }
                continue;
            };
            match (fields.len(), fleet) {
                (2, None) => fleet = Some((fields[0] as usize, fields[1])),
                (7, Some(_)) => {
                    if !fields.iter().all(|v| v.is_finite()) {
                        return Err(Error::Malformed {
                            line: idx + 1,
                            reason: "non-finite customer field".into(),
                        });
                    }
                    rows.push(Customer {
                        id: fields[0] as u32,
                        x: fields[1],
                        y: fields[2],
                        demand: fields[3],
                        ready: fields[4],
                        due: fields[5],
                        service: fields[6],
                    })
                }
                _ => {
                    return Err(Error::Malformed {
                        line: idx + 1,
                        reason: format!("unexpected row with {} numeric fields", fields.len()),
                    })
                }
            }
        }
        let (vehicles, capacity) = fleet.ok_or(Error::MissingField("vehicle number and capacity"))?;
        if rows.is_empty() {
            return Err(Error::MissingDepot);
        }
        Ok(Self {
            name,
            vehicles,
            capacity,
            rows,
        })
    }

    /// Instance over the depot and the first `customers` customers (all when
    /// `None`).
    pub fn to_instance(&self, customers: Option<usize>) -> Result<Instance> {
        let n = customers.map_or(self.rows.len(), |c| (c + 1).min(self.rows.len()));
        let rows = &self.rows[..n];
        let mut arcs = Vec::with_capacity(n * n.saturating_sub(1));
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                if i != j {
                    let d = (a.x - b.x).hypot(a.y - b.y);
                    arcs.push(Arc::uniform(arcs.len() as u32 + n as u32, i, j, d));
                }
            }
        }
        let tasks = rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(v, c)| {
                Ok(Task {
                    id: TaskId(v as u32),
                    arc: Arc::uniform(v as u32, v, v, 0.0),
                    demand: c.demand,
                    inverse: None,
                    cost_fn: ServiceCostFunction::new(c.service, c.ready, c.due, 1.0)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let instance = Instance::build(
            n,
            arcs,
            tasks,
            0,
            self.capacity,
            self.vehicles,
            rows[0].due,
        )?;
        Ok(instance
            .with_name(self.name.clone())
            .with_vertex_labels(rows.iter().map(|c| c.id).collect()))
    }
}

/// Parses a Solomon file, keeping at most `customers` customers.
pub fn parse_solomon(text: &str, customers: Option<usize>) -> Result<Instance> {
    SolomonFile::parse(text)?.to_instance(customers)
}
