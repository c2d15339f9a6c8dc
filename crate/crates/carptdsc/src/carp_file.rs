//! Static arc-routing benchmark files in the keyworded DAT layout.
//!
//! ```text
//! NOMBRE : gdb1
//! VERTICES : 12
//! ARISTAS_REQ : 22
//! ARISTAS_NOREQ : 0
//! VEHICULOS : 5
//! CAPACIDAD : 5
//! LISTA_ARISTAS_REQ :
//! ( 1, 2)   coste 13   demanda 1
//! LISTA_ARISTAS_NOREQ :
//! ( 3, 4)   coste 7
//! DEPOSITO :   1
//! ```
//!
//! English keywords (`NAME`, `REQUIRED_EDGES`, `cost`, `demand`, ...) are
//! accepted too. Other header lines are kept verbatim but otherwise ignored.
//! Vertex labels are 1-based in the file; required edge `e` (1-based, file
//! order) becomes tasks `2e - 1` (as written) and `2e` (reversed).

use std::fmt::Write as _;

use carptdsc_core::{Arc, Instance, ServiceCostFunction, Task, TaskId};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub from: u32,
    pub to: u32,
    pub cost: f64,
    pub demand: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticInstanceFile {
    pub name: String,
    pub vertices: usize,
    pub vehicles: usize,
    pub capacity: f64,
    pub required: Vec<EdgeRecord>,
    pub non_required: Vec<EdgeRecord>,
    pub depot: u32,
    /// Unrecognised `key : value` header lines, in file order.
    pub extra: Vec<(String, String)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Required,
    NonRequired,
}

fn number(line: usize, field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::NotNumeric {
            line,
            field: field.trim().to_string(),
        })
}

fn count(line: usize, field: &str) -> Result<usize> {
    let v = number(line, field)?;
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::NotNumeric {
            line,
            field: field.trim().to_string(),
        });
    }
    Ok(v as usize)
}

/// `( i, j) coste c [demanda d]`
fn edge(line: usize, text: &str, required: bool) -> Result<EdgeRecord> {
    let malformed = |reason: &str| Error::Malformed {
        line,
        reason: reason.to_string(),
    };
    let open = text.find('(').ok_or_else(|| malformed("expected `(i, j)`"))?;
    let close = text.find(')').ok_or_else(|| malformed("expected `(i, j)`"))?;
    let (i, j) = text[open + 1..close]
        .split_once(',')
        .ok_or_else(|| malformed("expected `(i, j)`"))?;
    let from = count(line, i)? as u32;
    let to = count(line, j)? as u32;
    let rest: Vec<&str> = text[close + 1..].split_whitespace().collect();
    let mut cost = None;
    let mut demand = None;
    let mut it = rest.iter();
    while let Some(key) = it.next() {
        let value = it.next().ok_or_else(|| malformed("keyword without value"))?;
        match key.to_ascii_lowercase().as_str() {
            "coste" | "cost" => cost = Some(number(line, value)?),
            "demanda" | "demand" => demand = Some(number(line, value)?),
            other => return Err(malformed(&format!("unknown edge keyword `{other}`"))),
        }
    }
    let cost = cost.ok_or_else(|| malformed("edge without cost"))?;
    let demand = match (demand, required) {
        (Some(d), _) => d,
        (None, false) => 0.0,
        (None, true) => return Err(malformed("required edge without demand")),
    };
    Ok(EdgeRecord {
        from,
        to,
        cost,
        demand,
    })
}

impl StaticInstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut vertices = None;
        let mut n_req = None;
        let mut n_noreq = None;
        let mut vehicles = None;
        let mut capacity = None;
        let mut depot = None;
        let mut extra = Vec::new();
        let mut required = Vec::new();
        let mut non_required = Vec::new();
        let mut section = Section::Header;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.eq_ignore_ascii_case("END") {
                continue;
            }
            if line.starts_with('(') {
                match section {
                    Section::Required => required.push(edge(line_no, line, true)?),
                    Section::NonRequired => non_required.push(edge(line_no, line, false)?),
                    Section::Header => {
                        return Err(Error::Malformed {
                            line: line_no,
                            reason: "edge record before an edge list".into(),
                        })
                    }
                }
                continue;
            }
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => {
                    return Err(Error::Malformed {
                        line: line_no,
                        reason: format!("expected `key : value`, got `{line}`"),
                    })
                }
            };
            match key.to_ascii_uppercase().as_str() {
                "NOMBRE" | "NAME" => name = Some(value.to_string()),
                "VERTICES" => vertices = Some(count(line_no, value)?),
                "ARISTAS_REQ" | "REQUIRED_EDGES" => n_req = Some(count(line_no, value)?),
                "ARISTAS_NOREQ" | "NON_REQUIRED_EDGES" => n_noreq = Some(count(line_no, value)?),
                "VEHICULOS" | "VEHICLES" => vehicles = Some(count(line_no, value)?),
                "CAPACIDAD" | "CAPACITY" => capacity = Some(number(line_no, value)?),
                "LISTA_ARISTAS_REQ" | "LIST_REQUIRED_EDGES" => section = Section::Required,
                "LISTA_ARISTAS_NOREQ" | "LIST_NON_REQUIRED_EDGES" => section = Section::NonRequired,
                "DEPOSITO" | "DEPOT" => {
                    section = Section::Header;
                    if !value.is_empty() {
                        depot = Some(count(line_no, value)? as u32);
                    }
                }
                _ => extra.push((key.to_string(), value.to_string())),
            }
        }

        let n_req = n_req.ok_or(Error::MissingField("required edge count"))?;
        if n_req != required.len() {
            return Err(Error::CountMismatch {
                what: "required edges",
                declared: n_req,
                found: required.len(),
            });
        }
        let n_noreq = n_noreq.unwrap_or(0);
        if n_noreq != non_required.len() {
            return Err(Error::CountMismatch {
                what: "non-required edges",
                declared: n_noreq,
                found: non_required.len(),
            });
        }
        Ok(Self {
            name: name.unwrap_or_default(),
            vertices: vertices.ok_or(Error::MissingField("vertex count"))?,
            vehicles: vehicles.ok_or(Error::MissingField("vehicle count"))?,
            capacity: capacity.ok_or(Error::MissingField("capacity"))?,
            required,
            non_required,
            depot: depot.ok_or(Error::MissingDepot)?,
            extra,
        })
    }

    /// Writes the Spanish-keyword layout.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "NOMBRE : {}", self.name);
        for (k, v) in &self.extra {
            let _ = writeln!(s, "{k} : {v}");
        }
        let _ = writeln!(s, "VERTICES : {}", self.vertices);
        let _ = writeln!(s, "ARISTAS_REQ : {}", self.required.len());
        let _ = writeln!(s, "ARISTAS_NOREQ : {}", self.non_required.len());
        let _ = writeln!(s, "VEHICULOS : {}", self.vehicles);
        let _ = writeln!(s, "CAPACIDAD : {}", self.capacity);
        let _ = writeln!(s, "LISTA_ARISTAS_REQ :");
        for e in &self.required {
            let _ = writeln!(s, "( {}, {})   coste {}   demanda {}", e.from, e.to, e.cost, e.demand);
        }
        if !self.non_required.is_empty() {
            let _ = writeln!(s, "LISTA_ARISTAS_NOREQ :");
            for e in &self.non_required {
                let _ = writeln!(s, "( {}, {})   coste {}", e.from, e.to, e.cost);
            }
        }
        let _ = writeln!(s, "DEPOSITO : {}", self.depot);
        s
    }

    /// Static instance: constant service costs, unbounded horizon.
    pub fn to_instance(&self) -> Result<Instance> {
        let vertex = |label: u32| -> Result<usize> {
            if label == 0 || label as usize > self.vertices {
                Err(carptdsc_core::Error::DanglingVertex {
                    vertex: label as usize,
                    count: self.vertices,
                }
                .into())
            } else {
                Ok(label as usize - 1)
            }
        };
        let mut tasks = Vec::with_capacity(2 * self.required.len());
        for (e, rec) in self.required.iter().enumerate() {
            let (u, v) = (vertex(rec.from)?, vertex(rec.to)?);
            let fwd = TaskId(2 * e as u32 + 1);
            let bwd = TaskId(2 * e as u32 + 2);
            let cost_fn = ServiceCostFunction::constant(rec.cost)?;
            for (id, inv, tail, head) in [(fwd, bwd, u, v), (bwd, fwd, v, u)] {
                tasks.push(Task {
                    id,
                    arc: Arc::uniform(id.0, tail, head, rec.cost),
                    demand: rec.demand,
                    inverse: Some(inv),
                    cost_fn,
                });
            }
        }
        let base = 2 * self.required.len() as u32;
        let mut arcs = Vec::with_capacity(2 * self.non_required.len());
        for (e, rec) in self.non_required.iter().enumerate() {
            let (u, v) = (vertex(rec.from)?, vertex(rec.to)?);
            let id = base + 2 * e as u32 + 1;
            arcs.push(Arc::uniform(id, u, v, rec.cost));
            arcs.push(Arc::uniform(id + 1, v, u, rec.cost));
        }
        let instance = Instance::build(
            self.vertices,
            arcs,
            tasks,
            vertex(self.depot)?,
            self.capacity,
            self.vehicles,
            f64::INFINITY,
        )?;
        Ok(instance
            .with_name(self.name.clone())
            .with_vertex_labels((1..=self.vertices as u32).collect()))
    }
}

pub fn parse_carp(text: &str) -> Result<(StaticInstanceFile, Instance)> {
    let file = StaticInstanceFile::parse(text)?;
    let instance = file.to_instance()?;
    Ok((file, instance))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "NOMBRE : tiny
VERTICES : 3
ARISTAS_REQ : 2
ARISTAS_NOREQ : 1
VEHICULOS : 2
CAPACIDAD : 5
LISTA_ARISTAS_REQ :
( 1, 2)   coste 4   demanda 2
( 2, 3)   coste 3   demanda 1
LISTA_ARISTAS_NOREQ :
( 3, 1)   coste 6
DEPOSITO :   1
";

    #[test]
    fn parses_into_inverse_pairs() {
        let (file, inst) = parse_carp(TINY).unwrap();
        assert_eq!(file.required.len(), 2);
        assert_eq!(inst.task_count(), 4);
        assert_eq!(inst.required_count(), 2);
        assert_eq!(inst.inverse_of(TaskId(1)).unwrap(), Some(TaskId(2)));
        let t3 = inst.task(TaskId(3)).unwrap();
        assert_eq!((t3.arc.tail, t3.arc.head), (1, 2));
        assert_eq!(t3.cost_fn, ServiceCostFunction::constant(3.0).unwrap());
        assert_eq!(inst.depot(), 0);
        assert!(inst.horizon().is_infinite());
    }

    #[test]
    fn english_keywords() {
        let text = "NAME : e\nVERTICES : 2\nREQUIRED_EDGES : 1\nNON_REQUIRED_EDGES : 0\n\
                    VEHICLES : 1\nCAPACITY : 3\nLIST_REQUIRED_EDGES :\n(1,2) cost 5 demand 1\nDEPOT : 2\n";
        let (file, inst) = parse_carp(text).unwrap();
        assert_eq!(file.depot, 2);
        assert_eq!(inst.task_count(), 2);
    }

    #[test]
    fn count_mismatch() {
        let bad = TINY.replace("ARISTAS_REQ : 2", "ARISTAS_REQ : 5");
        assert!(matches!(
            parse_carp(&bad),
            Err(Error::CountMismatch { declared: 5, found: 2, .. })
        ));
    }

    #[test]
    fn non_numeric_and_missing_depot() {
        let bad = TINY.replace("coste 4", "coste four");
        assert!(matches!(parse_carp(&bad), Err(Error::NotNumeric { line: 8, .. })));
        let bad = TINY.replace("DEPOSITO :   1\n", "");
        assert!(matches!(parse_carp(&bad), Err(Error::MissingDepot)));
    }

    #[test]
    fn round_trip() {
        let (file, inst) = parse_carp(TINY).unwrap();
        let (again, inst2) = parse_carp(&file.serialize()).unwrap();
        assert_eq!(file, again);
        assert_eq!(inst, inst2);
    }
}
