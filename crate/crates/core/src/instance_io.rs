//! Benchmark instance files and the best-known-solution registry.
//!
//! Instance files are plain ASCII: a header line `m n T Q L` (fleet size,
//! request count, max route duration, capacity, max ride time) followed by one
//! line per vertex `id x y d q e l`. Vertex 0 is the depot; ids `1..=2n`
//! follow. A trailing duplicate depot line with id `2n+1` is tolerated and
//! ignored, matching the common distribution of these files.

use crate::model::{Instance, Vertex};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `m n T Q L`")]
    MalformedHeader { line: usize },
    #[error("line {line}: non-numeric field `{field}`")]
    NonNumeric { line: usize, field: String },
    #[error("line {line}: vertex line must have 7 fields `id x y d q e l`")]
    MalformedVertex { line: usize },
    #[error("line {line}: duplicate vertex id {id}")]
    DuplicateId { line: usize, id: usize },
    #[error("line {line}: vertex id {id} out of range for {n} requests")]
    IdOutOfRange { line: usize, id: usize, n: usize },
    #[error("expected {expected} vertices (depot + 2n), found {found}")]
    WrongVertexCount { expected: usize, found: usize },
    #[error("header values must be positive (m, n, T, Q, L)")]
    NonPositiveHeader,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::NonNumeric {
        line,
        field: tok.to_string(),
    })
}

/// Parses an instance from its text form. `name` becomes `Instance::name`
/// (callers usually pass the file stem).
pub fn parse_instance(name: &str, text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MalformedHeader { line: 1 })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 {
        return Err(ParseError::MalformedHeader { line: header_line });
    }
    let m: usize = parse_num(toks[0], header_line)?;
    let n: usize = parse_num(toks[1], header_line)?;
    let max_route_duration: f64 = parse_num(toks[2], header_line)?;
    let capacity: i32 = parse_num(toks[3], header_line)?;
    let max_ride_time: f64 = parse_num(toks[4], header_line)?;
    if m == 0 || capacity <= 0 || max_route_duration <= 0.0 || max_ride_time <= 0.0 {
        return Err(ParseError::NonPositiveHeader);
    }

    let expected = 2 * n + 1;
    let mut vertices: Vec<Option<Vertex>> = vec![None; expected];
    let mut found = 0usize;
    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 7 {
            return Err(ParseError::MalformedVertex { line: line_no });
        }
        let id: usize = parse_num(toks[0], line_no)?;
        // Some distributions append a duplicate depot as vertex 2n+1.
        if id == expected && found == expected {
            continue;
        }
        if id >= expected {
            return Err(ParseError::IdOutOfRange {
                line: line_no,
                id,
                n,
            });
        }
        if vertices[id].is_some() {
            return Err(ParseError::DuplicateId { line: line_no, id });
        }
        vertices[id] = Some(Vertex {
            id,
            x: parse_num(toks[1], line_no)?,
            y: parse_num(toks[2], line_no)?,
            service_duration: parse_num(toks[3], line_no)?,
            load_change: parse_num(toks[4], line_no)?,
            window_earliest: parse_num(toks[5], line_no)?,
            window_latest: parse_num(toks[6], line_no)?,
        });
        found += 1;
    }
    if found != expected {
        return Err(ParseError::WrongVertexCount { expected, found });
    }
    let vertices: Vec<Vertex> = vertices.into_iter().map(Option::unwrap).collect();
    Ok(Instance::new(
        name,
        m,
        capacity,
        max_route_duration,
        max_ride_time,
        vertices,
    ))
}

/// Renders an instance back to the file format. `parse_instance` on the
/// output reproduces the instance field-for-field (floats are written in
/// shortest round-trip form).
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {} {}",
        instance.n_vehicles,
        instance.n_requests,
        instance.max_route_duration,
        instance.vehicle_capacity,
        instance.max_ride_time
    );
    for v in &instance.vertices {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {}",
            v.id, v.x, v.y, v.service_duration, v.load_change, v.window_earliest, v.window_latest
        );
    }
    out
}

#[derive(Debug, Error, PartialEq)]
pub enum GapError {
    #[error("best known solution cost must be positive, got {0}")]
    NonPositiveBks(f64),
}

/// Relative gap to the best known solution, percent, signed.
pub fn gap_percent(cost: f64, bks: f64) -> Result<f64, GapError> {
    if bks <= 0.0 {
        return Err(GapError::NonPositiveBks(bks));
    }
    Ok((cost - bks) / bks * 100.0)
}

/// Best known solution costs for the published benchmark instances.
const BUILTIN_BKS: &[(&str, f64)] = &[
    ("R1a", 190.02),
    ("R2a", 301.34),
    ("R3a", 532.00),
    ("R4a", 570.25),
    ("R5a", 626.93),
    ("R6a", 785.26),
    ("R7a", 291.71),
    ("R8a", 487.84),
    ("R9a", 658.31),
    ("R10a", 851.82),
    ("R1b", 164.46),
    ("R2b", 295.66),
    ("R3b", 484.83),
    ("R4b", 529.33),
    ("R5b", 577.29),
    ("R6b", 730.69),
    ("R7b", 248.21),
    ("R8b", 458.73),
    ("R9b", 593.49),
    ("R10b", 785.68),
];

#[derive(Debug, Error)]
pub enum BksError {
    #[error("line {line}: expected `name cost`")]
    Malformed { line: usize },
    #[error("line {line}: cost must be positive, got {cost}")]
    NonPositiveCost { line: usize, cost: f64 },
    #[error("line {line}: duplicate instance name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Instance name -> best known cost.
#[derive(Debug, Clone, Default)]
pub struct BksRegistry {
    map: BTreeMap<String, f64>,
}

impl BksRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry preloaded with the published benchmark costs.
    pub fn builtin() -> Self {
        let map = BUILTIN_BKS
            .iter()
            .map(|&(name, cost)| (name.to_string(), cost))
            .collect();
        BksRegistry { map }
    }

    /// Parses a `name cost` text file (one entry per line, `#` comments).
    pub fn from_text(text: &str) -> Result<Self, BksError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut toks = content.split_whitespace();
            let (name, cost_tok) = match (toks.next(), toks.next(), toks.next()) {
                (Some(n), Some(c), None) => (n, c),
                _ => return Err(BksError::Malformed { line }),
            };
            let cost: f64 = cost_tok
                .parse()
                .map_err(|_| BksError::Malformed { line })?;
            if cost <= 0.0 {
                return Err(BksError::NonPositiveCost { line, cost });
            }
            if map.insert(name.to_string(), cost).is_some() {
                return Err(BksError::DuplicateName {
                    line,
                    name: name.to_string(),
                });
            }
        }
        Ok(BksRegistry { map })
    }

    pub fn from_file(path: &Path) -> Result<Self, BksError> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    /// Entries of `other` take precedence over `self`.
    pub fn merged_with(mut self, other: &BksRegistry) -> Self {
        for (k, v) in &other.map {
            self.map.insert(k.clone(), *v);
        }
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.map.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
