//! Native instance file.
//!
//! ```text
//! LDTSP 1
//! NAME <str>
//! DIMENSION <N>
//! METRIC <EUC_2D_EXACT|EUC_2D_ROUND|GEO>
//! DEPOT <id>
//! ALPHA <float>
//! UNLADEN <float>
//! GAMMA <float>            (optional, present when UNLADEN was derived from it)
//! NODE_COORD_SECTION
//! <id> <x> <y>             (N lines)
//! MASS_SECTION
//! <id> <m>                 (one line per non-depot id)
//! EOF
//! ```
//!
//! Floats are written with 17 significant digits so that reading a written
//! file reproduces every field exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Instance, InstanceError, Metric, NodeSet};
use crate::fmt::g17;

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let nodes = inst.nodes();
    writeln!(out, "LDTSP 1").unwrap();
    writeln!(out, "NAME {}", nodes.name).unwrap();
    writeln!(out, "DIMENSION {}", nodes.len()).unwrap();
    writeln!(out, "METRIC {}", nodes.metric.keyword()).unwrap();
    writeln!(out, "DEPOT {}", inst.depot() + 1).unwrap();
    writeln!(out, "ALPHA {}", g17(inst.alpha())).unwrap();
    writeln!(out, "UNLADEN {}", g17(inst.unladen())).unwrap();
    if let Some(g) = inst.gamma() {
        writeln!(out, "GAMMA {}", g17(g)).unwrap();
    }
    writeln!(out, "NODE_COORD_SECTION").unwrap();
    for (i, (x, y)) in nodes.coords.iter().enumerate() {
        writeln!(out, "{} {} {}", i + 1, g17(*x), g17(*y)).unwrap();
    }
    writeln!(out, "MASS_SECTION").unwrap();
    for t in inst.targets() {
        writeln!(out, "{} {}", t + 1, g17(inst.mass(t))).unwrap();
    }
    writeln!(out, "EOF").unwrap();
    out
}

#[derive(PartialEq)]
enum Section {
    Header,
    Coords,
    Masses,
}

pub fn read_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, "LDTSP 1")) => {}
        Some((_, l)) => {
            let v = l.strip_prefix("LDTSP").map(str::trim).unwrap_or(l);
            return Err(InstanceError::Version(v.to_string()));
        }
        None => return Err(InstanceError::Missing("LDTSP header")),
    }

    let mut name = None;
    let mut dimension = None;
    let mut metric = None;
    let mut depot = None;
    let mut alpha = None;
    let mut unladen = None;
    let mut gamma = None;
    let mut coords: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    let mut masses: BTreeMap<usize, f64> = BTreeMap::new();
    let mut section = Section::Header;
    let mut saw = (false, false, false);

    for (line_no, line) in lines {
        let err = |msg: String| InstanceError::Parse { line: line_no, msg };
        match line {
            "NODE_COORD_SECTION" => {
                section = Section::Coords;
                saw.0 = true;
                continue;
            }
            "MASS_SECTION" => {
                section = Section::Masses;
                saw.1 = true;
                continue;
            }
            "EOF" => {
                saw.2 = true;
                break;
            }
            _ => {}
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Header => {
                let (key, value) = match fields.as_slice() {
                    [k, rest @ ..] if !rest.is_empty() => (*k, line[k.len()..].trim()),
                    _ => return Err(err(format!("malformed header line `{line}`"))),
                };
                match key {
                    "NAME" => name = Some(value.to_string()),
                    "DIMENSION" => {
                        dimension = Some(value.parse::<usize>().map_err(|_| err(format!("bad DIMENSION `{value}`")))?)
                    }
                    "METRIC" => {
                        metric = Some(Metric::from_keyword(value).ok_or_else(|| err(format!("unknown METRIC `{value}`")))?)
                    }
                    "DEPOT" => depot = Some(value.parse::<usize>().map_err(|_| err(format!("bad DEPOT `{value}`")))?),
                    "ALPHA" => alpha = Some(parse_float(value).ok_or_else(|| err(format!("bad ALPHA `{value}`")))?),
                    "UNLADEN" => {
                        unladen = Some(parse_float(value).ok_or_else(|| err(format!("bad UNLADEN `{value}`")))?)
                    }
                    "GAMMA" => gamma = Some(parse_float(value).ok_or_else(|| err(format!("bad GAMMA `{value}`")))?),
                    other => return Err(err(format!("unknown header `{other}`"))),
                }
            }
            Section::Coords => {
                let [id, x, y] = fields.as_slice() else {
                    return Err(err(format!("expected `<id> <x> <y>`, got `{line}`")));
                };
                let id: usize = id.parse().map_err(|_| err(format!("bad node id `{id}`")))?;
                let x = parse_float(x).ok_or_else(|| err(format!("bad coordinate `{x}`")))?;
                let y = parse_float(y).ok_or_else(|| err(format!("bad coordinate `{y}`")))?;
                if coords.insert(id, (x, y)).is_some() {
                    return Err(err(format!("duplicate coordinates for node {id}")));
                }
            }
            Section::Masses => {
                let [id, m] = fields.as_slice() else {
                    return Err(err(format!("expected `<id> <mass>`, got `{line}`")));
                };
                let id: usize = id.parse().map_err(|_| err(format!("bad node id `{id}`")))?;
                let m = parse_float(m).ok_or_else(|| err(format!("bad mass `{m}`")))?;
                if masses.insert(id, m).is_some() {
                    return Err(err(format!("duplicate MASS entry for node {id}")));
                }
            }
        }
    }

    if !saw.0 {
        return Err(InstanceError::Missing("NODE_COORD_SECTION"));
    }
    if !saw.1 {
        return Err(InstanceError::Missing("MASS_SECTION"));
    }
    if !saw.2 {
        return Err(InstanceError::Missing("EOF"));
    }
    let dimension = dimension.ok_or(InstanceError::Missing("DIMENSION"))?;
    let depot = depot.ok_or(InstanceError::Missing("DEPOT"))?;
    let alpha = alpha.ok_or(InstanceError::Missing("ALPHA"))?;
    let unladen = unladen.ok_or(InstanceError::Missing("UNLADEN"))?;
    let metric = metric.ok_or(InstanceError::Missing("METRIC"))?;

    if coords.len() != dimension || coords.keys().copied().ne(1..=dimension) {
        return Err(InstanceError::DimensionMismatch {
            declared: dimension,
            found: coords.len(),
        });
    }
    if depot == 0 || depot > dimension {
        return Err(InstanceError::DepotOutOfRange(depot));
    }
    if masses.contains_key(&depot) {
        return Err(InstanceError::Parse {
            line: 0,
            msg: format!("depot {depot} must not carry a mass"),
        });
    }
    let mut target_masses = Vec::with_capacity(dimension - 1);
    for id in (1..=dimension).filter(|&id| id != depot) {
        let m = *masses.get(&id).ok_or(InstanceError::MassCount {
            expected: dimension - 1,
            found: masses.len(),
        })?;
        target_masses.push(m);
    }
    if masses.len() != dimension - 1 {
        return Err(InstanceError::MassCount {
            expected: dimension - 1,
            found: masses.len(),
        });
    }
    let nodes = NodeSet::new(name.unwrap_or_default(), coords.into_values().collect(), metric)?;
    Instance::new(nodes, depot - 1, &target_masses, unladen, alpha, gamma)
}

/// Decimal-point floats only; `inf`/`nan` are rejected.
fn parse_float(s: &str) -> Option<f64> {
    if s.bytes().any(|b| b.is_ascii_alphabetic() && b != b'e' && b != b'E') {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}
