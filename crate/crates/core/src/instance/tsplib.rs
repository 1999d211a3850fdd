use super::{InstanceError, Metric, NodeSet};

/// Parses a TSPLIB document with `EDGE_WEIGHT_TYPE` `EUC_2D` or `GEO`.
///
/// `EUC_2D` maps to the unrounded Euclidean metric; use
/// [`NodeSet::with_metric`] to select TSPLIB's rounded convention.
pub fn parse_tsplib(text: &str) -> Result<NodeSet, InstanceError> {
    let mut name = String::new();
    let mut dimension = None;
    let mut metric = None;
    let mut coords: Vec<(usize, f64, f64)> = Vec::new();
    let mut in_coords = false;
    let mut saw_section = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            if let Some(c) = parse_coord_line(line, line_no)? {
                coords.push(c);
                continue;
            }
            in_coords = false;
        }
        if line.starts_with("NODE_COORD_SECTION") {
            in_coords = true;
            saw_section = true;
            continue;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                let mut it = line.splitn(2, char::is_whitespace);
                (it.next().unwrap_or(""), it.next().unwrap_or("").trim())
            }
        };
        match key {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                dimension = Some(value.parse::<usize>().map_err(|_| InstanceError::Parse {
                    line: line_no,
                    msg: format!("bad DIMENSION `{value}`"),
                })?)
            }
            "EDGE_WEIGHT_TYPE" => {
                metric = Some(match value {
                    "EUC_2D" => Metric::EuclidExact,
                    "GEO" => Metric::Geo,
                    other => return Err(InstanceError::UnsupportedWeightType(other.to_string())),
                })
            }
            "DISPLAY_DATA_SECTION" | "EDGE_WEIGHT_SECTION" | "TOUR_SECTION" => {
                return Err(InstanceError::Parse {
                    line: line_no,
                    msg: format!("unsupported section {key}"),
                })
            }
            // COMMENT, TYPE and other headers carry nothing we use.
            _ => {}
        }
    }

    let metric = metric.ok_or(InstanceError::Missing("EDGE_WEIGHT_TYPE"))?;
    let dimension = dimension.ok_or(InstanceError::Missing("DIMENSION"))?;
    if !saw_section {
        return Err(InstanceError::Missing("NODE_COORD_SECTION"));
    }
    if coords.len() != dimension {
        return Err(InstanceError::DimensionMismatch {
            declared: dimension,
            found: coords.len(),
        });
    }
    coords.sort_by_key(|c| c.0);
    for (i, c) in coords.iter().enumerate() {
        if c.0 != i + 1 {
            return Err(InstanceError::Parse {
                line: 0,
                msg: format!("node ids must be 1..{dimension}, found {}", c.0),
            });
        }
    }
    NodeSet::new(name, coords.into_iter().map(|c| (c.1, c.2)).collect(), metric)
}

/// `None` when the line does not start with an integer id (end of section).
fn parse_coord_line(line: &str, line_no: usize) -> Result<Option<(usize, f64, f64)>, InstanceError> {
    let mut fields = line.split_whitespace();
    let Some(id) = fields.next().and_then(|f| f.parse::<usize>().ok()) else {
        return Ok(None);
    };
    let mut num = |what: &str| -> Result<f64, InstanceError> {
        let f = fields.next().ok_or_else(|| InstanceError::Parse {
            line: line_no,
            msg: format!("missing {what} coordinate"),
        })?;
        f.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| InstanceError::Parse {
                line: line_no,
                msg: format!("malformed {what} coordinate `{f}`"),
            })
    };
    let x = num("x")?;
    let y = num("y")?;
    Ok(Some((id, x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRI: &str = "NAME : tri\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 0 4\nEOF\n";

    #[test]
    fn parses_euclidean() {
        let n = parse_tsplib(TRI).unwrap();
        assert_eq!(n.len(), 3);
        assert_eq!(n.name, "tri");
        assert_eq!(n.metric, Metric::EuclidExact);
        assert_eq!(n.coords[1], (3.0, 4.0));
    }

    #[test]
    fn whitespace_and_colon_variants() {
        let text = "NAME: t\nDIMENSION:2\n  EDGE_WEIGHT_TYPE   GEO\nNODE_COORD_SECTION\n  1   38.24  20.42 \n2\t39.57\t26.15\n";
        let n = parse_tsplib(text).unwrap();
        assert_eq!(n.metric, Metric::Geo);
        assert_eq!(n.coords[0], (38.24, 20.42));
    }

    #[test]
    fn rejects_malformed() {
        let no_section = "NAME : x\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\n";
        assert_eq!(parse_tsplib(no_section), Err(InstanceError::Missing("NODE_COORD_SECTION")));

        let att = TRI.replace("EUC_2D", "ATT");
        assert_eq!(parse_tsplib(&att), Err(InstanceError::UnsupportedWeightType("ATT".into())));

        let short = TRI.replace("DIMENSION : 3", "DIMENSION : 4");
        assert!(matches!(parse_tsplib(&short), Err(InstanceError::DimensionMismatch { .. })));

        let bad = TRI.replace("2 3 4", "2 3 x4");
        assert!(matches!(parse_tsplib(&bad), Err(InstanceError::Parse { line: 7, .. })));
    }
}
