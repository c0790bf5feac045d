//! Matrix and cycle-file parsing.

use num_bigint::BigInt;
use std::str::FromStr;
use voldist_core::chains::Letter;
use voldist_core::IntMatrix;

#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn err(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

/// Parse a matrix from JSON `{"matrix": [[…]]}` (entries may be numbers or
/// decimal strings) or from whitespace-separated rows of integers.
pub fn parse_matrix(input: &str) -> Result<IntMatrix, InputError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(err("empty matrix input"));
    }
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| err(format!("invalid JSON: {e}")))?;
        let rows = match &value {
            serde_json::Value::Object(map) => map
                .get("matrix")
                .ok_or_else(|| err("JSON object must carry a \"matrix\" field"))?,
            other => other,
        };
        let rows = rows
            .as_array()
            .ok_or_else(|| err("\"matrix\" must be an array of rows"))?;
        let mut entries = Vec::new();
        let dim = rows.len();
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| err("matrix rows must be arrays"))?;
            if row.len() != dim {
                return Err(err("matrix is not square"));
            }
            for cell in row {
                entries.push(json_int(cell)?);
            }
        }
        if dim == 0 {
            return Err(err("matrix is empty"));
        }
        IntMatrix::new(dim, entries).map_err(|e| err(e.to_string()))
    } else {
        let rows: Vec<Vec<&str>> = trimmed
            .lines()
            .map(|l| l.split_whitespace().collect::<Vec<_>>())
            .filter(|l| !l.is_empty())
            .collect();
        let dim = rows.len();
        if dim == 0 {
            return Err(err("matrix is empty"));
        }
        let mut entries = Vec::new();
        for row in &rows {
            if row.len() != dim {
                return Err(err("matrix is not square"));
            }
            for cell in row {
                entries.push(
                    BigInt::from_str(cell)
                        .map_err(|_| err(format!("not an integer: {cell}")))?,
                );
            }
        }
        IntMatrix::new(dim, entries).map_err(|e| err(e.to_string()))
    }
}

fn json_int(v: &serde_json::Value) -> Result<BigInt, InputError> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(err(format!("non-integer entry: {n}")))
            }
        }
        serde_json::Value::String(s) => {
            BigInt::from_str(s).map_err(|_| err(format!("not an integer: {s}")))
        }
        other => Err(err(format!("invalid matrix entry: {other}"))),
    }
}

#[cfg_attr(not(test), allow(dead_code))]
/// Lossless text rendering, row per line: the inverse of the whitespace
/// form of parse_matrix.
pub fn render_matrix(m: &IntMatrix) -> String {
    m.rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// A cycle specification for the raw oracle command.
pub struct CycleFile {
    pub complex: ComplexSpec,
    pub word: Vec<Letter>,
    pub basepoint_grid: Option<Vec<i64>>,
    pub basepoint_slab: Option<(u32, [i64; 2])>,
}

pub enum ComplexSpec {
    Grid { dim: usize, radius: i64 },
    Slab { matrix: IntMatrix, radius: i64, height: usize },
}

/// Parse the oracle cycle file:
/// `{"complex": {"grid": {"dim": 2, "radius": 4}} |
///              {"slab": {"matrix": [[…]], "radius": 4, "height": 3}},
///   "word": ["x1", "-x2", "t", "-t", …],
///   "basepoint": [0, 0] | {"layer": 0, "pos": [0, 0]}}`
pub fn parse_cycle_file(input: &str) -> Result<CycleFile, InputError> {
    let value: serde_json::Value =
        serde_json::from_str(input).map_err(|e| err(format!("invalid JSON: {e}")))?;
    let complex = value
        .get("complex")
        .ok_or_else(|| err("missing \"complex\""))?;
    let spec = if let Some(grid) = complex.get("grid") {
        ComplexSpec::Grid {
            dim: grid
                .get("dim")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| err("grid needs \"dim\""))? as usize,
            radius: grid
                .get("radius")
                .and_then(|v| v.as_i64())
                .ok_or_else(|| err("grid needs \"radius\""))?,
        }
    } else if let Some(slab) = complex.get("slab") {
        let m = slab
            .get("matrix")
            .ok_or_else(|| err("slab needs \"matrix\""))?;
        ComplexSpec::Slab {
            matrix: parse_matrix(&m.to_string())?,
            radius: slab
                .get("radius")
                .and_then(|v| v.as_i64())
                .ok_or_else(|| err("slab needs \"radius\""))?,
            height: slab
                .get("height")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| err("slab needs \"height\""))? as usize,
        }
    } else {
        return Err(err("\"complex\" must be a grid or a slab"));
    };
    let word = value
        .get("word")
        .and_then(|v| v.as_array())
        .ok_or_else(|| err("missing \"word\" array"))?
        .iter()
        .map(|v| {
            let s = v.as_str().ok_or_else(|| err("word letters are strings"))?;
            parse_letter(s)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut basepoint_grid = None;
    let mut basepoint_slab = None;
    match value.get("basepoint") {
        Some(serde_json::Value::Array(coords)) => {
            basepoint_grid = Some(
                coords
                    .iter()
                    .map(|c| c.as_i64().ok_or_else(|| err("basepoint coords are integers")))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Some(serde_json::Value::Object(map)) => {
            let layer = map
                .get("layer")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| err("slab basepoint needs \"layer\""))? as u32;
            let pos = map
                .get("pos")
                .and_then(|v| v.as_array())
                .ok_or_else(|| err("slab basepoint needs \"pos\""))?;
            if pos.len() != 2 {
                return Err(err("slab basepoint pos must have two coordinates"));
            }
            let x = pos[0].as_i64().ok_or_else(|| err("bad pos"))?;
            let y = pos[1].as_i64().ok_or_else(|| err("bad pos"))?;
            basepoint_slab = Some((layer, [x, y]));
        }
        None => {}
        Some(_) => return Err(err("invalid basepoint")),
    }
    Ok(CycleFile { complex: spec, word, basepoint_grid, basepoint_slab })
}

/// Letters: "x1".."xm" (or "x","y","z" for the first three axes), "t",
/// with a leading '-' for inverses.
pub fn parse_letter(s: &str) -> Result<Letter, InputError> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i8, rest),
        None => (1i8, s),
    };
    if body == "t" {
        return Ok(Letter::T { sign });
    }
    let axis = match body {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        _ => {
            let idx = body
                .strip_prefix('x')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| err(format!("unknown generator letter: {s}")))?;
            if idx == 0 {
                return Err(err("generators are numbered from x1"));
            }
            idx - 1
        }
    };
    Ok(Letter::X { axis, sign })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_json_matrix() {
        let m = parse_matrix(r#"{"matrix": [[2,1],[1,1]]}"#).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.get(0, 1), &BigInt::from(1));
    }

    #[test]
    fn parses_whitespace_matrix() {
        let m = parse_matrix("1 1\n0 1").unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.get(0, 0), &BigInt::from(1));
        assert_eq!(m.get(1, 0), &BigInt::from(0));
    }

    #[test]
    fn rejects_non_square() {
        assert!(parse_matrix(r#"{"matrix": [[1,2,3]]}"#).is_err());
        assert!(parse_matrix("1 2 3\n4 5 6").is_err());
        assert!(parse_matrix("").is_err());
    }

    #[test]
    fn big_integer_entries_round_trip() {
        let huge = "123456789012345678901234567890";
        let m = parse_matrix(&format!("{huge} 0\n0 1")).unwrap();
        assert_eq!(m.get(0, 0).to_string(), huge);
        let rendered = render_matrix(&m);
        let back = parse_matrix(&rendered).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn parses_letters() {
        assert_eq!(parse_letter("x").unwrap(), Letter::x(0));
        assert_eq!(parse_letter("-y").unwrap(), Letter::x_inv(1));
        assert_eq!(parse_letter("x3").unwrap(), Letter::x(2));
        assert_eq!(parse_letter("t").unwrap(), Letter::t());
        assert_eq!(parse_letter("-t").unwrap(), Letter::t_inv());
        assert!(parse_letter("q7").is_err());
    }
}
