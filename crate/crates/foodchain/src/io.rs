//! Parameter-file parsing and CSV trajectory output.
//!
//! Parameter files are flat `key=value` text with `#` comments. The
//! key set decides the frame: the twelve original-model names
//! (a0, b0, v0, d0, a1, v1, d1, v2, d2, c3, v3, d3) or the seven
//! nondimensional ones (a, b, c, d, p, q, r).

use crate::error::{Error, Result};
use crate::model::{OriginalParams, RescaledParams};
use crate::solver::Trajectory;
use std::collections::BTreeMap;
use std::path::Path;

const ORIGINAL_KEYS: [&str; 12] = [
    "a0", "b0", "v0", "d0", "a1", "v1", "d1", "v2", "d2", "c3", "v3", "d3",
];
const RESCALED_KEYS: [&str; 7] = ["a", "b", "c", "d", "p", "q", "r"];

/// A parameter set in whichever frame the file declared.
#[derive(Debug, Clone)]
pub enum Params {
    Original(OriginalParams),
    Rescaled(RescaledParams),
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::ParamFile {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Parse `key=value` parameter text. `path` is used for error
/// reporting only.
pub fn parse_params_str(text: &str, path: &Path) -> Result<Params> {
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(parse_err(path, lineno, format!("expected key=value, got '{line}'")));
        };
        let key = key.trim();
        let value = value.trim();
        if !ORIGINAL_KEYS.contains(&key) && !RESCALED_KEYS.contains(&key) {
            return Err(parse_err(path, lineno, format!("unknown parameter '{key}'")));
        }
        let num: f64 = value
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("malformed number '{value}' for '{key}'")))?;
        if map.insert(key.to_string(), num).is_some() {
            return Err(parse_err(path, lineno, format!("duplicate parameter '{key}'")));
        }
    }

    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
    let has = |k: &str| map.contains_key(k);
    let all_original = ORIGINAL_KEYS.iter().all(|k| has(k));
    let all_rescaled = RESCALED_KEYS.iter().all(|k| has(k));
    if all_original && keys.len() == ORIGINAL_KEYS.len() {
        let g = |k: &str| map[k];
        let op = OriginalParams {
            a0: g("a0"),
            b0: g("b0"),
            v0: g("v0"),
            d0: g("d0"),
            a1: g("a1"),
            v1: g("v1"),
            d1: g("d1"),
            v2: g("v2"),
            d2: g("d2"),
            c3: g("c3"),
            v3: g("v3"),
            d3: g("d3"),
        };
        op.validate()
            .map_err(|e| parse_err(path, 0, e.to_string()))?;
        Ok(Params::Original(op))
    } else if all_rescaled && keys.len() == RESCALED_KEYS.len() {
        let g = |k: &str| map[k];
        let rp = RescaledParams {
            a: g("a"),
            b: g("b"),
            c: g("c"),
            d: g("d"),
            p: g("p"),
            q: g("q"),
            r: g("r"),
        };
        rp.validate()
            .map_err(|e| parse_err(path, 0, e.to_string()))?;
        Ok(Params::Rescaled(rp))
    } else {
        Err(parse_err(
            path,
            0,
            format!(
                "parameter set must be exactly the {} original keys or the {} nondimensional keys; got {:?}",
                ORIGINAL_KEYS.len(),
                RESCALED_KEYS.len(),
                keys
            ),
        ))
    }
}

/// Read and parse a parameter file.
pub fn read_params(path: &Path) -> Result<Params> {
    let text = std::fs::read_to_string(path)?;
    parse_params_str(&text, path)
}

/// Decimal notation with 9 significant digits (no exponent form).
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (8 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Trajectory as CSV with header `t,x,y,z`, 9 significant digits.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,x,y,z\n");
    for (t, s) in traj.times.iter().zip(traj.states.iter()) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig9(*t),
            fmt_sig9(s[0]),
            fmt_sig9(s[1]),
            fmt_sig9(s[2])
        ));
    }
    out
}

/// Parse a trajectory CSV produced by [`trajectory_to_csv`].
pub fn parse_trajectory_csv(text: &str) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    let mut lines = text.lines();
    match lines.next() {
        Some("t,x,y,z") => {}
        other => {
            return Err(Error::Domain(format!(
                "expected trajectory header 't,x,y,z', got {:?}",
                other
            )))
        }
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Domain(format!("row {}: expected 4 fields", idx + 2)));
        }
        let vals: Vec<f64> = fields
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Domain(format!("row {}: {e}", idx + 2)))?;
        times.push(vals[0]);
        states.push([vals[1], vals[2], vals[3]]);
    }
    Ok((times, states))
}
