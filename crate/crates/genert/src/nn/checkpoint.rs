//! Versioned text checkpoints: named parameter groups mapped to shapes and
//! flat arrays, with bit-exact float round-tripping.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use super::params::{Group, ParamStore};
use crate::textio::{format_f64, parse_f64_fields};

const MAGIC: &str = "genert-checkpoint v1";

#[derive(Debug)]
pub enum CheckpointError {
    Io(std::io::Error),
    Parse(String),
}

impl fmt::Display for CheckpointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckpointError::Io(e) => write!(f, "checkpoint io error: {e}"),
            CheckpointError::Parse(m) => write!(f, "checkpoint parse error: {m}"),
        }
    }
}

impl std::error::Error for CheckpointError {}

impl From<std::io::Error> for CheckpointError {
    fn from(e: std::io::Error) -> Self {
        CheckpointError::Io(e)
    }
}

/// Parameter store plus free-form metadata (architecture dimensions, seeds,
/// training provenance).
#[derive(Clone, Debug, Default)]
pub struct Checkpoint {
    pub meta: BTreeMap<String, String>,
    pub store: ParamStore,
}

pub fn save_checkpoint(ckpt: &Checkpoint, path: &Path) -> Result<(), CheckpointError> {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    for (k, v) in &ckpt.meta {
        debug_assert!(!k.contains(char::is_whitespace) && !v.contains('\n'));
        out.push_str(&format!("meta {k} {v}\n"));
    }
    for t in &ckpt.store.tensors {
        out.push_str(&format!("tensor {} {} {} {}\n", t.name, t.group.as_str(), t.rows, t.cols));
        for r in 0..t.rows {
            let row: Vec<String> =
                t.data[r * t.cols..(r + 1) * t.cols].iter().map(|v| format_f64(*v)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out.push_str("end\n");
    std::fs::write(path, out)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, CheckpointError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(CheckpointError::Parse(format!("missing header {MAGIC:?}")));
    }
    let mut ckpt = Checkpoint::default();
    let mut saw_end = false;
    while let Some(line) = lines.next() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if line == "end" {
            saw_end = true;
            break;
        }
        if let Some(rest) = line.strip_prefix("meta ") {
            let (k, v) = rest
                .split_once(' ')
                .ok_or_else(|| CheckpointError::Parse(format!("bad meta line {line:?}")))?;
            ckpt.meta.insert(k.to_string(), v.to_string());
            continue;
        }
        let rest = line
            .strip_prefix("tensor ")
            .ok_or_else(|| CheckpointError::Parse(format!("unexpected line {line:?}")))?;
        let fields: Vec<&str> = rest.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(CheckpointError::Parse(format!("bad tensor header {line:?}")));
        }
        let name = fields[0];
        let group = Group::parse(fields[1])
            .ok_or_else(|| CheckpointError::Parse(format!("unknown group {:?}", fields[1])))?;
        let rows: usize = fields[2]
            .parse()
            .map_err(|_| CheckpointError::Parse(format!("bad rows in {line:?}")))?;
        let cols: usize = fields[3]
            .parse()
            .map_err(|_| CheckpointError::Parse(format!("bad cols in {line:?}")))?;
        let id = ckpt.store.add(name, group, rows, cols);
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let row_line = lines
                .next()
                .ok_or_else(|| CheckpointError::Parse(format!("tensor {name} truncated at row {r}")))?;
            let vals = parse_f64_fields(row_line).map_err(CheckpointError::Parse)?;
            if vals.len() != cols {
                return Err(CheckpointError::Parse(format!(
                    "tensor {name} row {r}: expected {cols} values, got {}",
                    vals.len()
                )));
            }
            data.extend(vals);
        }
        ckpt.store.tensor_mut(id).data = data;
    }
    if !saw_end {
        return Err(CheckpointError::Parse("missing end marker".into()));
    }
    Ok(ckpt)
}
