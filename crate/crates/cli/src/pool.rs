//! The on-disk pool document: a JSON object with a `candidates` array of
//! `{id, values, masses}` entries and optional default `k` and `h`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use teamsel::{Candidate, DiscreteRv, TeamInstance};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoolFile {
    pub candidates: Vec<PoolEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoolEntry {
    pub id: String,
    pub values: Vec<f64>,
    pub masses: Vec<f64>,
}

pub fn read_pool(path: &Path) -> CliResult<PoolFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Builds the instance, preferring command-line `k`/`h` over the file's
/// defaults. Entries that fail variable validation are a malformed file.
pub fn to_instance(file: &PoolFile, k: Option<usize>, h: Option<usize>) -> CliResult<TeamInstance> {
    let k = k
        .or(file.k)
        .ok_or_else(|| CliError::InvalidParams("k missing (flag or pool file)".into()))?;
    let h = h.or(file.h).unwrap_or(1);
    let pool = file
        .candidates
        .iter()
        .map(|e| {
            DiscreteRv::new(e.values.clone(), e.masses.clone())
                .map(|rv| Candidate::new(e.id.clone(), rv))
                .map_err(|err| CliError::Parse(format!("candidate {}: {err}", e.id)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    TeamInstance::new(pool, k, h).map_err(CliError::from)
}

pub fn from_instance(instance: &TeamInstance) -> PoolFile {
    PoolFile {
        candidates: instance
            .pool()
            .iter()
            .map(|c| PoolEntry {
                id: c.id.clone(),
                values: c.rv.values().to_vec(),
                masses: c.rv.masses().to_vec(),
            })
            .collect(),
        k: Some(instance.k()),
        h: Some(instance.h()),
    }
}

pub fn write_pool(path: &Path, file: &PoolFile) -> CliResult<()> {
    let text = serde_json::to_string_pretty(file)
        .map_err(|e| CliError::ReportWrite(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::write(path, e))
}
