//! On-disk state of a pipeline run: one JSON file per reduced drawing,
//! named by the hash of its key, and an index with the report.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{PartialDrawing, PipelineReport, PipelineRun};
use crate::dcel::{Drawing, DrawingJson};
use crate::error::{Error, Result};
use crate::graphs::VertexId;

pub(crate) const INDEX: &str = "index.json";

#[derive(Serialize, Deserialize)]
struct Index {
    /// Drawing file stems in BFS order.
    drawings: Vec<String>,
    frontier_start: usize,
    report: PipelineReport,
}

#[derive(Serialize, Deserialize)]
struct StoredDrawing {
    drawing: DrawingJson,
    frontier: Vec<VertexId>,
    key: String,
    level: u32,
}

/// Writes `run` to `dir`. Drawing files already present are not rewritten.
pub fn save_state(dir: &Path, run: &PipelineRun) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::with_capacity(run.drawings.len());
    for p in &run.drawings {
        let name = Drawing::canonical_hash(&p.key);
        let path = dir.join(format!("{name}.json"));
        if !path.exists() {
            let stored = StoredDrawing {
                drawing: p.drawing.to_json(),
                frontier: p.frontier.clone(),
                key: p.key.clone(),
                level: p.level,
            };
            fs::write(&path, serde_json::to_string_pretty(&stored)?)?;
        }
        names.push(name);
    }
    let index = Index {
        drawings: names,
        frontier_start: run.frontier_start,
        report: run.report.clone(),
    };
    // write then rename so an interrupted save leaves the old index intact
    let tmp = dir.join(format!("{INDEX}.tmp"));
    fs::write(&tmp, serde_json::to_string_pretty(&index)?)?;
    fs::rename(tmp, dir.join(INDEX))?;
    Ok(())
}

/// Reads a run written by [`save_state`].
pub fn load_state(dir: &Path) -> Result<PipelineRun> {
    let index: Index = serde_json::from_str(&fs::read_to_string(dir.join(INDEX))?)?;
    let mut drawings = Vec::with_capacity(index.drawings.len());
    for name in &index.drawings {
        let text = fs::read_to_string(dir.join(format!("{name}.json")))?;
        let stored: StoredDrawing = serde_json::from_str(&text)?;
        let drawing = Drawing::from_json(&stored.drawing)?;
        let p = PartialDrawing::new(drawing, stored.frontier, stored.level);
        if p.key != stored.key {
            return Err(Error::InvalidInput(format!(
                "{name}: stored key does not match the drawing"
            )));
        }
        drawings.push(p);
    }
    if index.frontier_start > drawings.len() {
        return Err(Error::InvalidInput("index frontier out of range".into()));
    }
    Ok(PipelineRun {
        drawings,
        frontier_start: index.frontier_start,
        report: index.report,
    })
}
