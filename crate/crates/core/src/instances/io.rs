//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "example",
//!   "metric": { "type": "euclidean", "points": [[0.0], [0.4], [1.0]] },
//!   "garages": [{ "point": 0, "capacity": 1 }, { "point": 2, "capacity": 1 }],
//!   "arrivals": [1, 1]
//! }
//! ```
//!
//! An explicit metric uses `{ "type": "explicit", "matrix": [[...], ...] }`.
//! Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{validate_instance, Instance};
use crate::metric::{GarageLayout, MetricSpace};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    name: String,
    metric: MetricFile,
    garages: Vec<GarageFile>,
    arrivals: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MetricFile {
    Euclidean { points: Vec<Vec<f64>> },
    Explicit { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GarageFile {
    point: usize,
    capacity: u32,
}

pub fn to_json(inst: &Instance) -> String {
    let metric = match &inst.space {
        MetricSpace::Euclidean { points } => MetricFile::Euclidean {
            points: points.clone(),
        },
        MetricSpace::Explicit { matrix } => MetricFile::Explicit {
            matrix: matrix.clone(),
        },
    };
    let file = InstanceFile {
        name: inst.name.clone(),
        metric,
        garages: inst
            .layout
            .points()
            .iter()
            .zip(inst.layout.capacities())
            .map(|(&point, &capacity)| GarageFile { point, capacity })
            .collect(),
        arrivals: inst.arrivals.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
    s.push('\n');
    s
}

/// Parses and validates; `origin` names the source in error messages.
pub fn from_json(text: &str, origin: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    let space = match file.metric {
        MetricFile::Euclidean { points } => MetricSpace::euclidean(points),
        MetricFile::Explicit { matrix } => MetricSpace::explicit(matrix),
    }
    .map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: format!("field `metric`: {e}"),
    })?;
    let (points, caps) = file.garages.iter().map(|g| (g.point, g.capacity)).unzip();
    let inst = Instance {
        name: file.name,
        space,
        layout: GarageLayout::from_raw(points, caps),
        arrivals: file.arrivals,
    };
    let violations = validate_instance(&inst);
    if violations.is_empty() {
        Ok(inst)
    } else {
        Err(Error::Invalid(violations))
    }
}

pub fn write_instance(inst: &Instance, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(inst)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_json(&text, &path.display().to_string())
}
