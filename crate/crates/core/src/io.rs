//! JSON documents and atomic file output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::CurveJointCertificate;
use crate::geometry::{JointRecord, PointN};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointsDocument {
    pub dimension: usize,
    pub joints: Vec<JointRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsDocument {
    pub dimension: usize,
    pub points: Vec<PointN>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatesDocument {
    pub dimension: usize,
    pub certificates: Vec<CurveJointCertificate>,
}

/// A point set given either as bare points or as a joints document.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointSet {
    Points(PointsDocument),
    Joints(JointsDocument),
}

impl PointSet {
    pub fn dimension(&self) -> usize {
        match self {
            PointSet::Points(d) => d.dimension,
            PointSet::Joints(d) => d.dimension,
        }
    }

    pub fn into_points(self) -> Vec<PointN> {
        match self {
            PointSet::Points(d) => d.points,
            PointSet::Joints(d) => d.joints.into_iter().map(|j| j.point).collect(),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

/// Writes pretty JSON to a temporary file beside `path`, then renames it
/// into place.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let wrap = |source| IoError::Write {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(to_json_string(value).as_bytes()).map_err(wrap)?;
    tmp.write_all(b"\n").map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::grid_lines;
    use crate::geometry::{detect_joints, Arrangement};

    #[test]
    fn round_trip_through_a_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("grid.json");
        let arr = grid_lines(2, 2);
        write_json_atomic(&path, &arr).unwrap();
        let back: Arrangement = read_json(&path).unwrap();
        assert_eq!(back, arr);
    }

    #[test]
    fn point_set_accepts_joints() {
        let arr = grid_lines(2, 2);
        let doc = JointsDocument {
            dimension: 2,
            joints: detect_joints(&arr),
        };
        let text = to_json_string(&doc);
        let set: PointSet = serde_json::from_str(&text).unwrap();
        assert_eq!(set.dimension(), 2);
        assert_eq!(set.into_points().len(), 4);
    }

    #[test]
    fn parse_errors_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(
            read_json::<Arrangement>(&path),
            Err(IoError::Parse { .. })
        ));
        assert!(matches!(
            read_json::<Arrangement>(&dir.path().join("missing.json")),
            Err(IoError::Read { .. })
        ));
    }
}
