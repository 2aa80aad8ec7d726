use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::teacher::{teacher_respond, Teacher};
use crate::constitutive::MaterialProps;
use crate::error::{Error, Result};
use crate::io::atomic_write;
use crate::linalg::Vec3;
use crate::loadpaths::{Provenance, StrainPath};

pub const DATASET_FORMAT_VERSION: u32 = 1;

/// First line of a dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub format_version: u32,
    pub teacher_hash: String,
    pub props: MaterialProps,
    pub units: Units,
    pub n_paths: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub strain: String,
    pub stress: String,
    pub jump: String,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            strain: "engineering (εxx, εyy, γxy)".into(),
            stress: "MPa".into(),
            jump: "mm".into(),
        }
    }
}

/// One strain path with its homogenized stress response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub id: usize,
    pub provenance: Provenance,
    pub seed: u64,
    pub strains: Vec<Vec3>,
    pub stresses: Vec<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub damage: Option<Vec<Vec<f64>>>,
}

impl PathRecord {
    pub fn len(&self) -> usize {
        self.strains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strains.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub header: DatasetHeader,
    pub paths: Vec<PathRecord>,
}

/// Float written with 17 significant digits.
struct Sci(f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

struct Rows<'a, const N: usize>(&'a [[f64; N]]);

impl<const N: usize> Serialize for Rows<'_, N> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for row in self.0 {
            let r: Vec<Sci> = row.iter().map(|v| Sci(*v)).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: usize,
    provenance: Provenance,
    seed: u64,
    strains: Rows<'a, 3>,
    stresses: Rows<'a, 3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    damage: Option<Vec<Vec<Sci>>>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.header.format_version != DATASET_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported dataset version {}",
                self.header.format_version
            )));
        }
        if self.header.n_paths != self.paths.len() {
            return Err(Error::Format(format!(
                "header announces {} paths, found {}",
                self.header.n_paths,
                self.paths.len()
            )));
        }
        for p in &self.paths {
            if p.strains.len() != p.stresses.len()
                || p.damage.as_ref().is_some_and(|d| d.len() != p.strains.len())
            {
                return Err(Error::Format(format!("path {}: misaligned series", p.id)));
            }
            let finite = p.strains.iter().chain(&p.stresses).flatten().all(|v| v.is_finite());
            if !finite {
                return Err(Error::Format(format!("path {}: non-finite values", p.id)));
            }
        }
        Ok(())
    }

    /// JSON-lines text: header, then one path per line.
    pub fn to_jsonl(&self) -> Result<String> {
        self.validate()?;
        let mut out = serde_json::to_string(&self.header)?;
        out.push('\n');
        for p in &self.paths {
            let rec = RecordOut {
                id: p.id,
                provenance: p.provenance,
                seed: p.seed,
                strains: Rows(&p.strains),
                stresses: Rows(&p.stresses),
                damage: p
                    .damage
                    .as_ref()
                    .map(|d| d.iter().map(|row| row.iter().map(|v| Sci(*v)).collect()).collect()),
            };
            out.push_str(&serde_json::to_string(&rec)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: DatasetHeader = serde_json::from_str(
            lines.next().ok_or_else(|| Error::Format("missing dataset header".into()))?,
        )?;
        let paths = lines
            .map(|l| serde_json::from_str(l).map_err(Error::from))
            .collect::<Result<Vec<PathRecord>>>()?;
        let ds = Self { header, paths };
        ds.validate()?;
        Ok(ds)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        atomic_write(path, self.to_jsonl()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_jsonl(&text)
    }
}

/// Teacher responses for `paths`, in order.
pub fn gen_dataset(paths: &[StrainPath], teacher: &Teacher) -> Result<Dataset> {
    let records = paths
        .par_iter()
        .enumerate()
        .map(|(id, p)| {
            let r = teacher_respond(p, teacher)?;
            Ok(PathRecord {
                id,
                provenance: p.provenance,
                seed: p.seed,
                strains: p.steps.clone(),
                stresses: r.stresses,
                damage: Some(r.damage),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        header: DatasetHeader {
            format_version: DATASET_FORMAT_VERSION,
            teacher_hash: teacher.hash(),
            props: teacher.config.materials,
            units: Units::default(),
            n_paths: records.len(),
        },
        paths: records,
    })
}
