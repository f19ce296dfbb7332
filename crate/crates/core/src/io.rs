//! Dataset files and run manifests.
//!
//! CSV datasets are long form with header `obs,good,r,w` and 1-based indices,
//! one row per (observation, good). JSON datasets are
//! `{"T": …, "K": …, "r": [[…]], "w": [[…]]}`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::sampling::PRNG_IDENTITY;

#[derive(Debug, Deserialize)]
struct Row {
    obs: usize,
    good: usize,
    r: f64,
    w: f64,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

/// Reads a long-form CSV dataset, reporting the offending line on failure.
pub fn read_dataset_csv<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["obs", "good", "r", "w"] {
        return Err(parse_error(
            "line 1",
            format!(
                "expected header obs,good,r,w, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut cells: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for (n, rec) in rdr.deserialize::<Row>().enumerate() {
        let line = format!("line {}", n + 2);
        let row = rec.map_err(|e| parse_error(&line, e.to_string()))?;
        if row.obs == 0 || row.good == 0 {
            return Err(parse_error(&line, "obs and good are 1-based"));
        }
        if !row.r.is_finite() || !row.w.is_finite() {
            return Err(parse_error(&line, "r and w must be finite"));
        }
        if cells.insert((row.obs, row.good), (row.r, row.w)).is_some() {
            return Err(parse_error(
                &line,
                format!("duplicate entry for obs {}, good {}", row.obs, row.good),
            ));
        }
    }
    if cells.is_empty() {
        return Err(parse_error("line 2", "no data rows"));
    }
    let t = cells.keys().map(|k| k.0).max().unwrap_or(0);
    let k = cells.keys().map(|k| k.1).max().unwrap_or(0);
    if cells.len() != t * k {
        let missing = (1..=t)
            .flat_map(|i| (1..=k).map(move |g| (i, g)))
            .find(|key| !cells.contains_key(key))
            .expect("count mismatch implies a gap");
        return Err(parse_error(
            "file",
            format!("missing entry for obs {}, good {}", missing.0, missing.1),
        ));
    }
    let (r, w): (Vec<f64>, Vec<f64>) = cells.into_values().unzip();
    Dataset::new(t, k, r, w)
}

pub fn write_dataset_csv<W: Write>(dataset: &Dataset, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["obs", "good", "r", "w"])?;
    for i in 0..dataset.t() {
        for (g, (r, w)) in dataset.prices(i).iter().zip(dataset.shares(i)).enumerate() {
            wtr.serialize((i + 1, g + 1, r, w))?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Loads a dataset, choosing JSON for `.json` files and CSV otherwise.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    if text.trim().is_empty() {
        return Err(parse_error(path.display().to_string(), "empty file"));
    }
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::from_str(&text)
            .map_err(|e| parse_error(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
    } else {
        read_dataset_csv(text.as_bytes())
    }
}

pub fn save_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        fs::write(path, serde_json::to_string_pretty(dataset)?)?;
        Ok(())
    } else {
        write_dataset_csv(dataset, fs::File::create(path)?)
    }
}

/// Writes serialisable rows as CSV with a header.
pub fn write_rows<W: Write, T: Serialize>(rows: &[T], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Record of one run, enough to redo it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: serde_json::Value,
    pub seed: u64,
    pub prng: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub build: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(
        command_line: Vec<String>,
        config: serde_json::Value,
        seed: u64,
        outputs: Vec<PathBuf>,
    ) -> Self {
        RunManifest {
            command_line,
            config,
            seed,
            prng: PRNG_IDENTITY.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            build: build_id().to_string(),
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// `git describe` of the source tree this library was built from.
pub fn build_id() -> &'static str {
    env!("RPDIM_GIT_DESCRIBE")
}

#[cfg(test)]
mod tests {
    use super::*;

    const WARP: &str = "obs,good,r,w\n1,1,0.5,0.5\n1,2,0.5,0.5\n2,1,0.8,0.5\n2,2,0.2,0.5\n";

    #[test]
    fn csv_round_trip() {
        let ds = read_dataset_csv(WARP.as_bytes()).unwrap();
        assert_eq!((ds.t(), ds.k()), (2, 2));
        let mut buf = Vec::new();
        write_dataset_csv(&ds, &mut buf).unwrap();
        let back = read_dataset_csv(buf.as_slice()).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn row_order_does_not_matter() {
        let shuffled = "obs,good,r,w\n2,2,0.2,0.5\n1,1,0.5,0.5\n2,1,0.8,0.5\n1,2,0.5,0.5\n";
        assert_eq!(
            read_dataset_csv(shuffled.as_bytes()).unwrap(),
            read_dataset_csv(WARP.as_bytes()).unwrap()
        );
    }

    #[test]
    fn diagnostics_name_the_line() {
        let bad = "obs,good,r,w\n1,1,0.5,0.5\n1,2,abc,0.5\n";
        let err = read_dataset_csv(bad.as_bytes()).unwrap_err();
        assert!(
            matches!(&err, Error::Parse { location, .. } if location == "line 3"),
            "{err}"
        );
        let gap = "obs,good,r,w\n1,1,0.5,0.5\n1,2,0.5,0.5\n2,1,0.8,1.0\n";
        assert!(read_dataset_csv(gap.as_bytes()).is_err());
        assert!(read_dataset_csv("a,b\n".as_bytes()).is_err());
        assert!(read_dataset_csv("obs,good,r,w\n".as_bytes()).is_err());
    }

    #[test]
    fn files_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let ds = read_dataset_csv(WARP.as_bytes()).unwrap();
        for name in ["d.csv", "d.json"] {
            let path = dir.path().join(name);
            save_dataset(&ds, &path).unwrap();
            assert_eq!(load_dataset(&path).unwrap(), ds);
        }
        let empty = dir.path().join("e.csv");
        fs::write(&empty, "").unwrap();
        assert!(matches!(load_dataset(&empty), Err(Error::Parse { .. })));
    }
}
