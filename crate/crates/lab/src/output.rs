use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::LabError;

pub const BUILD_ID: &str = env!("OCS_BUILD_ID");

/// Provenance stamped into every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Stamp {
    pub seed: u64,
    pub config_hash: String,
    pub build: &'static str,
}

/// Where a command's results go. Summary lines always reach stdout. With an
/// output directory, JSON-lines records go to `<dir>/<experiment>.jsonl` and
/// tables to `<dir>/<table>.csv`; without one, records are echoed to stdout
/// and tables are skipped. Files are truncated on open so a re-run replaces
/// them.
pub struct Sink {
    pub stamp: Stamp,
    experiment: String,
    dir: Option<PathBuf>,
    jsonl: Option<BufWriter<File>>,
}

impl Sink {
    pub fn new(experiment: &str, dir: Option<&Path>, stamp: Stamp) -> Result<Self, LabError> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(Sink { stamp, experiment: experiment.into(), dir: dir.map(Path::to_path_buf), jsonl: None })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// A closed stdout (e.g. piped into `head`) is not an error.
    pub fn say(&self, line: impl AsRef<str>) {
        let _ = writeln!(std::io::stdout().lock(), "{}", line.as_ref());
    }

    /// One record; `body` must be a JSON object and gets the stamp merged in.
    pub fn record(&mut self, body: Value) -> Result<(), LabError> {
        let mut obj = match body {
            Value::Object(o) => o,
            other => {
                let mut o = serde_json::Map::new();
                o.insert("value".into(), other);
                o
            }
        };
        obj.insert("experiment".into(), json!(self.experiment));
        obj.insert("seed".into(), json!(self.stamp.seed));
        obj.insert("config_hash".into(), json!(self.stamp.config_hash));
        obj.insert("build".into(), json!(self.stamp.build));
        let line = serde_json::to_string(&Value::Object(obj))?;
        match &self.dir {
            None => {
                let _ = writeln!(std::io::stdout().lock(), "{line}");
            }
            Some(d) => {
                if self.jsonl.is_none() {
                    let f = File::create(d.join(format!("{}.jsonl", self.experiment)))?;
                    self.jsonl = Some(BufWriter::new(f));
                }
                writeln!(self.jsonl.as_mut().unwrap(), "{line}")?;
            }
        }
        Ok(())
    }

    /// A CSV table whose first line is a `#` comment with the stamp.
    pub fn table<R: Serialize>(&self, name: &str, rows: impl IntoIterator<Item = R>) -> Result<Option<PathBuf>, LabError> {
        let Some(d) = &self.dir else { return Ok(None) };
        let path = d.join(format!("{name}.csv"));
        let mut f = BufWriter::new(File::create(&path)?);
        writeln!(f, "# seed={} config_hash={} build={}", self.stamp.seed, self.stamp.config_hash, self.stamp.build)?;
        let mut w = csv::Writer::from_writer(f);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(Some(path))
    }

    /// Arbitrary text file in the output directory (no stamp).
    pub fn raw_file(&self, name: &str) -> Result<Option<BufWriter<File>>, LabError> {
        match &self.dir {
            None => Ok(None),
            Some(d) => Ok(Some(BufWriter::new(File::create(d.join(name))?))),
        }
    }

    pub fn finish(mut self) -> Result<(), LabError> {
        if let Some(w) = self.jsonl.as_mut() {
            w.flush()?;
        }
        Ok(())
    }
}
