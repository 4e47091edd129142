//! CSV reading and writing with `#` provenance headers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const PIPELINE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Hex SHA-256 of a file's bytes.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Input files a derived table was built from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub inputs: Vec<(String, String)>,
}

impl Provenance {
    pub fn of_files(paths: &[PathBuf]) -> Result<Self> {
        let mut inputs = paths
            .iter()
            .map(|p| {
                let name = p.file_name().map_or_else(
                    || p.display().to_string(),
                    |n| n.to_string_lossy().into_owned(),
                );
                Ok((name, file_digest(p)?))
            })
            .collect::<Result<Vec<_>>>()?;
        inputs.sort();
        Ok(Provenance { inputs })
    }

    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("# generated-by: {PIPELINE_VERSION}")];
        lines.extend(
            self.inputs
                .iter()
                .map(|(name, digest)| format!("# input: {name} sha256={digest}")),
        );
        lines
    }
}

/// Reads every record of a headed CSV file, skipping `#` lines.
pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::csv(path, e))
}

/// Writes `rows` under the comment lines `header`. The column header comes
/// from the first serialized row, so an empty table has none.
pub fn write_csv<T: Serialize>(path: &Path, header: &[String], rows: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    for line in header {
        writeln!(buf, "{line}").map_err(|e| Error::io(path, e))?;
    }
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        for row in rows {
            writer.serialize(row).map_err(|e| Error::csv(path, e))?;
        }
        writer.flush().map_err(|e| Error::io(path, e))?;
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, serde::Serialize, serde::Deserialize, PartialEq)]
    struct Row {
        region: String,
        value: f64,
    }

    #[test]
    fn round_trip_skips_provenance() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![
            Row { region: "A".into(), value: 1.5 },
            Row { region: "B".into(), value: 0.0 },
        ];
        let prov = Provenance { inputs: vec![("x.csv".into(), "00".into())] };
        write_csv(&path, &prov.header_lines(), &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# generated-by: phosmarket"));
        assert!(text.contains("# input: x.csv sha256=00"));
        let back: Vec<Row> = read_csv(&path).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn digest_of_known_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abc");
        fs::write(&path, b"abc").unwrap();
        assert_eq!(
            file_digest(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
