//! Output plumbing: CSV files with LF line endings plus a JSON sidecar per
//! file carrying the effective configuration and a content hash.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
struct Sidecar<'a, C: Serialize> {
    command: &'a str,
    data_file: &'a str,
    rows: usize,
    sha256: String,
    config: &'a C,
}

/// Writes `name` under `out` and a `<name>.json` sidecar with the SHA-256 of
/// the exact bytes written, the row count and the effective config.
pub fn write_csv<C: Serialize>(
    out: &Path,
    name: &str,
    command: &str,
    config: &C,
    csv: &str,
) -> io::Result<PathBuf> {
    std::fs::create_dir_all(out)?;
    let data_path = out.join(name);
    std::fs::write(&data_path, csv.as_bytes())?;
    let digest = Sha256::digest(csv.as_bytes());
    let sidecar = Sidecar {
        command,
        data_file: name,
        rows: csv.lines().count().saturating_sub(1),
        sha256: format!("{digest:x}"),
        config,
    };
    let json = serde_json::to_string_pretty(&sidecar).expect("serializable sidecar");
    std::fs::write(out.join(format!("{name}.json")), json + "\n")?;
    Ok(data_path)
}

/// Writes a standalone JSON document (fit summaries, threshold results).
pub fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> io::Result<PathBuf> {
    std::fs::create_dir_all(out)?;
    let path = out.join(name);
    let json = serde_json::to_string_pretty(value).expect("serializable value");
    std::fs::write(&path, json + "\n")?;
    Ok(path)
}

/// Compact file-name token for a float parameter (no trailing zeros).
pub fn number_token(value: f64) -> String {
    let mut token = format!("{value}");
    if token.contains('.') {
        while token.ends_with('0') {
            token.pop();
        }
        if token.ends_with('.') {
            token.pop();
        }
    }
    token.replace('-', "m")
}
