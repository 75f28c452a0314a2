//! On-disk cache of enumerations and spectra.
//!
//! `connected-<n>.g6` holds one canonical graph6 line per class and
//! `spectra-<n>.tsv` holds `graph6 TAB spectrum-json` lines, both in
//! canonical-code order. Each file ends with a `#sha256:<hex>` line covering
//! every byte before it; a file whose checksum does not match is rejected.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::canon::CanonicalCode;
use crate::enumerate::{enumerate_connected_codes, Guard};
use crate::error::{Error, Result};
use crate::graph6::parse_graph6;
use crate::resistance::resistance_spectrum;

pub const CACHE_DIR_ENV: &str = "RESIST_CACHE_DIR";

const TRAILER: &str = "#sha256:";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Cache(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Cache { dir })
    }

    /// The directory named by `RESIST_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Cache::new(PathBuf::from(d)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn connected_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("connected-{n}.g6"))
    }

    pub fn spectra_path(&self, n: usize) -> PathBuf {
        self.dir.join(format!("spectra-{n}.tsv"))
    }

    pub fn load_connected(&self, n: usize) -> Result<Option<Vec<CanonicalCode>>> {
        let path = self.connected_path(n);
        let Some(body) = read_checked(&path)? else {
            return Ok(None);
        };
        let codes = body
            .lines()
            .enumerate()
            .map(|(i, line)| parse_code(line, n).map_err(|e| bad_line(&path, i, e)))
            .collect::<Result<Vec<_>>>()?;
        check_ascending(&path, codes.iter())?;
        Ok(Some(codes))
    }

    pub fn store_connected(&self, n: usize, codes: &[CanonicalCode]) -> Result<()> {
        let mut body = String::new();
        for c in codes {
            body.push_str(&c.graph6());
            body.push('\n');
        }
        write_checked(&self.connected_path(n), &body)
    }

    /// Rows `(code, spectrum json)`.
    pub fn load_spectra(&self, n: usize) -> Result<Option<Vec<(CanonicalCode, String)>>> {
        let path = self.spectra_path(n);
        let Some(body) = read_checked(&path)? else {
            return Ok(None);
        };
        let rows = body
            .lines()
            .enumerate()
            .map(|(i, line)| {
                let (g6, json) = line
                    .split_once('\t')
                    .ok_or_else(|| bad_line(&path, i, Error::Format("missing tab".into())))?;
                Ok((
                    parse_code(g6, n).map_err(|e| bad_line(&path, i, e))?,
                    json.to_string(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        check_ascending(&path, rows.iter().map(|(c, _)| c))?;
        Ok(Some(rows))
    }

    pub fn store_spectra(&self, n: usize, rows: &[(CanonicalCode, String)]) -> Result<()> {
        let mut body = String::new();
        for (c, json) in rows {
            body.push_str(&c.graph6());
            body.push('\t');
            body.push_str(json);
            body.push('\n');
        }
        write_checked(&self.spectra_path(n), &body)
    }
}

fn bad_line(path: &Path, index: usize, e: Error) -> Error {
    Error::Cache(format!("{} line {}: {e}", path.display(), index + 1))
}

fn parse_code(g6: &str, n: usize) -> Result<CanonicalCode> {
    let g = parse_graph6(g6)?;
    if g.order() != n {
        return Err(Error::Format(format!(
            "graph of order {} in the order-{n} file",
            g.order()
        )));
    }
    CanonicalCode::of_labelled(&g)
}

fn check_ascending<'a>(path: &Path, codes: impl Iterator<Item = &'a CanonicalCode>) -> Result<()> {
    let mut prev: Option<&CanonicalCode> = None;
    for c in codes {
        if prev.is_some_and(|p| p >= c) {
            return Err(Error::Cache(format!(
                "{} is not in strictly ascending code order",
                path.display()
            )));
        }
        prev = Some(c);
    }
    Ok(())
}

fn checksum(body: &str) -> String {
    format!("{:x}", Sha256::digest(body.as_bytes()))
}

fn read_checked(path: &Path) -> Result<Option<String>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::Cache(format!("cannot read {}: {e}", path.display()))),
    };
    let corrupt = || {
        Error::Cache(format!(
            "{} is corrupt (checksum trailer missing or wrong); delete it to rebuild",
            path.display()
        ))
    };
    let body_end = text.trim_end_matches('\n').rfind('\n').map_or(0, |i| i + 1);
    let (body, trailer) = text.split_at(body_end);
    let expected = trailer
        .trim_end()
        .strip_prefix(TRAILER)
        .ok_or_else(corrupt)?;
    if checksum(body) != expected {
        return Err(corrupt());
    }
    Ok(Some(body.to_string()))
}

/// Writes to a temporary sibling first so readers never see a partial file.
fn write_checked(path: &Path, body: &str) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let io = |e: std::io::Error| Error::Cache(format!("cannot write {}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(body.as_bytes()).map_err(io)?;
    writeln!(f, "{TRAILER}{}", checksum(body)).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// Connected classes on `n` vertices, read from or written to `cache`.
pub fn connected_codes(
    n: usize,
    guard: Guard,
    cache: Option<&Cache>,
) -> Result<Vec<CanonicalCode>> {
    guard.check(n)?;
    if let Some(codes) = cache.map(|c| c.load_connected(n)).transpose()?.flatten() {
        return Ok(codes);
    }
    let codes = enumerate_connected_codes(n, guard)?;
    if let Some(c) = cache {
        c.store_connected(n, &codes)?;
    }
    Ok(codes)
}

/// `(code, spectrum json)` for every connected class on `n` vertices.
pub fn spectrum_rows(
    n: usize,
    guard: Guard,
    cache: Option<&Cache>,
) -> Result<Vec<(CanonicalCode, String)>> {
    guard.check(n)?;
    if let Some(rows) = cache.map(|c| c.load_spectra(n)).transpose()?.flatten() {
        return Ok(rows);
    }
    let codes = connected_codes(n, guard, cache)?;
    let rows: Vec<(CanonicalCode, String)> = codes
        .par_iter()
        .map(|&c| Ok((c, resistance_spectrum(&c.to_graph())?.to_json())))
        .collect::<Result<_>>()?;
    if let Some(c) = cache {
        c.store_spectra(n, &rows)?;
    }
    Ok(rows)
}
