//! Dataset downloads. The bundled manifest lists the MONK's files; a pinned
//! `sha256` is verified, an unpinned one is printed so it can be pinned.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::monks::{concept_table, format_monks};

pub const MANIFEST_JSON: &str = include_str!("../data/datasets.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub base_url: String,
    pub files: Vec<ManifestFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub name: String,
    #[serde(default)]
    pub url: Option<String>,
    #[serde(default)]
    pub sha256: Option<String>,
}

impl ManifestFile {
    pub fn url(&self, base: &str) -> String {
        self.url.clone().unwrap_or_else(|| format!("{base}{}", self.name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub path: PathBuf,
    pub sha256: String,
    pub pinned: bool,
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    Ok(serde_json::from_str(text)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Checks `bytes` against the file's pinned digest, if any.
pub fn verify(file: &ManifestFile, bytes: &[u8]) -> Result<String> {
    let digest = sha256_hex(bytes);
    match &file.sha256 {
        Some(pinned) if !pinned.eq_ignore_ascii_case(&digest) => {
            Err(Error::Fetch(format!("{}: checksum {digest} does not match pinned {pinned}", file.name)))
        }
        _ => Ok(digest),
    }
}

pub fn fetch_all(manifest: &Manifest, dir: &Path) -> Result<Vec<Fetched>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let client = reqwest::blocking::Client::builder()
        .timeout(std::time::Duration::from_secs(60))
        .build()
        .map_err(|e| Error::Fetch(e.to_string()))?;
    let mut out = Vec::new();
    for file in &manifest.files {
        let url = file.url(&manifest.base_url);
        log::info!("downloading {url}");
        let bytes = client
            .get(&url)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.bytes())
            .map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
        let sha256 = verify(file, &bytes)?;
        let path = dir.join(&file.name);
        std::fs::write(&path, &bytes).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        out.push(Fetched { path, sha256, pinned: file.sha256.is_some() });
    }
    Ok(out)
}

/// Writes `monks-{1,2,3}.test` generated from the target concepts.
pub fn synthesize_monks_tests(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    (1..=3)
        .map(|p| {
            let path = dir.join(format!("monks-{p}.test"));
            std::fs::write(&path, format_monks(&concept_table(p)?))
                .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            Ok(path)
        })
        .collect()
}
