use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::tables;
use crate::analysis::{AnalysisReport, PermutationResult};

use super::sweep::{sweep_tsv, SweepRow};
use super::HarnessError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.toml";

/// Named TSV tables waiting to be written.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportBundle {
    tables: Vec<(String, String)>,
}

impl ReportBundle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces the file `name`.
    pub fn add(&mut self, name: &str, contents: String) -> &mut Self {
        match self.tables.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = contents,
            None => self.tables.push((name.to_owned(), contents)),
        }
        self
    }

    pub fn tables(&self) -> &[(String, String)] {
        &self.tables
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn add_analysis(&mut self, report: &AnalysisReport) -> &mut Self {
        self.add(
            "pca_scores.tsv",
            tables::pca_scores_tsv(&report.tokens, &report.pca),
        );
        self.add(
            "explained_variance.tsv",
            tables::explained_variance_tsv(&report.pca),
        );
        self.add("correlations.tsv", tables::correlations_tsv(report));
        self.add("age_ordering.tsv", tables::age_ordering_tsv(report));
        if let Some(axis) = &report.axis {
            self.add(
                "projections.tsv",
                tables::projections_tsv(&report.tokens, &axis.projections),
            );
        }
        if let Some(perm) = &report.permutation {
            self.add_permutation(perm);
        }
        self
    }

    pub fn add_permutation(&mut self, result: &PermutationResult) -> &mut Self {
        self.add("permutation.tsv", tables::permutation_summary_tsv(result));
        self.add("null_samples.txt", tables::null_samples_text(result))
    }

    pub fn add_sweep(&mut self, rows: &[SweepRow]) -> &mut Self {
        self.add("sweep.tsv", sweep_tsv(rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun the command that produced a bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The fully resolved run configuration.
    pub config: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

/// Provenance recorded alongside the tables.
#[derive(Clone, Debug, Default)]
pub struct RunInfo {
    pub command: String,
    pub config: serde_json::Value,
    /// Written verbatim as `config.toml` so the bundle can be fed back with `--config`.
    pub config_toml: Option<String>,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<PathBuf>,
}

pub fn sha256_file(path: &Path) -> Result<String, HarnessError> {
    let mut file = fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(|e| HarnessError::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every table of `bundle` into `dir`, then `manifest.json` with
/// digests of the inputs and of each written file.
pub fn emit_report(
    bundle: &ReportBundle,
    dir: &Path,
    run: &RunInfo,
) -> Result<Manifest, HarnessError> {
    if bundle.is_empty() {
        return Err(HarnessError::Spec("report bundle has no tables".into()));
    }
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;

    let mut files: Vec<(&str, &str)> = bundle
        .tables()
        .iter()
        .map(|(n, c)| (n.as_str(), c.as_str()))
        .collect();
    if let Some(cfg) = &run.config_toml {
        files.push((CONFIG_FILE, cfg));
    }
    let mut outputs = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| HarnessError::io(&path, e))?;
        outputs.push(FileDigest {
            path: name.to_owned(),
            sha256: sha256_bytes(contents.as_bytes()),
        });
    }
    let inputs = run
        .inputs
        .iter()
        .map(|p| {
            Ok(FileDigest {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        command: run.command.clone(),
        config: run.config.clone(),
        seeds: run.seeds.clone(),
        inputs,
        outputs,
    };
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(|e| HarnessError::io(&path, e))?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, HarnessError> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Manifest(e.to_string()))
}

/// Recomputes the digest of every output listed in the manifest.
pub fn verify_report(dir: &Path) -> Result<Manifest, HarnessError> {
    let manifest = read_manifest(dir)?;
    for out in &manifest.outputs {
        let actual = sha256_file(&dir.join(&out.path))?;
        if actual != out.sha256 {
            return Err(HarnessError::Manifest(format!(
                "digest mismatch for {}",
                out.path
            )));
        }
    }
    Ok(manifest)
}
