use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};
use tc_core::bounds::CONVENTION;

use crate::{Format, GlobalOpts};

/// Provenance block embedded in every JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    /// SHA-256 of each input, keyed by flag.
    pub inputs: BTreeMap<String, String>,
    pub convention: &'static str,
}

impl RunManifest {
    pub fn new(command: &'static str, g: &GlobalOpts) -> Self {
        RunManifest { command, version: env!("CARGO_PKG_VERSION"), seed: g.seed, inputs: BTreeMap::new(), convention: CONVENTION }
    }

    pub fn input(mut self, key: &str, content: &str) -> Self {
        self.inputs.insert(key.to_string(), hex::encode(Sha256::digest(content.as_bytes())));
        self
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: &'a T,
}

pub fn print_json<T: Serialize>(manifest: &RunManifest, body: &T) -> anyhow::Result<()> {
    outln!("{}", serde_json::to_string_pretty(&Document { manifest, body })?);
    Ok(())
}

/// Prints `key  value` rows with the values aligned.
pub fn print_rows(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        outln!("{k:<width$}  {v}");
    }
}

/// Emits the body as JSON or hands over to the text printer.
pub fn emit<T: Serialize>(g: &GlobalOpts, manifest: &RunManifest, body: &T, text: impl FnOnce(&T)) -> anyhow::Result<()> {
    match g.format {
        Format::Json => print_json(manifest, body),
        Format::Text => {
            text(body);
            Ok(())
        }
    }
}
