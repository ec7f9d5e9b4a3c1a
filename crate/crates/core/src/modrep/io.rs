//! On-disk form of a module: a JSON header plus one FFMX blob per
//! generator, stored as `<sha256 of header>.gmod/gen<i>.ffmx`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ffield::{read_ffmx, write_ffmx, Field};
use crate::groups::Group;

use super::module::GModule;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleHeader {
    pub group: String,
    pub field_e: u32,
    pub dim: usize,
    pub generators: usize,
    /// SHA-256 of the concatenated generator blobs, so that distinct
    /// modules with equal shape get distinct directories.
    pub content: String,
}

impl ModuleHeader {
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("header serialises");
        hex::encode(Sha256::digest(&json))
    }
}

fn blobs(v: &GModule) -> Result<Vec<Vec<u8>>> {
    v.matrices()
        .iter()
        .map(|m| {
            let mut buf = Vec::new();
            write_ffmx(m, &mut buf)?;
            Ok(buf)
        })
        .collect()
}

pub fn header_of(v: &GModule) -> Result<ModuleHeader> {
    let mut h = Sha256::new();
    for b in blobs(v)? {
        h.update(&b);
    }
    Ok(ModuleHeader {
        group: v.group().name().to_string(),
        field_e: v.field().degree(),
        dim: v.dim(),
        generators: v.ngens(),
        content: hex::encode(h.finalize()),
    })
}

/// Writes the module below `root`; returns the `.gmod` directory.
pub fn save_module(v: &GModule, root: &Path) -> Result<PathBuf> {
    let header = header_of(v)?;
    let dir = root.join(format!("{}.gmod", header.digest()));
    fs::create_dir_all(&dir)?;
    for (i, b) in blobs(v)?.into_iter().enumerate() {
        fs::write(dir.join(format!("gen{i}.ffmx")), b)?;
    }
    let json = serde_json::to_string_pretty(&header).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(dir.join("header.json"), json)?;
    Ok(dir)
}

/// Reads a module written by `save_module` for the given group.
pub fn load_module(dir: &Path, group: &Arc<Group>) -> Result<GModule> {
    let text = fs::read_to_string(dir.join("header.json"))?;
    let header: ModuleHeader =
        serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
    if header.group != group.name() || header.generators != group.gens().len() {
        return Err(Error::Format(format!(
            "module for {} does not fit {}",
            header.group,
            group.name()
        )));
    }
    let field = Field::gf(header.field_e)?;
    let mut ms = Vec::new();
    for i in 0..header.generators {
        let bytes = fs::read(dir.join(format!("gen{i}.ffmx")))?;
        ms.push(read_ffmx(bytes.as_slice())?);
    }
    let v = GModule::new(group, &field, ms)?;
    if v.dim() != header.dim || header_of(&v)? != header {
        return Err(Error::Format(
            "module content does not match its header".into(),
        ));
    }
    Ok(v)
}
