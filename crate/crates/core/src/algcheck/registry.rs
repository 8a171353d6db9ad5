//! Catalogue of discovered indecomposable isomorphism classes. Labels are
//! assigned in discovery order, so identical seeds and inputs reproduce
//! identical labels. Optionally persisted as one module file per class plus
//! a JSON index.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::hom::iso_indec;
use crate::io;
use crate::rep::Module;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone)]
pub struct ClassEntry {
    pub label: String,
    pub module: Module,
    pub abs_indec: Option<bool>,
    pub periodicity: Option<String>,
}

#[derive(Debug, Default)]
pub struct IsoClassRegistry {
    entries: Vec<ClassEntry>,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    entries: Vec<IndexEntry>,
}

#[derive(Serialize, Deserialize)]
struct IndexEntry {
    label: String,
    file: String,
    dim: usize,
    abs_indec: Option<bool>,
    periodicity: Option<String>,
}

impl IsoClassRegistry {
    pub fn new() -> IsoClassRegistry {
        IsoClassRegistry::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ClassEntry] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Option<&ClassEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    fn next_label(&self) -> String {
        format!("c{:03}", self.entries.len())
    }

    /// Finds the class of an indecomposable module, if already present.
    pub fn lookup(&self, m: &Module, cfg: &RunConfig) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.module.dim() == m.dim() && iso_indec(&e.module, m, cfg))
    }

    /// Looks the module up, inserting a new class when unseen. Returns the
    /// entry index and whether it is new. The module must be indecomposable.
    pub fn insert_or_lookup(&mut self, m: &Module, cfg: &RunConfig) -> (usize, bool) {
        if let Some(i) = self.lookup(m, cfg) {
            return (i, false);
        }
        let label = self.next_label();
        self.entries.push(ClassEntry {
            label,
            module: m.clone(),
            abs_indec: None,
            periodicity: None,
        });
        (self.entries.len() - 1, true)
    }

    pub fn set_flags(&mut self, idx: usize, abs_indec: Option<bool>, periodicity: Option<String>) {
        if let Some(e) = self.entries.get_mut(idx) {
            if abs_indec.is_some() {
                e.abs_indec = abs_indec;
            }
            if periodicity.is_some() {
                e.periodicity = periodicity;
            }
        }
    }

    /// One module file per class plus `index.json`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut index = IndexFile { entries: Vec::new() };
        for e in &self.entries {
            let file = format!("{}.mod", e.label);
            io::write_module_file(&dir.join(&file), &e.module)?;
            index.entries.push(IndexEntry {
                label: e.label.clone(),
                file,
                dim: e.module.dim(),
                abs_indec: e.abs_indec,
                periodicity: e.periodicity.clone(),
            });
        }
        let json = serde_json::to_string_pretty(&index)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        std::fs::write(dir.join("index.json"), json)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<IsoClassRegistry> {
        let text = std::fs::read_to_string(dir.join("index.json"))?;
        let index: IndexFile =
            serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut reg = IsoClassRegistry::new();
        for e in index.entries {
            let module = io::read_module_file(&dir.join(&e.file))?;
            reg.entries.push(ClassEntry {
                label: e.label,
                module,
                abs_indec: e.abs_indec,
                periodicity: e.periodicity,
            });
        }
        Ok(reg)
    }
}
