//! Stored reference data: mapping tables and figure circuits.
//!
//! Files are compiled into the library. Setting `QUDITWALK_GOLDEN_DIR`
//! makes the loaders read `<dir>/tables/<id>.json` and
//! `<dir>/circuits/<id>.json` instead.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Circuit;

pub const GOLDEN_DIR_ENV: &str = "QUDITWALK_GOLDEN_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub x: i64,
    pub digits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenTable {
    pub table_id: String,
    pub d: usize,
    pub n_digits: usize,
    pub variant: String,
    pub entries: Vec<TableEntry>,
}

impl GoldenTable {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Pretty JSON with one entry per line.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        s.push_str(&format!("  \"table_id\": {},\n", serde_json::to_string(&self.table_id).unwrap()));
        s.push_str(&format!("  \"d\": {},\n", self.d));
        s.push_str(&format!("  \"n_digits\": {},\n", self.n_digits));
        s.push_str(&format!("  \"variant\": {},\n", serde_json::to_string(&self.variant).unwrap()));
        s.push_str("  \"entries\": [\n");
        for (i, e) in self.entries.iter().enumerate() {
            let digits: Vec<String> = e.digits.iter().map(|d| d.to_string()).collect();
            s.push_str(&format!("    {{\"x\": {}, \"digits\": [{}]}}", e.x, digits.join(", ")));
            s.push_str(if i + 1 < self.entries.len() { ",\n" } else { "\n" });
        }
        s.push_str("  ]\n}\n");
        s
    }
}

macro_rules! embedded {
    ($($id:literal => $path:literal),* $(,)?) => {
        &[$(($id, include_str!($path))),*]
    };
}

static TABLES: &[(&str, &str)] = embedded! {
    "table01" => "../golden/tables/table01.json",
    "table03" => "../golden/tables/table03.json",
    "table04" => "../golden/tables/table04.json",
    "table05" => "../golden/tables/table05.json",
    "table06" => "../golden/tables/table06.json",
    "table07" => "../golden/tables/table07.json",
    "table08" => "../golden/tables/table08.json",
    "table09" => "../golden/tables/table09.json",
    "table10" => "../golden/tables/table10.json",
    "table11" => "../golden/tables/table11.json",
    "table12" => "../golden/tables/table12.json",
    "table13" => "../golden/tables/table13.json",
    "table16" => "../golden/tables/table16.json",
};

static CIRCUITS: &[(&str, &str)] = embedded! {
    "fig04" => "../golden/circuits/fig04.json",
    "fig05" => "../golden/circuits/fig05.json",
    "fig06" => "../golden/circuits/fig06.json",
    "fig06_printed" => "../golden/circuits/fig06_printed.json",
    "fig07" => "../golden/circuits/fig07.json",
    "fig08" => "../golden/circuits/fig08.json",
    "fig08_printed" => "../golden/circuits/fig08_printed.json",
    "fig09_printed" => "../golden/circuits/fig09_printed.json",
    "fig10" => "../golden/circuits/fig10.json",
    "fig10_printed" => "../golden/circuits/fig10_printed.json",
    "fig11" => "../golden/circuits/fig11.json",
    "fig11_printed" => "../golden/circuits/fig11_printed.json",
    "fig13" => "../golden/circuits/fig13.json",
    "fig13_printed" => "../golden/circuits/fig13_printed.json",
    "fig16" => "../golden/circuits/fig16.json",
    "fig16_printed" => "../golden/circuits/fig16_printed.json",
};

pub fn table_ids() -> impl Iterator<Item = &'static str> {
    TABLES.iter().map(|(id, _)| *id)
}

pub fn circuit_ids() -> impl Iterator<Item = &'static str> {
    CIRCUITS.iter().map(|(id, _)| *id)
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(GOLDEN_DIR_ENV).map(PathBuf::from)
}

fn load(kind: &str, id: &str, embedded: &'static [(&str, &str)]) -> Result<String> {
    if let Some(dir) = override_dir() {
        let path = dir.join(kind).join(format!("{id}.json"));
        return std::fs::read_to_string(&path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())));
    }
    embedded
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| Error::Unsupported(format!("no stored {kind} entry {id:?}")))
}

pub fn table(id: &str) -> Result<GoldenTable> {
    let text = load("tables", id, TABLES)?;
    GoldenTable::from_json(&text).map_err(|e| Error::Parse(format!("table {id}: {e}")))
}

pub fn circuit(id: &str) -> Result<Circuit> {
    let text = load("circuits", id, CIRCUITS)?;
    Circuit::from_json(&text).map_err(|e| Error::Parse(format!("circuit {id}: {e}")))
}
