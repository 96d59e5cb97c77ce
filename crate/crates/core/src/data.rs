//! Shipped data: embedded at compile time, overridable by a directory.
//!
//! Set `K3FIX_DATA_DIR` to a directory with the same layout as `data/`
//! (including `fixtures/`) to load files from disk instead.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geomfilters::{BaseCase, NikulinTable, NikulinTriple};

pub const DATA_DIR_ENV: &str = "K3FIX_DATA_DIR";

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../data/", $name)))),*]
    };
}

const FILES: &[(&str, &str)] = embedded!(
    "order7_base_cases.json",
    "nikulin_triples.json",
    "symplectic_data.json",
    "exclusion_ledger.json",
    "case_labels.json",
    "printed_relations.json",
    "examples.json",
    "fixtures/order7_type_counts.json",
    "fixtures/order14_possibilities.json",
    "fixtures/order14_dims.json",
    "fixtures/order14_purely_final.json",
    "fixtures/order14_fixed_loci.json",
    "fixtures/order21_vectors.json",
    "fixtures/order21_purely_final.json",
    "fixtures/order28_dims.json",
    "fixtures/order28_purely_final.json",
    "fixtures/order42_dims.json",
    "fixtures/order42_purely_final.json",
    "fixtures/order14_sigma7_symplectic.json",
    "fixtures/order14_sigma2_symplectic.json",
    "fixtures/order21_sigma7_symplectic.json",
    "fixtures/ns_order14.json",
    "fixtures/ns_order21.json",
    "fixtures/ns_order28.json",
    "fixtures/ns_order42.json",
);

/// Names accepted by `data --dump`.
pub fn file_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticData {
    pub order: u32,
    /// isolated fixed points
    pub points: u32,
    /// rank of the invariant lattice
    pub rank: u32,
}

impl SymplecticData {
    pub fn new(order: u32, points: u32, rank: u32) -> Self {
        SymplecticData { order, points, rank }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub order: u32,
    pub label: String,
    pub stage: String,
    pub reason: String,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub order: u32,
    /// order-7 case, or `*` for any
    pub base: String,
    pub m: Vec<u32>,
    pub alpha: i64,
    pub label: String,
}

/// A linear form c + Σ coeffs[d] · d_d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsForm {
    #[serde(default)]
    pub power: u32,
    #[serde(default)]
    pub constant: i64,
    pub coeffs: BTreeMap<u32, i64>,
    #[serde(default)]
    pub value: i64,
}

impl DimsForm {
    pub fn eval(&self, dims: &crate::lefschetz::EigenspaceDims) -> i64 {
        self.constant + self.coeffs.iter().map(|(&d, &c)| c * dims.get(d) as i64).sum::<i64>()
    }
}

/// Relations quoted for a not-purely case, used by the printed reading in
/// place of the mechanical ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedOverride {
    pub order: u32,
    pub symplectic_power: u32,
    /// linear equations Σ coeffs · d = value
    pub equations: Vec<DimsForm>,
    /// χ of σ^power
    pub chi: Vec<DimsForm>,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Waiver {
    pub row: usize,
    pub column: String,
    /// value accepted in place of the transcribed cell
    pub accept: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub table: String,
    pub description: String,
    pub citation: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    #[serde(default)]
    pub waivers: Vec<Waiver>,
    /// rows may come in any order
    #[serde(default)]
    pub unordered: bool,
}

#[derive(Deserialize)]
struct BaseFile {
    cases: Vec<BaseCase>,
}
#[derive(Deserialize)]
struct NikulinFile {
    triples: Vec<NikulinTriple>,
}
#[derive(Deserialize)]
struct SymplecticFile {
    entries: Vec<SymplecticData>,
}
#[derive(Deserialize)]
struct LedgerFile {
    entries: Vec<LedgerEntry>,
}
#[derive(Deserialize)]
struct LabelFile {
    entries: Vec<CaseLabel>,
}
#[derive(Deserialize)]
struct PrintedFile {
    overrides: Vec<PrintedOverride>,
}

/// Everything the pipelines read, parsed once.
#[derive(Clone, Debug)]
pub struct DataStore {
    pub base_cases: Vec<BaseCase>,
    pub nikulin: NikulinTable,
    pub symplectic: Vec<SymplecticData>,
    pub ledger: Vec<LedgerEntry>,
    pub labels: Vec<CaseLabel>,
    pub printed: Vec<PrintedOverride>,
    pub fixtures: BTreeMap<String, Fixture>,
    raw: BTreeMap<String, String>,
}

fn parse<T: DeserializeOwned>(raw: &BTreeMap<String, String>, file: &str) -> Result<T> {
    let text = raw.get(file).ok_or_else(|| Error::Data {
        file: file.into(),
        msg: "missing".into(),
    })?;
    serde_json::from_str(text).map_err(|e| Error::Data {
        file: file.into(),
        msg: e.to_string(),
    })
}

impl DataStore {
    pub fn embedded() -> Result<Self> {
        let raw = FILES.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect();
        Self::from_raw(raw)
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut raw = BTreeMap::new();
        for (name, _) in FILES {
            let p: PathBuf = dir.join(name);
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Data {
                file: p.display().to_string(),
                msg: e.to_string(),
            })?;
            raw.insert(name.to_string(), text);
        }
        Self::from_raw(raw)
    }

    /// The directory named by `K3FIX_DATA_DIR`, or the embedded copy.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::from_dir(Path::new(&d)),
            _ => Self::embedded(),
        }
    }

    fn from_raw(raw: BTreeMap<String, String>) -> Result<Self> {
        let base: BaseFile = parse(&raw, "order7_base_cases.json")?;
        let nik: NikulinFile = parse(&raw, "nikulin_triples.json")?;
        let sym: SymplecticFile = parse(&raw, "symplectic_data.json")?;
        let ledger: LedgerFile = parse(&raw, "exclusion_ledger.json")?;
        let labels: LabelFile = parse(&raw, "case_labels.json")?;
        let printed: PrintedFile = parse(&raw, "printed_relations.json")?;
        let mut fixtures = BTreeMap::new();
        for name in raw.keys().filter(|n| n.starts_with("fixtures/")) {
            let f: Fixture = parse(&raw, name)?;
            if f.rows.iter().any(|r| r.len() != f.columns.len()) {
                return Err(Error::Data {
                    file: name.clone(),
                    msg: "row width differs from header".into(),
                });
            }
            fixtures.insert(f.table.clone(), f);
        }
        for b in &base.cases {
            if b.m.len() != 3 {
                return Err(Error::Data {
                    file: "order7_base_cases.json".into(),
                    msg: format!("case {} needs three counts", b.label),
                });
            }
        }
        Ok(DataStore {
            base_cases: base.cases,
            nikulin: NikulinTable { triples: nik.triples },
            symplectic: sym.entries,
            ledger: ledger.entries,
            labels: labels.entries,
            printed: printed.overrides,
            fixtures,
            raw,
        })
    }

    pub fn raw(&self, name: &str) -> Option<&str> {
        self.raw.get(name).map(|s| s.as_str())
    }

    pub fn base(&self, label: &str) -> Option<&BaseCase> {
        self.base_cases.iter().find(|b| b.label == label)
    }

    pub fn symplectic(&self, order: u32) -> Option<SymplecticData> {
        self.symplectic.iter().copied().find(|s| s.order == order)
    }

    pub fn fixture(&self, table: &str) -> Result<&Fixture> {
        self.fixtures.get(table).ok_or_else(|| Error::Data {
            file: format!("fixtures/{table}.json"),
            msg: "no such table".into(),
        })
    }

    pub fn ledger_entry(&self, order: u32, label: &str) -> Option<&LedgerEntry> {
        self.ledger.iter().find(|e| e.order == order && e.label == label)
    }

    pub fn printed_override(&self, order: u32, k: u32) -> Option<&PrintedOverride> {
        self.printed
            .iter()
            .find(|p| p.order == order && p.symplectic_power == k)
    }

    pub fn variant_label(&self, order: u32, base: &str, m: &[u32], alpha: i64) -> Option<&str> {
        self.labels
            .iter()
            .find(|l| l.order == order && (l.base == base || l.base == "*") && l.m == m && l.alpha == alpha)
            .map(|l| l.label.as_str())
    }
}
