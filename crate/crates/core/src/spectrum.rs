//! Sweeps of `Pr_k` over the catalog with a line-delimited results cache.
//!
//! Each cache line is one JSON [`CacheRecord`]. The file is append-only;
//! when a key `(group, k)` appears more than once the last line wins.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::corpus::GroupSpec;
use crate::error::{Error, GroupError};
use crate::par;
use crate::prob;
use crate::rational::{self, Rational};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumFilter {
    All,
    /// Groups with `γ_k(G) ≠ 1`, equivalently `Pr_k(G) < 1`.
    NonGammaKTrivial,
}

impl FromStr for SpectrumFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "all" => Ok(SpectrumFilter::All),
            "non-gamma-k-trivial" => Ok(SpectrumFilter::NonGammaKTrivial),
            _ => Err(Error::Parameters(format!("unknown filter `{s}` (all | non-gamma-k-trivial)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub group: String,
    pub k: usize,
    pub numerator: Option<String>,
    pub denominator: Option<String>,
    pub method: String,
    pub budget_exceeded: bool,
}

impl CacheRecord {
    pub fn value(&self) -> Option<Rational> {
        let text = format!("{}/{}", self.numerator.as_ref()?, self.denominator.as_ref()?);
        rational::parse(&text)
    }
}

/// In-memory view of a cache file, optionally backed by disk.
#[derive(Debug, Default)]
pub struct ResultCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(String, usize), CacheRecord>,
}

impl ResultCache {
    pub fn in_memory() -> Self {
        ResultCache::default()
    }

    /// Loads `path` if it exists; later writes append to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, Error> {
        let path = path.as_ref().to_path_buf();
        let mut cache = ResultCache { path: Some(path.clone()), entries: BTreeMap::new() };
        if path.exists() {
            let io_err = |e: std::io::Error| GroupError::Io(format!("{}: {e}", path.display()));
            let reader = BufReader::new(File::open(&path).map_err(io_err)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line).map_err(|e| {
                    GroupError::Format(format!("{} line {}: {e}", path.display(), i + 1))
                })?;
                cache.entries.insert((rec.group.clone(), rec.k), rec);
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, group: &str, k: usize) -> Option<&CacheRecord> {
        self.entries.get(&(group.to_string(), k))
    }

    /// Records `records` in order, appending them to the backing file.
    pub fn append(&mut self, records: &[CacheRecord]) -> Result<(), Error> {
        if records.is_empty() {
            return Ok(());
        }
        if let Some(path) = &self.path {
            let io_err = |e: std::io::Error| GroupError::Io(format!("{}: {e}", path.display()));
            let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
            let mut text = String::new();
            for r in records {
                text.push_str(&serde_json::to_string(r).expect("records serialise"));
                text.push('\n');
            }
            file.write_all(text.as_bytes()).map_err(io_err)?;
        }
        for r in records {
            self.entries.insert((r.group.clone(), r.k), r.clone());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub group: String,
    pub order: u128,
    /// `Pr_k` as `"num/den"`; absent when the budget was exceeded.
    pub value: Option<String>,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub k: usize,
    pub max_order: usize,
    pub filter: SpectrumFilter,
    /// Catalog groups passing the filter, plus every skipped group.
    pub rows: Vec<SpectrumRow>,
    /// Distinct values, ascending.
    pub values: Vec<String>,
    pub maximum: Option<String>,
    pub attained_by: Vec<String>,
    /// Groups whose value could not be computed within budget.
    pub skipped: Vec<String>,
}

/// How much of a sweep came from the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepStats {
    pub computed: usize,
    pub reused: usize,
}

fn compute_record(spec: &GroupSpec, k: usize, budget: u64) -> Result<CacheRecord, Error> {
    let group = spec.to_string();
    let outcome = spec
        .build()
        .and_then(|g| Ok(prob::exact_distribution(&g, &Word::lower_central(k), budget)?.element_prob(0)));
    match outcome {
        Ok(v) => Ok(CacheRecord {
            group,
            k,
            numerator: Some(v.numer().to_string()),
            denominator: Some(v.denom().to_string()),
            method: "dp".into(),
            budget_exceeded: false,
        }),
        Err(e) if e.is_budget() => Ok(CacheRecord {
            group,
            k,
            numerator: None,
            denominator: None,
            method: "dp".into(),
            budget_exceeded: true,
        }),
        Err(e) => Err(e),
    }
}

/// `Pr_k` over `specs`, reusing cached values and appending new ones in
/// the order of `specs`.
pub fn sweep(
    specs: &[GroupSpec],
    k: usize,
    max_order: usize,
    filter: SpectrumFilter,
    cache: &mut ResultCache,
    budget: u64,
) -> Result<(Spectrum, SweepStats), Error> {
    if k == 0 {
        return Err(Error::Parameters("k must be at least 1".into()));
    }
    let missing: Vec<GroupSpec> = specs
        .iter()
        .filter(|s| cache.get(&s.to_string(), k).is_none())
        .cloned()
        .collect();
    let fresh = par::map(&missing, |s| compute_record(s, k, budget))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    cache.append(&fresh)?;
    let stats = SweepStats { computed: fresh.len(), reused: specs.len() - fresh.len() };

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut values: Vec<Rational> = Vec::new();
    for spec in specs {
        let id = spec.to_string();
        let rec = cache.get(&id, k).expect("every spec was just cached");
        let order = match spec.order() {
            Some(o) => o,
            None => spec.build()?.order() as u128,
        };
        let value = rec.value();
        if rec.budget_exceeded || value.is_none() {
            skipped.push(id.clone());
            rows.push(SpectrumRow { group: id, order, value: None, budget_exceeded: true });
            continue;
        }
        let v = value.expect("checked above");
        if filter == SpectrumFilter::NonGammaKTrivial && v.is_one() {
            continue;
        }
        rows.push(SpectrumRow { group: id, order, value: Some(rational::to_text(&v)), budget_exceeded: false });
        values.push(v);
    }
    values.sort();
    values.dedup();
    let maximum = values.last().cloned();
    let attained_by = match &maximum {
        Some(m) => {
            let text = rational::to_text(m);
            rows.iter().filter(|r| r.value.as_deref() == Some(text.as_str())).map(|r| r.group.clone()).collect()
        }
        None => Vec::new(),
    };
    let spectrum = Spectrum {
        k,
        max_order,
        filter,
        rows,
        values: values.iter().map(rational::to_text).collect(),
        maximum: maximum.as_ref().map(rational::to_text),
        attained_by,
        skipped,
    };
    Ok((spectrum, stats))
}
