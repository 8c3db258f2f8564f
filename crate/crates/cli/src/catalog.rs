//! Predictor-versus-oracle validation over a built-in list of groups, with
//! JSON-lines persistence keyed by a hash of (spec, cap, budget).

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use ramstruct::bundled::BUNDLED_NAMES;
use ramstruct::numtheory::{factorize, partitions};
use ramstruct::oracle::{size_set_up_to, Oracle, SearchBudget};
use ramstruct::theory::predict;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::load_group;
use crate::report::{Witness, SCHEMA_VERSION};

/// Largest cap used for `heis(5)`, whose order makes wide grids slow.
pub const HEIS5_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub spec: String,
    pub cap: usize,
}

/// A single size whose existence is decided by the oracle and recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub spec: String,
    pub size: (usize, usize),
    pub note: String,
}

/// Cyclic factor orders of every abelian group of order `n`, as products of
/// cyclic groups of prime-power order.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    let mut acc: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, k) in factorize(n) {
        let mut next = Vec::new();
        for base in &acc {
            for part in partitions(k) {
                let mut orders = base.clone();
                orders.extend(part.iter().rev().map(|&a| p.pow(a)));
                next.push(orders);
            }
        }
        acc = next;
    }
    acc
}

fn abelian_spec(orders: &[u64]) -> String {
    orders
        .iter()
        .map(|n| format!("C{n}"))
        .collect::<Vec<_>>()
        .join("x")
}

/// Abelian groups of order `2..=max_order`, then `heis(3)`, `heis(5)` and the
/// bundled Cayley tables.
pub fn builtin_catalog(max_order: u64, cap: usize) -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (2..=max_order)
        .flat_map(abelian_groups_of_order)
        .map(|orders| CatalogEntry {
            spec: abelian_spec(&orders),
            cap,
        })
        .collect();
    out.push(CatalogEntry {
        spec: "heis(3)".into(),
        cap,
    });
    out.push(CatalogEntry {
        spec: "heis(5)".into(),
        cap: cap.min(HEIS5_CAP),
    });
    for name in BUNDLED_NAMES {
        out.push(CatalogEntry {
            spec: format!("cayley:{name}"),
            cap,
        });
    }
    out
}

pub fn builtin_probes() -> Vec<Probe> {
    vec![Probe {
        spec: "C4xC4xC4".into(),
        size: (7, 7),
        note: "rank-3 2-group: odd-odd construction degenerates, decided by search".into(),
    }]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub size: (usize, usize),
    pub predicted: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictorSummary {
    pub applies: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default)]
    pub min_size: usize,
    #[serde(default)]
    pub excluded_pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub forbid_both_odd: bool,
    #[serde(default)]
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub schema: u32,
    pub key: String,
    pub spec: String,
    pub order: usize,
    pub cap: usize,
    pub predictor: PredictorSummary,
    pub oracle_pairs: Vec<(usize, usize)>,
    pub undecided: Vec<(usize, usize)>,
    pub exhaustive: bool,
    pub candidates_examined: u64,
    pub elapsed_ms: u64,
    pub mismatches: Vec<Mismatch>,
    /// `None` when no predictor applies.
    pub agreement: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub schema: u32,
    pub key: String,
    pub spec: String,
    pub size: (usize, usize),
    pub exists: Option<bool>,
    pub exhaustive: bool,
    pub candidates_examined: u64,
    pub elapsed_ms: u64,
    pub witness: Option<Witness>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Group(GroupRecord),
    Probe(ProbeRecord),
}

impl Record {
    pub fn key(&self) -> &str {
        match self {
            Record::Group(r) => &r.key,
            Record::Probe(r) => &r.key,
        }
    }

    fn schema(&self) -> u32 {
        match self {
            Record::Group(r) => r.schema,
            Record::Probe(r) => r.schema,
        }
    }
}

pub fn cache_key(spec: &str, detail: &str, budget: &SearchBudget) -> String {
    let mut h = Sha256::new();
    h.update(format!("schema={SCHEMA_VERSION}\n"));
    h.update(format!("spec={spec}\n{detail}\n"));
    h.update(serde_json::to_string(budget).expect("budget serializes"));
    format!("{:x}", h.finalize())
}

pub fn run_group(entry: &CatalogEntry, budget: SearchBudget) -> Result<GroupRecord> {
    let (spec, g) = load_group(&entry.spec)?;
    let key = cache_key(&spec, &format!("cap={}", entry.cap), &budget);
    let set = size_set_up_to(&g, entry.cap, budget);
    let predictor = match predict(&g) {
        Ok(scs) => PredictorSummary {
            applies: true,
            reason: None,
            min_size: scs.min_size,
            excluded_pairs: scs.excluded_pairs.clone(),
            forbid_both_odd: scs.forbid_both_odd,
            pairs: scs.grid(entry.cap),
        },
        Err(e) => PredictorSummary {
            applies: false,
            reason: Some(e.to_string()),
            min_size: 0,
            excluded_pairs: Vec::new(),
            forbid_both_odd: false,
            pairs: Vec::new(),
        },
    };
    let mut mismatches = Vec::new();
    if predictor.applies {
        for r1 in 3..=entry.cap {
            for r2 in r1..=entry.cap {
                if set.undecided.contains(&(r1, r2)) {
                    continue;
                }
                let predicted = predictor.pairs.contains(&(r1, r2));
                let oracle = set.pairs.contains(&(r1, r2));
                if predicted != oracle {
                    mismatches.push(Mismatch {
                        size: (r1, r2),
                        predicted,
                        oracle,
                    });
                }
            }
        }
    }
    let agreement = predictor
        .applies
        .then_some(mismatches.is_empty() && set.exhaustive);
    Ok(GroupRecord {
        schema: SCHEMA_VERSION,
        key,
        spec,
        order: g.order(),
        cap: entry.cap,
        predictor,
        oracle_pairs: set.pairs,
        undecided: set.undecided,
        exhaustive: set.exhaustive,
        candidates_examined: set.candidates_examined,
        elapsed_ms: set.elapsed_ms,
        mismatches,
        agreement,
    })
}

pub fn run_probe(probe: &Probe, budget: SearchBudget) -> Result<ProbeRecord> {
    let (spec, g) = load_group(&probe.spec)?;
    let (r1, r2) = probe.size;
    let key = cache_key(&spec, &format!("size={r1},{r2}"), &budget);
    let out = Oracle::new(&g).find(r1, r2, budget);
    Ok(ProbeRecord {
        schema: SCHEMA_VERSION,
        key,
        spec,
        size: probe.size,
        exists: out.exists(),
        exhaustive: out.exhaustive,
        candidates_examined: out.candidates_examined,
        elapsed_ms: out.elapsed_ms,
        witness: out.structure().map(|s| Witness::of(&g, s)),
        note: probe.note.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct CatalogConfig {
    pub entries: Vec<CatalogEntry>,
    pub probes: Vec<Probe>,
    pub budget: SearchBudget,
    /// JSON-lines file used both as output and as cache.
    pub out: Option<PathBuf>,
    pub use_cache: bool,
}

impl CatalogConfig {
    pub fn builtin(max_order: u64, cap: usize, budget: SearchBudget) -> Self {
        CatalogConfig {
            entries: builtin_catalog(max_order, cap),
            probes: builtin_probes(),
            budget,
            out: None,
            use_cache: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CatalogSummary {
    pub groups: usize,
    pub compared: usize,
    pub mismatches: usize,
    pub undecided_groups: usize,
    pub probes: usize,
    pub cache_hits: usize,
    pub oracle_runs: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogRun {
    pub records: Vec<Record>,
    pub summary: CatalogSummary,
}

/// Records from an existing file with the current schema; unreadable lines
/// are ignored.
pub fn load_cache(path: &PathBuf) -> HashMap<String, Record> {
    let Ok(text) = fs::read_to_string(path) else {
        return HashMap::new();
    };
    text.lines()
        .filter_map(|line| serde_json::from_str::<Record>(line).ok())
        .filter(|r| r.schema() == SCHEMA_VERSION)
        .map(|r| (r.key().to_string(), r))
        .collect()
}

pub fn write_records(path: &PathBuf, records: &[Record]) -> Result<()> {
    let mut f =
        fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    for r in records {
        writeln!(f, "{}", serde_json::to_string(r)?)?;
    }
    Ok(())
}

pub fn run_catalog(cfg: &CatalogConfig) -> Result<CatalogRun> {
    let cache = match (&cfg.out, cfg.use_cache) {
        (Some(path), true) => load_cache(path),
        _ => HashMap::new(),
    };
    let mut summary = CatalogSummary::default();
    let mut records = Vec::new();
    for entry in &cfg.entries {
        let (spec, _) = load_group(&entry.spec)?;
        let key = cache_key(&spec, &format!("cap={}", entry.cap), &cfg.budget);
        let rec = match cache.get(&key) {
            Some(Record::Group(r)) => {
                summary.cache_hits += 1;
                r.clone()
            }
            _ => {
                summary.oracle_runs += 1;
                run_group(entry, cfg.budget)?
            }
        };
        summary.groups += 1;
        if rec.predictor.applies {
            summary.compared += 1;
        }
        summary.mismatches += rec.mismatches.len();
        if !rec.exhaustive {
            summary.undecided_groups += 1;
        }
        records.push(Record::Group(rec));
    }
    for probe in &cfg.probes {
        let (spec, _) = load_group(&probe.spec)?;
        let (r1, r2) = probe.size;
        let key = cache_key(&spec, &format!("size={r1},{r2}"), &cfg.budget);
        let rec = match cache.get(&key) {
            Some(Record::Probe(r)) => {
                summary.cache_hits += 1;
                r.clone()
            }
            _ => {
                summary.oracle_runs += 1;
                run_probe(probe, cfg.budget)?
            }
        };
        summary.probes += 1;
        records.push(Record::Probe(rec));
    }
    if let Some(path) = &cfg.out {
        write_records(path, &records)?;
    }
    Ok(CatalogRun { records, summary })
}
