//! Loading the bundled class data, computing grids of invariant dimensions
//! and running the extraction in dependency order, with CSV persistence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arthur::{extract_counts, ArthurError, Extraction, Group, SO7, SO8, SO9};
use crate::basecounts::{CountTables, S2Table};
use crate::degwcf::{DimError, EvalMode, InvariantEngine};
use crate::groupdata::{ingest_carter_data, so9_twist, ClassDataset, GroupError};
use crate::rootsys::{build_root_datum, weight_from_hodge, Family, RootError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Dim(#[from] DimError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Arthur(#[from] ArthurError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

/// The finite groups with bundled class data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataGroup {
    /// `W(E7)+` in `SO7`.
    E7Plus,
    /// `W(E8)+` in `SO8`.
    E8Plus,
    /// `W(E8)` in `SO9` through `g -> (g, det g)`.
    E8So9,
    /// `G2(Z)`.
    G2,
}

impl DataGroup {
    pub fn parse(s: &str) -> Option<DataGroup> {
        match s {
            "E7+" => Some(DataGroup::E7Plus),
            "E8+" => Some(DataGroup::E8Plus),
            "E8so9" => Some(DataGroup::E8So9),
            "G2" => Some(DataGroup::G2),
            _ => None,
        }
    }

    pub fn for_group(g: Group) -> Option<DataGroup> {
        match g {
            SO7 => Some(DataGroup::E7Plus),
            SO8 => Some(DataGroup::E8Plus),
            SO9 => Some(DataGroup::E8So9),
            Group::G2 => Some(DataGroup::G2),
            _ => None,
        }
    }

    pub fn root_type(self) -> (Family, usize) {
        match self {
            DataGroup::E7Plus => (Family::B, 3),
            DataGroup::E8Plus => (Family::D, 4),
            DataGroup::E8So9 => (Family::B, 4),
            DataGroup::G2 => (Family::G2, 2),
        }
    }
}

/// `$LEVELONE_DATA`, or the `data/` directory of this crate.
pub fn data_dir() -> PathBuf {
    match std::env::var_os("LEVELONE_DATA") {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

pub fn load_dataset(dir: &Path, g: DataGroup) -> Result<ClassDataset, PipelineError> {
    Ok(match g {
        DataGroup::E7Plus => ingest_carter_data(&dir.join("e7plus.txt"))?,
        DataGroup::G2 => ingest_carter_data(&dir.join("g2.txt"))?,
        DataGroup::E8Plus => ingest_carter_data(&dir.join("e8.txt"))?.restrict_special("W(E8)+")?,
        DataGroup::E8So9 => so9_twist(&ingest_carter_data(&dir.join("e8.txt"))?)?,
    })
}

pub fn engine(dir: &Path, g: DataGroup) -> Result<InvariantEngine, PipelineError> {
    let (fam, rank) = g.root_type();
    let d = Arc::new(build_root_datum(fam, rank)?);
    Ok(InvariantEngine::new(d, Arc::new(load_dataset(dir, g)?))?)
}

fn decreasing(len: usize, max: i64, min: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    let mut w = max;
    while w >= min {
        for mut rest in decreasing(len - 1, w - 2, min) {
            rest.insert(0, w);
            out.push(rest);
        }
        w -= 2;
    }
    out
}

/// All admissible Hodge weights with first weight at most `max_w1`; for
/// `G2` the bound applies to `w + v` and the targets are `(w, v)`.
pub fn hodge_targets(group: Group, max_w1: i64) -> Vec<Vec<i64>> {
    let mut out = match group {
        Group::OddSO(l) => decreasing(l, max_w1 - (max_w1 + 1).rem_euclid(2), 1),
        Group::EvenSO(l) => decreasing(l, max_w1 - max_w1.rem_euclid(2), 0),
        Group::G2 => {
            let mut v = vec![];
            for w in (4..=max_w1).step_by(2) {
                for s in (2..w).step_by(2) {
                    if w + s <= max_w1 {
                        v.push(vec![w, s]);
                    }
                }
            }
            v
        }
    };
    out.sort();
    out
}

/// Invariant dimensions at every target, computed on a pool of threads.
pub fn dimension_grid(eng: &InvariantEngine, targets: &[Vec<i64>]) -> Result<BTreeMap<Vec<i64>, u64>, PipelineError> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(targets.len().max(1));
    let chunk = targets.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<(Vec<i64>, u64)>, PipelineError>> = std::thread::scope(|s| {
        let handles: Vec<_> = targets
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|w| {
                            let lam = weight_from_hodge(&eng.datum, w)?;
                            let v = eng.dimension(&lam, EvalMode::Fast)?;
                            let v = v
                                .to_u64()
                                .ok_or_else(|| PipelineError::Other(format!("dimension at {:?} out of range", w)))?;
                            Ok((w.clone(), v))
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = BTreeMap::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Writes `w1,...,value` rows sorted lexicographically on the weights.
pub fn write_csv(path: &Path, table: &BTreeMap<Vec<i64>, u64>, width: usize) -> Result<(), PipelineError> {
    let mut wr = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=width).map(|i| format!("w{}", i)).collect();
    header.push("value".into());
    wr.write_record(&header)?;
    for (w, v) in table {
        let mut row: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        row.push(v.to_string());
        wr.write_record(&row)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<BTreeMap<Vec<i64>, u64>, PipelineError> {
    let mut rd = csv::Reader::from_path(path)?;
    let mut out = BTreeMap::new();
    for rec in rd.records() {
        let rec = rec?;
        let n = rec.len();
        let parse =
            |s: &str| s.trim().parse::<i64>().map_err(|e| PipelineError::Other(format!("{}: {}", path.display(), e)));
        let w = rec.iter().take(n - 1).map(parse).collect::<Result<Vec<_>, _>>()?;
        out.insert(w, parse(&rec[n - 1])? as u64);
    }
    Ok(out)
}

/// Grid of invariant dimensions, reused from `cache/m_<group>.csv` when the
/// file covers every target.
pub fn cached_grid(
    dir: &Path,
    group: Group,
    targets: &[Vec<i64>],
    cache: Option<&Path>,
    recompute: bool,
) -> Result<BTreeMap<Vec<i64>, u64>, PipelineError> {
    let file = cache.map(|c| c.join(format!("m_{}.csv", group)));
    if let (Some(f), false) = (&file, recompute) {
        if f.exists() {
            let stored = read_csv(f)?;
            if targets.iter().all(|t| stored.contains_key(t)) {
                return Ok(targets.iter().map(|t| (t.clone(), stored[t])).collect());
            }
        }
    }
    let dg = DataGroup::for_group(group).ok_or_else(|| PipelineError::Other(format!("no class data for {}", group)))?;
    let eng = engine(dir, dg)?;
    let grid = dimension_grid(&eng, targets)?;
    if let Some(f) = &file {
        write_csv(f, &grid, targets[0].len())?;
    }
    Ok(grid)
}

/// Bounds on the first Hodge weight for each extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub so7: i64,
    pub so9: i64,
    pub so8: i64,
    pub g2: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { so7: 31, so9: 27, so8: 36, g2: 60 }
    }
}

impl Limits {
    pub fn none() -> Self {
        Limits { so7: 0, so9: 0, so8: 0, g2: 0 }
    }

    /// Limits for one group, with the `SO7` table extended to cover what
    /// `SO9` consumes.
    pub fn only(group: Group, max_w1: i64) -> Self {
        let mut l = Limits::none();
        match group {
            SO7 => l.so7 = max_w1,
            SO9 => {
                l.so9 = max_w1;
                l.so7 = max_w1;
            }
            SO8 => l.so8 = max_w1,
            _ => l.g2 = max_w1,
        }
        l
    }
}

/// Tables together with the per-target extraction records.
#[derive(Debug, Clone, Default)]
pub struct Computed {
    pub tables: CountTables,
    pub extractions: BTreeMap<Group, Vec<Extraction>>,
}

/// Runs `SO7`, `SO9`, `SO8` and `G2` in that order; `SO9` reads the
/// `S(w1,w2,w3)` produced by `SO7`.
pub fn build_tables(
    dir: &Path,
    limits: Limits,
    cache: Option<&Path>,
    recompute: bool,
) -> Result<Computed, PipelineError> {
    let s2 = match std::fs::read_to_string(dir.join("s2.dat")) {
        Ok(text) => S2Table::parse(&text, 45).map_err(ArthurError::from)?,
        Err(_) => S2Table::bundled(),
    };
    let mut out = Computed { tables: CountTables::new(s2), ..Default::default() };
    let so7 = limits.so7.max(limits.so9);
    for (group, max) in [(SO7, so7), (SO9, limits.so9), (SO8, limits.so8), (Group::G2, limits.g2)] {
        let targets = hodge_targets(group, max);
        if targets.is_empty() {
            continue;
        }
        let grid = cached_grid(dir, group, &targets, cache, recompute)?;
        let ex = extract_counts(group, &grid, &mut out.tables)?;
        out.extractions.insert(group, ex);
    }
    Ok(out)
}

/// The extracted count table of one group, keyed by Hodge weights.
pub fn count_table(tables: &CountTables, group: Group) -> BTreeMap<Vec<i64>, u64> {
    let src = match group {
        Group::OddSO(_) => &tables.s,
        Group::EvenSO(_) => return tables.o.iter().chain(&tables.o_combined).map(|(k, v)| (k.clone(), *v)).collect(),
        Group::G2 => return tables.g2.clone(),
    };
    src.iter().filter(|(k, _)| k.len() == group.rank()).map(|(k, v)| (k.clone(), *v)).collect()
}
