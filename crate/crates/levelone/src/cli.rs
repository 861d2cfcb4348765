//! Command-line frontend.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::arthur::{endoscopic_partition, Group, SO7, SO8, SO9};
use crate::degwcf::{harmonic_invariant_series, EvalMode, HarmonicCase};
use crate::groupdata::{enumerate_e7_plus, enumerate_e8_full, enumerate_g2, verify_class_data};
use crate::pipeline::{
    build_tables, data_dir, engine, hodge_targets, load_dataset, write_csv, DataGroup, Limits, PipelineError,
};
use crate::rootsys::{weight_from_hodge, Weight};
use crate::searches::{borcherds_blocks, enumerate_so25_trivial, multiplicities_so25, search_tempered_28};

#[derive(Debug, Parser)]
#[command(name = "levelone", about = "Level one automorphic forms for definite SO7, SO8, SO9 and G2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of the invariants of a finite group in an irreducible module.
    Dim {
        /// E7+, E8+, E8so9 or G2.
        #[arg(long)]
        group: String,
        /// Highest weight in the coordinates of the root datum.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "weight_hodge")]
        weight: Option<Vec<i64>>,
        /// Hodge weights; `(w, v)` for G2.
        #[arg(long, value_delimiter = ',')]
        weight_hodge: Option<Vec<i64>>,
        /// Use exact cyclotomic arithmetic throughout.
        #[arg(long)]
        exact: bool,
    },
    /// Invariant dimensions and extracted counts as CSV files.
    Tables {
        /// SO7, SO8, SO9 or G2.
        #[arg(long)]
        group: String,
        /// Bound on the first Hodge weight (on `w + v` for G2).
        #[arg(long)]
        max_w1: i64,
        /// Output directory; also holds the cached grids.
        #[arg(long)]
        out: PathBuf,
        /// Also write the endoscopic listing of every target as JSON.
        #[arg(long)]
        partition: bool,
        /// Ignore cached grids.
        #[arg(long)]
        recompute: bool,
    },
    /// Checks a bundled dataset and the harmonic series.
    Verify {
        #[arg(long)]
        group: String,
    },
    /// Builds a dataset from generators and writes it in the text format.
    Enumerate {
        /// E7+, G2 or E8.
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: PathBuf,
        /// Required for E8, which enumerates 696729600 elements.
        #[arg(long)]
        expensive: bool,
    },
    /// Parameters of SO25 with the infinitesimal character of the trivial
    /// representation.
    Borcherds {
        #[arg(long)]
        json: bool,
        /// Directory for cached grids.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Tempered parameters of rank 28 with Hodge weights 27, 25, ..., 1.
    Search28 {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

fn bad(msg: impl Into<String>) -> PipelineError {
    PipelineError::Other(msg.into())
}

fn data_group(s: &str) -> Result<DataGroup, PipelineError> {
    DataGroup::parse(s).ok_or_else(|| bad(format!("unknown group {:?}; expected E7+, E8+, E8so9 or G2", s)))
}

fn arthur_group(s: &str) -> Result<Group, PipelineError> {
    match Group::parse(s) {
        Some(g) if [SO7, SO8, SO9, Group::G2].contains(&g) => Ok(g),
        _ => Err(bad(format!("unknown group {:?}; expected SO7, SO8, SO9 or G2", s))),
    }
}

fn dim(group: &str, weight: Option<Vec<i64>>, hodge: Option<Vec<i64>>, exact: bool) -> Result<String, PipelineError> {
    let g = data_group(group)?;
    let eng = engine(&data_dir(), g)?;
    let lam = match (weight, hodge) {
        (Some(w), None) => Weight(w),
        (None, Some(h)) => weight_from_hodge(&eng.datum, &h)?,
        _ => return Err(bad("give exactly one of --weight and --weight-hodge")),
    };
    if lam.0.len() != eng.datum.rank {
        return Err(bad(format!("expected {} coordinates, got {}", eng.datum.rank, lam.0.len())));
    }
    let mode = if exact { EvalMode::Exact } else { EvalMode::Fast };
    Ok(format!("{}\n", eng.dimension(&lam, mode)?))
}

fn widths(t: &BTreeMap<Vec<i64>, u64>, n: usize) -> BTreeMap<Vec<i64>, u64> {
    t.iter().filter(|(k, _)| k.len() == n).map(|(k, v)| (k.clone(), *v)).collect()
}

fn tables(group: &str, max_w1: i64, out: &Path, partition: bool, recompute: bool) -> Result<String, PipelineError> {
    let g = arthur_group(group)?;
    std::fs::create_dir_all(out)?;
    let c = build_tables(&data_dir(), Limits::only(g, max_w1), Some(out), recompute)?;
    let t = &c.tables;
    let mut report = String::new();
    let mut emit = |name: &str, table: BTreeMap<Vec<i64>, u64>, width: usize| -> Result<(), PipelineError> {
        if table.is_empty() {
            return Ok(());
        }
        let path = out.join(format!("{}.csv", name));
        write_csv(&path, &table, width)?;
        let nonzero = table.values().filter(|&&v| v > 0).count();
        report.push_str(&format!("{}: {} entries, {} nonzero -> {}\n", name, table.len(), nonzero, path.display()));
        Ok(())
    };
    emit("S3", widths(&t.s, 3), 3)?;
    emit("S4", widths(&t.s, 4), 4)?;
    emit("O", t.o.clone(), 4)?;
    emit("O_combined", t.o_combined.clone(), 4)?;
    emit("G2", t.g2.clone(), 2)?;
    if partition {
        let mut rows = vec![];
        for w in hodge_targets(g, max_w1) {
            let listing = endoscopic_partition(g, &w, t)?;
            if !listing.is_empty() {
                rows.push(json!({ "weights": w, "parameters": listing }));
            }
        }
        let path = out.join(format!("partitions_{}.json", g));
        std::fs::write(&path, serde_json::to_string_pretty(&rows).map_err(|e| bad(e.to_string()))? + "\n")?;
        report.push_str(&format!("partitions: {} targets -> {}\n", rows.len(), path.display()));
    }
    Ok(report)
}

fn verify(group: &str) -> Result<(String, bool), PipelineError> {
    let g = data_group(group)?;
    let dir = data_dir();
    let ds = load_dataset(&dir, g)?;
    let r = verify_class_data(&ds);
    let mut out = format!("{} ({} classes, order {})\n{}", ds.name, ds.classes.len(), ds.order, r);
    let mut ok = r.passed();
    let harmonic = match g {
        DataGroup::E7Plus => Some((HarmonicCase::E7, 28)),
        DataGroup::E8Plus => Some((HarmonicCase::E8, 36)),
        DataGroup::E8So9 => Some((HarmonicCase::E8Twisted, 28)),
        DataGroup::G2 => None,
    };
    if let Some((case, max)) = harmonic {
        let eng = engine(&dir, g)?;
        let series = harmonic_invariant_series(case, max);
        let mut agree = true;
        for (m, want) in series.iter().enumerate() {
            let mut w = vec![0; eng.datum.rank];
            w[0] = m as i64;
            agree &= eng.dimension(&Weight(w), EvalMode::Fast)? == (*want).into();
        }
        out.push_str(&format!(
            "[{}] harmonic series: degrees 0..={} against the generating function\n",
            if agree { "pass" } else { "FAIL" },
            max
        ));
        ok &= agree;
    }
    Ok((out, ok))
}

fn enumerate(group: &str, out: &Path, expensive: bool) -> Result<String, PipelineError> {
    let ds = match group {
        "E7+" => enumerate_e7_plus()?,
        "G2" => enumerate_g2()?,
        "E8" if expensive => enumerate_e8_full(|done, total| {
            eprintln!("coset {}/{}", done, total);
        })?,
        "E8" => return Err(bad("E8 enumeration takes minutes; pass --expensive")),
        _ => return Err(bad(format!("unknown group {:?}; expected E7+, G2 or E8", group))),
    };
    std::fs::write(out, ds.to_text())?;
    Ok(format!("{}: order {}, {} classes -> {}\n", ds.name, ds.order, ds.classes.len(), out.display()))
}

fn borcherds(as_json: bool, cache: Option<&Path>) -> Result<String, PipelineError> {
    let c = build_tables(&data_dir(), Limits { so7: 23, so9: 23, so8: 23, g2: 0 }, cache, false)?;
    let blocks = borcherds_blocks(&c.tables).map_err(crate::arthur::ArthurError::from)?;
    let params = enumerate_so25_trivial(&blocks);
    let mults = multiplicities_so25(&params);
    render(&params, &mults, &c.tables, as_json)
}

fn search28(as_json: bool, cache: Option<&Path>) -> Result<String, PipelineError> {
    let c = build_tables(&data_dir(), Limits { so7: 27, so9: 27, so8: 27, g2: 0 }, cache, false)?;
    let params = search_tempered_28(&c.tables)?;
    let mults = vec![1; params.len()];
    render(&params, &mults, &c.tables, as_json)
}

fn render(
    params: &[crate::arthur::ArthurParameter],
    mults: &[u64],
    tables: &crate::basecounts::CountTables,
    as_json: bool,
) -> Result<String, PipelineError> {
    if as_json {
        let rows: Vec<_> = params
            .iter()
            .zip(mults)
            .map(|(p, m)| json!({ "name": p.render(Some(tables)), "multiplicity": m, "parameter": p }))
            .collect();
        return Ok(serde_json::to_string_pretty(&rows).map_err(|e| bad(e.to_string()))? + "\n");
    }
    Ok(params.iter().map(|p| p.render(Some(tables)) + "\n").collect())
}

/// Runs one command, writing its output; returns false when a check failed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool, PipelineError> {
    let (text, ok) = match cli.command {
        Command::Dim { group, weight, weight_hodge, exact } => (dim(&group, weight, weight_hodge, exact)?, true),
        Command::Tables { group, max_w1, out, partition, recompute } => {
            (tables(&group, max_w1, &out, partition, recompute)?, true)
        }
        Command::Verify { group } => verify(&group)?,
        Command::Enumerate { group, out, expensive } => (enumerate(&group, &out, expensive)?, true),
        Command::Borcherds { json, cache } => (borcherds(json, cache.as_deref())?, true),
        Command::Search28 { json, cache } => (search28(json, cache.as_deref())?, true),
    };
    out.write_all(text.as_bytes())?;
    Ok(ok)
}
