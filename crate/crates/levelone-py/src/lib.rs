//! Python module `levelone`.

use std::path::PathBuf;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use levelone::arthur::{endoscopic_partition, siegel_genus3_dim, Group};
use levelone::basecounts::CuspidalLabel;
use levelone::degwcf::EvalMode;
use levelone::groupdata::{enumerate_e7_plus, enumerate_g2, verify_class_data};
use levelone::pipeline::{build_tables, data_dir, engine, load_dataset, Computed, DataGroup, Limits};
use levelone::rootsys::{weight_from_hodge, Weight};
use levelone::searches::{
    borcherds_blocks, enumerate_so25_trivial, multiplicities_so25, render_all, search_tempered_28,
};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn data_group(name: &str) -> PyResult<DataGroup> {
    DataGroup::parse(name).ok_or_else(|| err(format!("unknown group {:?}; expected E7+, E8+, E8so9 or G2", name)))
}

/// Dimension of the invariants of `group` (E7+, E8+, E8so9 or G2) in the
/// irreducible module of the given highest weight or Hodge weights.
#[pyfunction]
#[pyo3(signature = (group, weight=None, hodge=None, exact=false))]
fn dim(group: &str, weight: Option<Vec<i64>>, hodge: Option<Vec<i64>>, exact: bool) -> PyResult<BigInt> {
    let eng = engine(&data_dir(), data_group(group)?).map_err(err)?;
    let lam = match (weight, hodge) {
        (Some(w), None) => Weight(w),
        (None, Some(h)) => weight_from_hodge(&eng.datum, &h).map_err(err)?,
        _ => return Err(err("give exactly one of weight and hodge")),
    };
    if lam.0.len() != eng.datum.rank {
        return Err(err(format!("expected {} coordinates, got {}", eng.datum.rank, lam.0.len())));
    }
    let mode = if exact { EvalMode::Exact } else { EvalMode::Fast };
    eng.dimension(&lam, mode).map_err(err)
}

/// Checks a bundled dataset; returns `(passed, report)`.
#[pyfunction]
fn verify(group: &str) -> PyResult<(bool, String)> {
    let ds = load_dataset(&data_dir(), data_group(group)?).map_err(err)?;
    let r = verify_class_data(&ds);
    Ok((r.passed(), r.to_string()))
}

/// Enumerates `G2` or `E7+` from generators; returns `(order, classes)`.
#[pyfunction]
fn enumerate(group: &str) -> PyResult<(u64, usize)> {
    let ds = match group {
        "G2" => enumerate_g2(),
        "E7+" => enumerate_e7_plus(),
        _ => return Err(err(format!("unknown group {:?}; expected G2 or E7+", group))),
    }
    .map_err(err)?;
    Ok((ds.order, ds.classes.len()))
}

/// Extracted count tables and the queries built on them.
#[pyclass(frozen)]
struct Tables {
    inner: Computed,
}

fn group(name: &str) -> PyResult<Group> {
    Group::parse(name).ok_or_else(|| err(format!("unknown group {:?}", name)))
}

#[pymethods]
impl Tables {
    /// Runs the extraction up to the given bounds on `w1` (`w + v` for G2).
    #[new]
    #[pyo3(signature = (so7=31, so9=27, so8=36, g2=60, cache=None))]
    fn new(py: Python<'_>, so7: i64, so9: i64, so8: i64, g2: i64, cache: Option<PathBuf>) -> PyResult<Self> {
        let limits = Limits { so7, so9, so8, g2 };
        let inner = py.detach(|| build_tables(&data_dir(), limits, cache.as_deref(), false)).map_err(err)?;
        Ok(Tables { inner })
    }

    /// One of `S`, `O`, `O_combined`, `G2` as a dict keyed by weight tuples.
    fn table<'py>(&self, py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyDict>> {
        let t = &self.inner.tables;
        let table = match name {
            "S" => &t.s,
            "O" => &t.o,
            "O_combined" => &t.o_combined,
            "G2" => &t.g2,
            _ => return Err(err(format!("unknown table {:?}", name))),
        };
        let out = PyDict::new(py);
        for (w, v) in table {
            out.set_item(PyTuple::new(py, w)?, v)?;
        }
        Ok(out)
    }

    /// Number of symplectic cuspidal labels with these odd Hodge weights.
    fn symplectic(&self, weights: Vec<i64>) -> PyResult<u64> {
        self.inner.tables.count(&CuspidalLabel::symplectic(weights)).map_err(err)
    }

    /// Number of orthogonal cuspidal labels of rank `n` with these even weights.
    fn orthogonal(&self, n: usize, weights: Vec<i64>) -> PyResult<u64> {
        self.inner.tables.count(&CuspidalLabel::orthogonal(n, weights)).map_err(err)
    }

    /// `(name, multiplicity)` of every parameter contributing at the target.
    fn partition(&self, group_name: &str, weights: Vec<i64>) -> PyResult<Vec<(String, u64)>> {
        let listing = endoscopic_partition(group(group_name)?, &weights, &self.inner.tables).map_err(err)?;
        Ok(listing.into_iter().map(|p| (p.name, p.multiplicity)).collect())
    }

    /// Dimension of vector valued Siegel cusp forms of genus 3.
    fn genus3(&self, w1: i64, w2: i64, w3: i64) -> PyResult<u64> {
        siegel_genus3_dim(w1, w2, w3, &self.inner.tables).map_err(err)
    }

    /// `(name, multiplicity)` of the SO25 parameters with the infinitesimal
    /// character of the trivial representation.
    fn borcherds(&self) -> PyResult<Vec<(String, u64)>> {
        let t = &self.inner.tables;
        let params = enumerate_so25_trivial(&borcherds_blocks(t).map_err(err)?);
        let mults = multiplicities_so25(&params);
        Ok(render_all(&params, t).into_iter().zip(mults).collect())
    }

    /// Tempered parameters of rank 28 with Hodge weights 27, 25, ..., 1.
    fn search28(&self) -> PyResult<Vec<String>> {
        let t = &self.inner.tables;
        Ok(render_all(&search_tempered_28(t).map_err(err)?, t))
    }
}

#[pymodule]
#[pyo3(name = "levelone")]
pub fn levelone_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dim, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_class::<Tables>()?;
    Ok(())
}
