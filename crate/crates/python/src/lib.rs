use std::collections::BTreeMap;
use std::time::Duration;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use ks_forge::{catalog, iso, mmp, pipeline, states, subsets, vectors};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An MMP diagram. Construct from text such as `"1234,4567."`.
#[pyclass(name = "MmpDiagram", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDiagram(mmp::MmpDiagram);

#[pymethods]
impl PyDiagram {
    #[new]
    #[pyo3(signature = (text, dim = 4))]
    fn new(text: &str, dim: usize) -> PyResult<Self> {
        let dim = match dim {
            3 => mmp::Dim::Three,
            4 => mmp::Dim::Four,
            _ => return Err(PyValueError::new_err("dim must be 3 or 4")),
        };
        mmp::parse_mmp_dim(text, dim)
            .map(PyDiagram)
            .map_err(value_error)
    }

    /// The diagram with the hexagon prepended.
    #[staticmethod]
    fn with_hexagon(fragment: &PyDiagram) -> PyResult<Self> {
        mmp::MmpDiagram::with_hexagon(&fragment.0)
            .map(PyDiagram)
            .map_err(value_error)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    #[getter]
    fn size_label(&self) -> String {
        self.0.size_label()
    }

    fn edges(&self) -> Vec<String> {
        self.0.edges().iter().map(|e| e.to_string()).collect()
    }

    fn delete_edge(&self, index: usize) -> PyResult<Self> {
        self.0
            .delete_edge(index)
            .map(PyDiagram)
            .map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MmpDiagram('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        self.0.edge_count()
    }
}

/// Vertex symbol to ray text.
type RayMap = BTreeMap<String, String>;

fn assignment_to_map(va: &vectors::VectorAssignment) -> RayMap {
    va.iter()
        .map(|(v, r)| (v.to_string(), r.to_string()))
        .collect()
}

fn map_to_assignment(rays: &RayMap) -> PyResult<vectors::VectorAssignment> {
    let text: String = rays.iter().map(|(v, r)| format!("{v}: {r}\n")).collect();
    vectors::VectorAssignment::parse(&text).map_err(value_error)
}

fn load_pool(pool: &str) -> PyResult<vectors::CandidatePool> {
    match pool {
        "m101" => Ok(vectors::standard_pool_m101()),
        "table2-22-11" => Ok(catalog::pool_22_11()),
        text => vectors::CandidatePool::parse(text).map_err(value_error),
    }
}

#[pyfunction]
fn is_ks(d: &PyDiagram) -> bool {
    states::is_ks(&d.0)
}

#[pyfunction]
fn count_01_states(d: &PyDiagram) -> u64 {
    states::count_01_states(&d.0)
}

/// One 0-1 state as a map from vertex symbol to 0 or 1, or None.
#[pyfunction]
fn find_01_state(d: &PyDiagram) -> Option<BTreeMap<String, u8>> {
    states::find_01_state(&d.0).map(|s| s.iter().map(|(v, b)| (v.to_string(), b as u8)).collect())
}

#[pyfunction]
fn canonical_form(d: &PyDiagram) -> String {
    iso::canonical_form(&d.0).into_string()
}

#[pyfunction]
fn canonical_diagram(d: &PyDiagram) -> PyDiagram {
    PyDiagram(iso::canonical_diagram(&d.0))
}

#[pyfunction]
fn is_isomorphic(a: &PyDiagram, b: &PyDiagram) -> bool {
    iso::is_isomorphic(&a.0, &b.0)
}

/// Edge mapping from `test` into `reference` as (test edge, reference edge)
/// strings, or None.
#[pyfunction]
fn is_subgraph(test: &PyDiagram, reference: &PyDiagram) -> Option<Vec<(String, String)>> {
    iso::is_subgraph(&test.0, &reference.0).map(|m| {
        m.pairs
            .iter()
            .map(|&(t, r)| {
                (
                    test.0.edges()[t].to_string(),
                    reference.0.edges()[r].to_string(),
                )
            })
            .collect()
    })
}

#[pyfunction]
#[pyo3(signature = (d, suppress_isolated = true, dedup = false))]
fn edge_subsets(d: &PyDiagram, suppress_isolated: bool, dedup: bool) -> PyResult<Vec<PyDiagram>> {
    if d.0.edge_count() >= 64 {
        return Err(PyValueError::new_err("subsets need fewer than 64 edges"));
    }
    let all = subsets::enumerate_edge_subsets(&d.0, suppress_isolated);
    Ok(if dedup {
        subsets::dedup_isomorphs(all).map(PyDiagram).collect()
    } else {
        all.map(PyDiagram).collect()
    })
}

#[pyfunction]
fn verify_assignment(d: &PyDiagram, rays: RayMap) -> PyResult<bool> {
    Ok(vectors::verify_assignment(&d.0, &map_to_assignment(&rays)?))
}

/// Returns ("assigned", rays), ("no-solution", None) or
/// ("indeterminate", None). `pool` is "m101", "table2-22-11" or the text of
/// a pool file.
#[pyfunction]
#[pyo3(signature = (d, pool = "m101", timeout = 10.0, reduce = false))]
fn vectorfind(
    d: &PyDiagram,
    pool: &str,
    timeout: f64,
    reduce: bool,
) -> PyResult<(&'static str, Option<RayMap>)> {
    let pool = load_pool(pool)?;
    let timeout = Duration::try_from_secs_f64(timeout).map_err(value_error)?;
    let outcome = if reduce {
        vectors::realize_shared_from_pool(&d.0, &pool, Some(timeout))
    } else {
        vectors::vectorfind(&d.0, &pool, Some(timeout))
    };
    Ok(match outcome {
        vectors::VectorFindOutcome::Assigned(va) => ("assigned", Some(assignment_to_map(&va))),
        vectors::VectorFindOutcome::NoSolution => ("no-solution", None),
        vectors::VectorFindOutcome::Indeterminate => ("indeterminate", None),
    })
}

#[pyfunction]
fn orthogonality_equations(d: &PyDiagram) -> Vec<String> {
    vectors::orthogonality_system(&d.0)
        .iter()
        .map(|e| e.to_string())
        .collect()
}

#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    catalog::list_names()
}

#[pyfunction]
fn catalog_get(name: &str) -> PyResult<PyDiagram> {
    catalog::get(name)
        .map(|s| PyDiagram(s.diagram))
        .map_err(|e| PyKeyError::new_err(e.to_string()))
}

#[pyfunction]
fn catalog_vectors(name: &str) -> PyResult<Option<RayMap>> {
    catalog::get(name)
        .map(|s| s.vectors.as_ref().map(assignment_to_map))
        .map_err(|e| PyKeyError::new_err(e.to_string()))
}

/// (is_critical, canonical key of a critical KS subset or None).
#[pyfunction]
fn criticality(d: &PyDiagram) -> (bool, Option<String>) {
    let r = pipeline::criticality(&d.0);
    (r.is_critical, r.witness.map(|w| w.into_string()))
}

#[pyfunction]
fn max_edge_loop(d: &PyDiagram) -> usize {
    pipeline::max_edge_loop(&d.0)
}

/// Classification of the KS subsets of Peres 24-24: (table TSV,
/// representatives). Takes about a minute per core.
#[pyfunction]
fn classify_peres(py: Python<'_>) -> (String, Vec<PyDiagram>) {
    let c = py.detach(pipeline::reproduce_table1);
    let reps = c
        .representatives
        .into_iter()
        .map(|r| PyDiagram(r.diagram))
        .collect();
    (c.table.to_tsv(), reps)
}

#[pymodule]
#[pyo3(name = "ks_forge")]
fn py_module(module: &Bound<'_, PyModule>) -> PyResult<()> {
    module.add_class::<PyDiagram>()?;
    module.add_function(wrap_pyfunction!(is_ks, module)?)?;
    module.add_function(wrap_pyfunction!(count_01_states, module)?)?;
    module.add_function(wrap_pyfunction!(find_01_state, module)?)?;
    module.add_function(wrap_pyfunction!(canonical_form, module)?)?;
    module.add_function(wrap_pyfunction!(canonical_diagram, module)?)?;
    module.add_function(wrap_pyfunction!(is_isomorphic, module)?)?;
    module.add_function(wrap_pyfunction!(is_subgraph, module)?)?;
    module.add_function(wrap_pyfunction!(edge_subsets, module)?)?;
    module.add_function(wrap_pyfunction!(verify_assignment, module)?)?;
    module.add_function(wrap_pyfunction!(vectorfind, module)?)?;
    module.add_function(wrap_pyfunction!(orthogonality_equations, module)?)?;
    module.add_function(wrap_pyfunction!(catalog_names, module)?)?;
    module.add_function(wrap_pyfunction!(catalog_get, module)?)?;
    module.add_function(wrap_pyfunction!(catalog_vectors, module)?)?;
    module.add_function(wrap_pyfunction!(criticality, module)?)?;
    module.add_function(wrap_pyfunction!(max_edge_loop, module)?)?;
    module.add_function(wrap_pyfunction!(classify_peres, module)?)?;
    Ok(())
}
