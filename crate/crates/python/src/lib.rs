//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may be ints, Fractions or `"p/q"` strings.

use polychow_core::golden::{verify_examples as run_examples, Golden, DEFAULT_GOLDEN};
use polychow_core::grassmann::{self, Sign};
use polychow_core::json::{polytope_to_json, to_pretty};
use polychow_core::linalg::{parse_rat, RatVec};
use polychow_core::polymatroid::{self, CountVec};
use polychow_core::relations::verify_balanced_identity;
use polychow_core::secondary::{self, complementary_pair_order, reorder, EnumOptions};
use polychow_core::{BlockStructure, IndexSubset, Rat};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(polychow, PolychowError, PyException);

fn err(e: polychow_core::Error) -> PyErr {
    PolychowError::new_err(e.to_string())
}

fn to_rat(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    parse_rat(x.str()?.to_str()?).map_err(err)
}

fn rat_row(row: &Bound<'_, PyAny>) -> PyResult<RatVec> {
    row.try_iter()?.map(|x| to_rat(&x?)).collect()
}

fn rat_rows(rows: &Bound<'_, PyAny>) -> PyResult<Vec<RatVec>> {
    rows.try_iter()?.map(|r| rat_row(&r?)).collect()
}

fn fraction<'py>(py: Python<'py>, x: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
}

fn fractions<'py>(py: Python<'py>, v: &[Rat]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    v.iter().map(|x| fraction(py, x)).collect()
}

fn matrix(rows: &Bound<'_, PyAny>) -> PyResult<polychow_core::Matrix> {
    polychow_core::Matrix::from_rows(rat_rows(rows)?).map_err(err)
}

fn matrix_out<'py>(py: Python<'py>, m: &polychow_core::Matrix) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    m.rows().map(|r| fractions(py, r)).collect()
}

fn blocks(parts: Vec<usize>) -> PyResult<BlockStructure> {
    BlockStructure::new(parts).map_err(err)
}

fn blocks_or_singletons(parts: Option<Vec<usize>>, n: usize) -> PyResult<BlockStructure> {
    match parts {
        Some(p) => blocks(p),
        None => Ok(BlockStructure::singletons(n)),
    }
}

/// Subsets cross as sorted tuples of 0-based indices.
fn subset(ix: Vec<usize>, n: usize) -> PyResult<IndexSubset> {
    IndexSubset::new(ix, n).map_err(err)
}

/// Exact convex polytope.
#[pyclass(name = "Polytope", frozen, from_py_object, module = "polychow")]
#[derive(Clone)]
struct PyPolytope(polychow_core::Polytope);

#[pymethods]
impl PyPolytope {
    /// Convex hull of a list of points.
    #[staticmethod]
    fn hull(points: &Bound<'_, PyAny>) -> PyResult<Self> {
        polychow_core::Polytope::hull(&rat_rows(points)?).map(Self).map_err(err)
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn affine_dim(&self) -> isize {
        self.0.affine_dim()
    }

    #[getter]
    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.0.vertices().iter().map(|v| fractions(py, v)).collect()
    }

    /// Edges as pairs of indices into `vertices`.
    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().into_iter().map(|e| (e.0, e.1)).collect()
    }

    fn contains(&self, point: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.contains(&rat_row(point)?))
    }

    fn is_vertex(&self, point: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.is_vertex(&rat_row(point)?))
    }

    fn has_edge(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.has_edge(&rat_row(a)?, &rat_row(b)?))
    }

    /// Normalized volume in the lattice of the affine span.
    fn normalized_volume(&self) -> PyResult<i64> {
        let v = self.0.normalized_volume().map_err(err)?;
        i64::try_from(v).map_err(|e| PolychowError::new_err(e.to_string()))
    }

    fn lattice_points(&self) -> Vec<Vec<i64>> {
        self.0
            .lattice_points()
            .iter()
            .map(|p| p.iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect())
            .collect()
    }

    fn to_json(&self) -> String {
        to_pretty(&polytope_to_json(&self.0))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Polytope(affine_dim={}, vertices={})", self.0.affine_dim(), self.0.vertices().len())
    }
}

/// Matroid on {0, ..., n-1} given by its bases.
#[pyclass(name = "Matroid", frozen, skip_from_py_object, module = "polychow")]
#[derive(Clone)]
struct PyMatroid(polychow_core::Matroid);

#[pymethods]
impl PyMatroid {
    #[new]
    fn new(n: usize, bases: Vec<Vec<usize>>) -> PyResult<Self> {
        let bases = bases.into_iter().map(|b| subset(b, n)).collect::<PyResult<Vec<_>>>()?;
        polychow_core::Matroid::new(n, bases).map(Self).map_err(err)
    }

    #[staticmethod]
    fn uniform(d: usize, n: usize) -> Self {
        Self(polychow_core::Matroid::uniform(d, n))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn bases(&self) -> Vec<Vec<usize>> {
        self.0.bases().iter().map(|b| b.indices().to_vec()).collect()
    }

    fn satisfies_exchange(&self) -> bool {
        self.0.satisfies_exchange()
    }

    fn dual(&self) -> Self {
        Self(self.0.dual())
    }

    fn delete(&self, removed: Vec<usize>) -> PyResult<Self> {
        self.0.delete(&subset(removed, self.0.n())?).map(Self).map_err(err)
    }

    fn contract(&self, removed: Vec<usize>) -> PyResult<Self> {
        self.0.contract(&subset(removed, self.0.n())?).map(Self).map_err(err)
    }

    fn base_polytope(&self) -> PyPolytope {
        PyPolytope(self.0.base_polytope())
    }

    /// Pushes the matroid forward along the block map.
    fn project(&self, r: Vec<usize>) -> PyResult<PyPolymatroid> {
        polymatroid::project_matroid(&self.0, &blocks(r)?).map(PyPolymatroid).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Matroid(n={}, rank={}, bases={})", self.0.n(), self.0.rank(), self.0.bases().len())
    }
}

/// Discrete polymatroid with caps and explicit bases.
#[pyclass(name = "Polymatroid", frozen, skip_from_py_object, module = "polychow")]
#[derive(Clone)]
struct PyPolymatroid(polychow_core::Polymatroid);

#[pymethods]
impl PyPolymatroid {
    #[new]
    #[pyo3(signature = (bases, caps=None))]
    fn new(bases: Vec<CountVec>, caps: Option<Vec<u32>>) -> PyResult<Self> {
        match caps {
            Some(c) => polychow_core::Polymatroid::new(c, bases),
            None => polychow_core::Polymatroid::with_derived_caps(bases),
        }
        .map(Self)
        .map_err(err)
    }

    #[getter]
    fn caps(&self) -> Vec<u32> {
        self.0.caps().to_vec()
    }

    #[getter]
    fn rank(&self) -> u32 {
        self.0.rank()
    }

    #[getter]
    fn bases(&self) -> Vec<CountVec> {
        self.0.bases().iter().cloned().collect()
    }

    fn is_valid(&self) -> bool {
        self.0.is_valid()
    }

    fn dual(&self) -> Self {
        Self(self.0.dual())
    }

    fn base_polytope(&self) -> PyPolytope {
        PyPolytope(self.0.base_polytope())
    }

    /// The matroid whose projection is this polymatroid.
    fn lift(&self) -> PyMatroid {
        PyMatroid(polymatroid::lift_polymatroid(&self.0))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Polymatroid(caps={:?}, bases={})", self.0.caps(), self.0.bases().len())
    }
}

/// λ_r(Δ(d, n)) for block sizes `r`.
#[pyfunction]
fn projected_hypersimplex(d: usize, r: Vec<usize>) -> PyResult<PyPolytope> {
    blocks(r)?.projected_hypersimplex(d).map(PyPolytope).map_err(err)
}

#[pyfunction]
fn check_exchange(bases: Vec<CountVec>) -> PyResult<bool> {
    polymatroid::check_exchange(&bases.into_iter().collect()).map_err(err)
}

#[pyfunction]
fn is_polymatroid_polytope(polytope: &PyPolytope, d: usize, r: Vec<usize>) -> PyResult<bool> {
    Ok(polymatroid::is_polymatroid_polytope(&polytope.0, d, &blocks(r)?))
}

/// Triangulations and secondary polytope of the weights of Gr(d, n) under blocks `r`.
#[pyfunction]
#[pyo3(signature = (d, n, r=None, cap=secondary::DEFAULT_CAP, jobs=1, pair_order=false))]
fn secondary_polytope<'py>(
    py: Python<'py>,
    d: usize,
    n: usize,
    r: Option<Vec<usize>>,
    cap: usize,
    jobs: usize,
    pair_order: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let b = blocks_or_singletons(r, n)?;
    if b.n() != n {
        return Err(PolychowError::new_err(format!("blocks sum to {}, expected {n}", b.n())));
    }
    let config = secondary::weight_config(d, &b).map_err(err)?;
    let perm = if pair_order {
        complementary_pair_order(d, n).ok_or_else(|| PolychowError::new_err("pair_order needs n = 2d"))?
    } else {
        (0..config.len()).collect()
    };
    let sec =
        py.detach(|| secondary::secondary_polytope(&config, EnumOptions { cap, jobs: jobs.max(1) })).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("labels", reorder(&config.names(), &perm))?;
    out.set_item("count", sec.triangulations.len())?;
    let vectors: Vec<Vec<u64>> = sec.char_vectors.iter().map(|v| reorder(v, &perm)).collect();
    out.set_item("char_vectors", vectors)?;
    let cells: Vec<Vec<Vec<String>>> = sec
        .triangulations
        .iter()
        .map(|t| t.cells().iter().map(|c| c.labels().iter().map(|&l| config.name(l)).collect()).collect())
        .collect();
    out.set_item("triangulations", cells)?;
    out.set_item("is_vertex", sec.is_vertex.clone())?;
    out.set_item("sigma", PyPolytope(sec.polytope))?;
    Ok(out)
}

/// Plücker coordinates in lexicographic order of the d-subsets.
#[pyfunction]
fn plucker<'py>(py: Python<'py>, m: &Bound<'py, PyAny>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let p = grassmann::plucker(&matrix(m)?).map_err(err)?;
    fractions(py, &p.values())
}

#[pyfunction]
fn support_matroid(m: &Bound<'_, PyAny>) -> PyResult<PyMatroid> {
    let p = grassmann::plucker(&matrix(m)?).map_err(err)?;
    grassmann::support_matroid(&p).map(PyMatroid).map_err(err)
}

#[pyfunction]
fn support_polymatroid(m: &Bound<'_, PyAny>, r: Vec<usize>) -> PyResult<PyPolymatroid> {
    grassmann::support_polymatroid(&matrix(m)?, &blocks(r)?).map(PyPolymatroid).map_err(err)
}

#[pyfunction]
fn orbit_polytope(m: &Bound<'_, PyAny>, r: Vec<usize>) -> PyResult<PyPolytope> {
    grassmann::orbit_polytope(&matrix(m)?, &blocks(r)?).map(PyPolytope).map_err(err)
}

#[pyfunction]
fn gale_dual<'py>(py: Python<'py>, m: &Bound<'py, PyAny>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let g = grassmann::gale_dual(&matrix(m)?).map_err(err)?;
    matrix_out(py, &g)
}

/// Index of the vertex-difference lattice of the orbit polytope.
#[pyfunction]
fn multiplicity_index(m: &Bound<'_, PyAny>, r: Vec<usize>) -> PyResult<String> {
    grassmann::multiplicity_index(&matrix(m)?, &blocks(r)?).map(|k| k.to_string()).map_err(err)
}

/// Same, generated by every support weight instead of vertices only.
#[pyfunction]
fn weight_multiplicity_index(m: &Bound<'_, PyAny>, r: Vec<usize>) -> PyResult<String> {
    grassmann::weight_multiplicity_index(&matrix(m)?, &blocks(r)?).map(|k| k.to_string()).map_err(err)
}

/// Both volumes for block `i` (0-based); `sign` is "+" or "-".
#[pyfunction]
fn volume_identity(d: usize, r: Vec<usize>, i: usize, sign: &str) -> PyResult<(String, String, bool)> {
    let sign = match sign {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        other => return Err(PolychowError::new_err(format!("sign must be '+' or '-', got {other:?}"))),
    };
    let v = grassmann::volume_identity_check(d, &blocks(r)?, i, sign).map_err(err)?;
    Ok((v.lhs.to_string(), v.rhs.to_string(), v.holds()))
}

#[pyfunction]
fn decomposition_check(cells: Vec<PyPolytope>, target: &PyPolytope) -> PyResult<bool> {
    let cells: Vec<_> = cells.into_iter().map(|c| c.0).collect();
    grassmann::decomposition_check(&cells, &target.0).map_err(err)
}

/// Runs the worked-example checks; returns a list of dicts.
#[pyfunction]
#[pyo3(signature = (only=None, golden=None))]
fn verify_examples<'py>(py: Python<'py>, only: Option<&str>, golden: Option<&str>) -> PyResult<Bound<'py, PyList>> {
    let g = Golden::parse(golden.unwrap_or(DEFAULT_GOLDEN)).map_err(err)?;
    let outcomes = py.detach(|| run_examples(&g, only));
    let list = PyList::empty(py);
    for o in outcomes {
        let d = PyDict::new(py);
        d.set_item("id", o.id)?;
        d.set_item("check", o.check)?;
        d.set_item("passed", o.passed)?;
        d.set_item("detail", o.detail)?;
        list.append(d)?;
    }
    Ok(list)
}

/// Divisibility findings for the balanced quartic identity.
#[pyfunction]
fn balanced_identity<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let rep = verify_balanced_identity().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("quartic_divisible", rep.quartic_divisible())?;
    d.set_item("homogeneous_divisible", rep.homogeneous_quotient.is_some())?;
    d.set_item("printed_divisible", rep.printed_quotient.is_some())?;
    d.set_item("printed_degrees", rep.printed_degrees.clone())?;
    d.set_item("printed_degree_mismatch", rep.printed_degree_mismatch())?;
    Ok(d)
}

#[pyfunction]
fn three_term_relations(d: usize, n: usize) -> PyResult<Vec<String>> {
    polychow_core::relations::three_term_relations(d, n)
        .map(|rs| rs.iter().map(ToString::to_string).collect())
        .map_err(err)
}

#[pymodule]
fn polychow(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PolychowError", m.py().get_type::<PolychowError>())?;
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyMatroid>()?;
    m.add_class::<PyPolymatroid>()?;
    for f in [
        wrap_pyfunction!(projected_hypersimplex, m)?,
        wrap_pyfunction!(check_exchange, m)?,
        wrap_pyfunction!(is_polymatroid_polytope, m)?,
        wrap_pyfunction!(secondary_polytope, m)?,
        wrap_pyfunction!(plucker, m)?,
        wrap_pyfunction!(support_matroid, m)?,
        wrap_pyfunction!(support_polymatroid, m)?,
        wrap_pyfunction!(orbit_polytope, m)?,
        wrap_pyfunction!(gale_dual, m)?,
        wrap_pyfunction!(multiplicity_index, m)?,
        wrap_pyfunction!(weight_multiplicity_index, m)?,
        wrap_pyfunction!(volume_identity, m)?,
        wrap_pyfunction!(decomposition_check, m)?,
        wrap_pyfunction!(verify_examples, m)?,
        wrap_pyfunction!(balanced_identity, m)?,
        wrap_pyfunction!(three_term_relations, m)?,
    ] {
        m.add_function(f)?;
    }
    Ok(())
}
