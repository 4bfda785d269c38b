//! Python bindings for `lmrd_core`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lmrd_core::bounds::{self, AqResolver, BoundReport, Params, Prop0Outcome};
use lmrd_core::cdc;
use lmrd_core::cli::codefile;
use lmrd_core::gf;
use lmrd_core::linalg;
use lmrd_core::qcomb;
use lmrd_core::rankmetric::{self, VerifyMode};
use lmrd_core::search;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(frozen, from_py_object, module = "lmrd")]
#[derive(Clone)]
struct Field(gf::Field);

#[pymethods]
impl Field {
    #[new]
    fn new(q: u32) -> PyResult<Self> {
        gf::Field::new(q).map(Field).map_err(err)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    fn add(&self, a: u16, b: u16) -> PyResult<u16> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.0.add(a, b))
    }

    fn mul(&self, a: u16, b: u16) -> PyResult<u16> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.0.mul(a, b))
    }

    fn inv(&self, a: u16) -> PyResult<u16> {
        self.check(a)?;
        self.0
            .inv(a)
            .ok_or_else(|| PyValueError::new_err("zero has no inverse"))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.q())
    }
}

impl Field {
    fn check(&self, a: u16) -> PyResult<()> {
        if (a as u32) < self.0.q() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!(
                "{a} is not an element of GF({})",
                self.0.q()
            )))
        }
    }
}

/// A subspace of `F_q^v`, stored by its reduced row echelon basis.
#[pyclass(frozen, eq, hash, from_py_object, module = "lmrd")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Subspace(linalg::Subspace);

#[pymethods]
impl Subspace {
    /// Row span of `rows`, each a list of field elements.
    #[new]
    #[pyo3(signature = (field, rows, v = None))]
    fn new(field: &Field, rows: Vec<Vec<u32>>, v: Option<usize>) -> PyResult<Self> {
        let width = match (rows.first(), v) {
            (Some(r), _) => r.len(),
            (None, Some(v)) => v,
            (None, None) => return Err(PyValueError::new_err("empty row list needs v")),
        };
        if rows.is_empty() {
            return Ok(Subspace(linalg::Subspace::zero(&field.0, width)));
        }
        let m = linalg::FqMatrix::from_rows(&field.0, &rows).map_err(err)?;
        Ok(Subspace(linalg::Subspace::from_rows(&m)))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    fn basis(&self) -> Vec<Vec<u16>> {
        let b = self.0.basis();
        (0..b.rows()).map(|r| b.row(r).to_vec()).collect()
    }

    fn pivots(&self) -> Vec<usize> {
        self.0.pivots()
    }

    fn pivot_vector(&self) -> String {
        self.0.pivot_vector().to_string()
    }

    fn distance(&self, other: &Subspace) -> PyResult<usize> {
        self.0.distance(&other.0).map_err(err)
    }

    fn intersection(&self, other: &Subspace) -> PyResult<Subspace> {
        self.0.intersection(&other.0).map(Subspace).map_err(err)
    }

    fn sum(&self, other: &Subspace) -> PyResult<Subspace> {
        self.0.sum(&other.0).map(Subspace).map_err(err)
    }

    fn orthogonal_complement(&self) -> Subspace {
        Subspace(self.0.orthogonal_complement())
    }

    fn contains(&self, other: &Subspace) -> PyResult<bool> {
        self.0.contains(&other.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Subspace({:?})", self.0.to_strings())
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "lmrd")]
#[derive(Clone)]
struct Verification {
    min_distance: Option<usize>,
    witness: Option<(usize, usize)>,
    claimed: usize,
    route: String,
    ok: bool,
}

impl From<cdc::Verification> for Verification {
    fn from(v: cdc::Verification) -> Self {
        Verification {
            ok: v.meets_claim(),
            min_distance: v.min_distance,
            witness: v.witness,
            claimed: v.claimed,
            route: serde_json::to_value(v.route)
                .ok()
                .and_then(|x| x.as_str().map(String::from))
                .unwrap_or_default(),
        }
    }
}

#[pymethods]
impl Verification {
    fn __repr__(&self) -> String {
        format!(
            "Verification(min_distance={:?}, claimed={}, route={:?}, ok={})",
            self.min_distance, self.claimed, self.route, self.ok
        )
    }
}

/// A constant dimension code.
#[pyclass(skip_from_py_object, module = "lmrd")]
#[derive(Clone)]
struct Cdc(cdc::Cdc);

#[pymethods]
impl Cdc {
    #[new]
    fn new(field: &Field, v: usize, k: usize, d: usize, words: Vec<Subspace>) -> PyResult<Self> {
        cdc::Cdc::new(&field.0, v, k, d, words.into_iter().map(|s| s.0).collect())
            .map(Cdc)
            .map_err(err)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().q()
    }

    #[getter]
    fn v(&self) -> usize {
        self.0.v()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.claimed_d()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn codewords(&self) -> Vec<Subspace> {
        self.0.codewords().iter().cloned().map(Subspace).collect()
    }

    fn verify(&self, py: Python<'_>) -> Verification {
        let c = &self.0;
        py.detach(|| cdc::verify_cdc(c)).into()
    }

    fn union(&self, other: &Cdc) -> PyResult<Cdc> {
        self.0.union(&other.0).map(Cdc).map_err(err)
    }

    fn dual(&self) -> Cdc {
        Cdc(self.0.dual())
    }

    /// `{t: |S_t|}` over codewords outside the standard LMRD.
    fn st_profile(&self) -> PyResult<std::collections::BTreeMap<usize, usize>> {
        cdc::st_profile(&self.0).map(|p| p.counts).map_err(err)
    }

    fn to_text(&self) -> String {
        codefile::serialize(&self.0)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Cdc> {
        codefile::parse(text).map(|f| Cdc(f.code)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Cdc(q={}, v={}, k={}, d={}, size={})",
            self.0.field().q(),
            self.0.v(),
            self.0.k(),
            self.0.claimed_d(),
            self.0.len()
        )
    }
}

/// A rank metric code of `m x n` matrices.
#[pyclass(frozen, module = "lmrd")]
struct RankCode(rankmetric::RankCode);

#[pymethods]
impl RankCode {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    #[getter]
    fn size(&self) -> BigInt {
        self.0.size()
    }

    /// Exact minimum rank distance, `None` for codes with one word.
    fn min_rank_distance(&self, py: Python<'_>) -> PyResult<Option<usize>> {
        let c = &self.0;
        let mode = if c.is_linear() {
            VerifyMode::Linear
        } else {
            VerifyMode::Exhaustive
        };
        py.detach(|| c.verify_min_rank_distance(mode)).map_err(err)
    }

    fn lift(&self) -> PyResult<Cdc> {
        cdc::lift(&self.0).map(Cdc).map_err(err)
    }

    fn compose(&self, other: &RankCode) -> PyResult<RankCode> {
        rankmetric::block_compose(&self.0, &other.0)
            .map(RankCode)
            .map_err(err)
    }
}

#[pyclass(frozen, get_all, name = "Bound", module = "lmrd")]
struct UpperBound {
    value: BigInt,
    rule: String,
    trace: String,
    json: String,
}

impl From<BoundReport> for UpperBound {
    fn from(r: BoundReport) -> Self {
        UpperBound {
            value: r.value.clone(),
            rule: r.rule.to_string(),
            trace: r.trace(),
            json: serde_json::to_string(&r).expect("report serializes"),
        }
    }
}

#[pymethods]
impl UpperBound {
    fn __repr__(&self) -> String {
        format!("Bound({}, rule={:?})", self.value, self.rule)
    }
}

#[pyfunction]
fn q_binomial(v: i64, k: i64, q: u32) -> BigInt {
    qcomb::q_binomial(v, k, q)
}

#[pyfunction]
fn gabidulin(field: &Field, m: usize, n: usize, delta: usize) -> PyResult<RankCode> {
    rankmetric::gabidulin(&field.0, m, n, delta)
        .map(RankCode)
        .map_err(err)
}

#[pyfunction]
fn standard_lmrd(field: &Field, v: usize, k: usize, d: usize) -> PyResult<Cdc> {
    cdc::standard_lmrd(&field.0, v, k, d).map(Cdc).map_err(err)
}

#[pyfunction]
fn family_6l(field: &Field, l: usize) -> PyResult<Cdc> {
    cdc::family_6l(&field.0, l).map(Cdc).map_err(err)
}

#[pyfunction]
fn family_6_3l(field: &Field, l: usize) -> PyResult<Cdc> {
    cdc::family_6_3l(&field.0, l).map(Cdc).map_err(err)
}

#[pyfunction]
fn grassmannian(field: &Field, v: usize, k: usize) -> Vec<Subspace> {
    linalg::grassmannian(&field.0, v, k)
        .into_iter()
        .map(Subspace)
        .collect()
}

/// Best available upper bound on `A_q(v, d; k)`.
#[pyfunction]
fn upper_bound(q: u32, v: i64, d: i64, k: i64) -> UpperBound {
    AqResolver::default().resolve(q, v, d, k).into()
}

/// Upper bound on codes containing the standard LMRD, `None` when no such
/// bound is known (`k >= 3d/2`).
#[pyfunction]
fn lmrd_upper_bound(q: u32, v: i64, d: i64, k: i64) -> PyResult<Option<UpperBound>> {
    match bounds::prop0_bound(Params::new(q, v, d, k), &AqResolver::default()).map_err(err)? {
        Prop0Outcome::Bound(b) => Ok(Some(b.into())),
        Prop0Outcome::NoLmrdBoundKnown => Ok(None),
    }
}

#[pyfunction]
fn prop1_bound(q: u32, v: i64, d: i64, k: i64) -> PyResult<UpperBound> {
    bounds::prop1_bound(Params::new(q, v, d, k), &AqResolver::default())
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn st_cap(q: u32, v: i64, d: i64, k: i64, t: i64) -> PyResult<UpperBound> {
    bounds::st_cap(Params::new(q, v, d, k), t, &AqResolver::default())
        .map(Into::into)
        .map_err(err)
}

/// Randomized extension of the standard LMRD. Returns the extension and the
/// per-restart counts.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (subcode, v, k, d, n_max = 1, r_max = 100, seed = 0))]
fn extend_lmrd(
    py: Python<'_>,
    subcode: &Cdc,
    v: usize,
    k: usize,
    d: usize,
    n_max: usize,
    r_max: usize,
    seed: u64,
) -> PyResult<(Cdc, Vec<usize>)> {
    let cfg = search::SearchConfig {
        subcode: subcode.0.clone(),
        n_max,
        r_max,
        seed,
    };
    let out = py
        .detach(|| search::extend_lmrd(&cfg, v, k, d))
        .map_err(err)?;
    Ok((Cdc(out.extension), out.per_restart))
}

/// The `(10, 32923, 6; 5)_2` code built from orbits of the built-in generator.
#[pyfunction]
fn record_code(py: Python<'_>) -> PyResult<Cdc> {
    py.detach(search::record_code)
        .map(|(c, _)| Cdc(c))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn lmrd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Subspace>()?;
    m.add_class::<Cdc>()?;
    m.add_class::<RankCode>()?;
    m.add_class::<Verification>()?;
    m.add_class::<UpperBound>()?;
    m.add_function(wrap_pyfunction!(q_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(gabidulin, m)?)?;
    m.add_function(wrap_pyfunction!(standard_lmrd, m)?)?;
    m.add_function(wrap_pyfunction!(family_6l, m)?)?;
    m.add_function(wrap_pyfunction!(family_6_3l, m)?)?;
    m.add_function(wrap_pyfunction!(grassmannian, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(lmrd_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(prop1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(st_cap, m)?)?;
    m.add_function(wrap_pyfunction!(extend_lmrd, m)?)?;
    m.add_function(wrap_pyfunction!(record_code, m)?)?;
    Ok(())
}
