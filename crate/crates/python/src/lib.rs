//! Python bindings: `import ramfilt`.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ramfilt::classify::{self, Verdict};
use ramfilt::construct::construct_extension;
use ramfilt::ramification::{self, JumpSequence};
use ramfilt::{atlas, units, ElementRepr, Error, FieldSpec, KModP, RingElement, Subspace};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::SelfVerificationFailed(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// An element given as an integer or as e lists of f coefficients.
#[derive(FromPyObject)]
enum PyElement {
    Int(i64),
    Poly(Vec<Vec<i64>>),
}

impl From<PyElement> for ElementRepr {
    fn from(e: PyElement) -> Self {
        match e {
            PyElement::Int(a) => ElementRepr::Int(a),
            PyElement::Poly(p) => ElementRepr::Poly(p),
        }
    }
}

type PyVerdict = (bool, Option<String>, Option<usize>);
type Witness = (Vec<Vec<u64>>, Option<Vec<Vec<Vec<u64>>>>);

fn verdict(v: Verdict) -> PyVerdict {
    (v.admissible, v.reason.map(|r| r.to_string()), v.index)
}

fn pairs(s: &JumpSequence) -> Vec<(i64, u32)> {
    s.pairs().to_vec()
}

/// A p-adic field K = W(F_q)[x]/(E) together with K^×/(K^×)^p.
#[pyclass(frozen, name = "Field", module = "ramfilt")]
struct PyField {
    k: Arc<FieldSpec>,
    v: KModP,
}

impl PyField {
    fn element(&self, a: PyElement) -> PyResult<RingElement> {
        RingElement::from_repr(&self.k, &a.into()).map_err(py_err)
    }

    fn subspace(&self, rows: Vec<Vec<i64>>) -> PyResult<Subspace> {
        let p = self.k.p() as i64;
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|c| c.rem_euclid(p) as u64).collect())
            .collect();
        Subspace::span(&rows, self.v.dim(), self.v.p()).map_err(py_err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, g, eisenstein, precision = 0))]
    fn new(p: u64, g: Vec<i64>, eisenstein: Vec<Vec<i64>>, precision: u32) -> PyResult<Self> {
        let k = FieldSpec::new(p, &g, &eisenstein, precision).map_err(py_err)?;
        let v = KModP::new(&k);
        Ok(Self { k, v })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let k = FieldSpec::from_json(text).map_err(py_err)?;
        let v = KModP::new(&k);
        Ok(Self { k, v })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.k.p()
    }

    #[getter]
    fn e(&self) -> usize {
        self.k.e()
    }

    #[getter]
    fn f(&self) -> usize {
        self.k.f()
    }

    #[getter]
    fn n(&self) -> usize {
        self.k.n()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.k.q()
    }

    #[getter]
    fn crit(&self) -> (u64, u64) {
        self.k.crit()
    }

    #[getter]
    fn crit_int(&self) -> Option<u32> {
        self.k.crit_int()
    }

    #[getter]
    fn levels(&self) -> Vec<u32> {
        self.k.levels().to_vec()
    }

    #[getter]
    fn zeta_p(&self) -> bool {
        self.k.zeta_p()
    }

    #[getter]
    fn dim_v(&self) -> usize {
        self.v.dim()
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        self.v.label_strings()
    }

    /// Field summary as a JSON string.
    fn describe(&self) -> PyResult<String> {
        let s = atlas::describe_field(&self.k).map_err(py_err)?;
        Ok(serde_json::to_string(&s).expect("summary serializes"))
    }

    fn reduce(&self, a: PyElement) -> PyResult<Vec<Vec<u64>>> {
        Ok(self.element(a)?.to_repr())
    }

    fn coordinates(&self, a: PyElement) -> PyResult<Vec<u64>> {
        let a = self.element(a)?;
        self.v.coordinates(&a).map_err(py_err)
    }

    fn is_pth_power(&self, a: PyElement) -> PyResult<bool> {
        let a = self.element(a)?;
        let v = a.valuation().ok_or_else(|| py_err(Error::ZeroInput))?;
        units::is_pth_power(&a, v).map_err(py_err)
    }

    /// Exponents of the η_(x,y) and ω_* in a principal unit, as JSON.
    #[pyo3(signature = (u, exp_prec = 1))]
    fn decompose(&self, u: PyElement, exp_prec: u32) -> PyResult<String> {
        let u = self.element(u)?;
        let d = units::decompose(&u, exp_prec).map_err(py_err)?;
        Ok(serde_json::to_string(&d).expect("decomposition serializes"))
    }

    fn unit_level_image(&self, j: u32) -> Vec<Vec<u64>> {
        self.v.unit_level_image(j).rows()
    }

    fn jump_of_hyperplane(&self, rows: Vec<Vec<i64>>) -> PyResult<i64> {
        let n = self.subspace(rows)?;
        ramification::jump_of_hyperplane(&self.v, &n).map_err(py_err)
    }

    /// Jumps of the extension with normic subspace spanned by `rows`.
    fn filtration(&self, rows: Vec<Vec<i64>>) -> PyResult<Vec<(i64, u32)>> {
        let n = self.subspace(rows)?;
        ramification::filtration(&self.v, &n)
            .map(|s| pairs(&s))
            .map_err(py_err)
    }

    fn kummer_jump(&self, a: PyElement) -> PyResult<i64> {
        let c = self.coordinates(a)?;
        ramification::kummer_jump(&self.v, &c).map_err(py_err)
    }

    /// Jumps of K(a^(1/p) : a in radicands).
    fn kummer_filtration(&self, radicands: Vec<PyElement>) -> PyResult<Vec<(i64, u32)>> {
        let coords = radicands
            .into_iter()
            .map(|a| self.coordinates(a))
            .collect::<PyResult<Vec<_>>>()?;
        ramification::kummer_filtration(&self.v, &coords)
            .map(|s| pairs(&s))
            .map_err(py_err)
    }

    fn is_admissible(&self, seq: Vec<(i64, i64)>) -> PyResult<PyVerdict> {
        classify::is_admissible(&self.k, &seq)
            .map(verdict)
            .map_err(py_err)
    }

    fn cyclic_check(&self, jumps: Vec<i64>) -> PyResult<PyVerdict> {
        classify::cyclic_check(&self.k, &jumps)
            .map(verdict)
            .map_err(py_err)
    }

    fn ckp_degree(&self) -> Option<u128> {
        classify::ckp_degree(&self.k)
    }

    fn ckp_filtration(&self) -> Vec<(i64, u32)> {
        pairs(&classify::ckp_filtration(&self.k))
    }

    /// Normic basis rows and, when ζ_p ∈ K, the Kummer radicands.
    fn construct(&self, seq: Vec<(i64, u32)>) -> PyResult<Witness> {
        let s = JumpSequence::new(seq).map_err(py_err)?;
        let w = construct_extension(&self.v, &s).map_err(py_err)?;
        let gens = w
            .kummer
            .map(|gs| gs.iter().map(|g| g.element.to_repr()).collect());
        Ok((w.normic.rows(), gens))
    }

    /// The atlas report as a JSON string.
    #[pyo3(signature = (max_codim = 4))]
    fn atlas(&self, py: Python<'_>, max_codim: usize) -> PyResult<String> {
        let k = self.k.clone();
        let r = py
            .detach(move || atlas::atlas(&k, max_codim))
            .map_err(py_err)?;
        Ok(serde_json::to_string(&r).expect("report serializes"))
    }

    fn __repr__(&self) -> String {
        let src = self.k.source();
        format!(
            "Field(p={}, g={:?}, E={:?}, precision={})",
            src.p, src.g, src.eisenstein, src.precision
        )
    }
}

#[pyfunction]
fn herbrand_psi(p: u64, t: i64, nu: i64) -> i64 {
    ramification::herbrand_psi_degree_p(p, t, nu)
}

#[pyfunction]
fn jump_discriminant(p: u64, t: i64) -> i64 {
    ramification::jump_discriminant(p, t)
}

#[pyfunction]
fn disc_to_jump(p: u64, d: i64) -> PyResult<i64> {
    ramification::disc_to_jump(p, d).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "ramfilt")]
pub fn ramfilt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(herbrand_psi, m)?)?;
    m.add_function(wrap_pyfunction!(jump_discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(disc_to_jump, m)?)?;
    Ok(())
}
