//! Python bindings. Elements of GF(q) are ints, elements of GF(q^2) are
//! `(a, b)` tuples meaning `a + i*b`, and structured results come back as
//! dicts.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use ::permtri::classifier::{classify, enumerate_with_summary, Mode};
use ::permtri::cli::verify_pair;
use ::permtri::curve::{count_points_off_diagonal, gamma_coeffs, split_analysis};
use ::permtri::fields::{ExtCtx, FieldCtx, Fq2Elem, FqElem};
use ::permtri::symbolic::{run_suite, Suite};
use ::permtri::trinomial::{PairAB, TrinomialCtx};
use ::permtri::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// GF(2^m) with the given (or smallest irreducible) modulus.
#[pyclass(name = "Field", module = "permtri")]
struct PyField {
    inner: FieldCtx,
}

impl PyField {
    fn elem(&self, x: u32) -> PyResult<FqElem> {
        if x >= self.inner.q() {
            return Err(err(Error::NotInField(x)));
        }
        Ok(FqElem(x))
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (m, modulus=None))]
    fn new(m: u32, modulus: Option<u64>) -> PyResult<Self> {
        Ok(PyField { inner: FieldCtx::new(m, modulus).map_err(err)? })
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    fn mul(&self, x: u32, y: u32) -> PyResult<u32> {
        Ok(self.inner.mul(self.elem(x)?, self.elem(y)?).0)
    }

    fn inv(&self, x: u32) -> PyResult<u32> {
        Ok(self.inner.inv(self.elem(x)?).map_err(err)?.0)
    }

    fn sqrt(&self, x: u32) -> PyResult<u32> {
        Ok(self.inner.sqrt(self.elem(x)?).0)
    }

    fn trace(&self, x: u32) -> PyResult<u32> {
        Ok(self.inner.trace(self.elem(x)?) as u32)
    }

    /// Roots of `a T^2 + b T + c` in GF(q), ascending.
    fn solve_quadratic(&self, a: u32, b: u32, c: u32) -> PyResult<Vec<u32>> {
        let roots = self
            .inner
            .solve_quadratic(self.elem(a)?, self.elem(b)?, self.elem(c)?)
            .map_err(err)?;
        Ok(roots.into_iter().map(|r| r.0).collect())
    }

    fn __repr__(&self) -> String {
        format!("Field(m={}, modulus={:#x})", self.inner.m(), self.inner.modulus())
    }
}

type PairTuple = ((u32, u32), (u32, u32));

/// The trinomial family over GF(q^2), q = 2^m.
#[pyclass(name = "Trinomials", module = "permtri")]
struct PyTrinomials {
    inner: TrinomialCtx,
}

impl PyTrinomials {
    fn ext(&self) -> &ExtCtx {
        self.inner.ext()
    }

    fn pair(&self, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<PairAB> {
        let alpha = Fq2Elem::new(alpha.0, alpha.1);
        let beta = Fq2Elem::new(beta.0, beta.1);
        for z in [alpha, beta] {
            if !self.ext().contains(z) {
                return Err(err(Error::NotInField(z.a.0.max(z.b.0))));
            }
        }
        PairAB::new(alpha, beta).map_err(err)
    }
}

#[pymethods]
impl PyTrinomials {
    #[new]
    #[pyo3(signature = (m, modulus=None, k=None))]
    fn new(m: u32, modulus: Option<u64>, k: Option<u32>) -> PyResult<Self> {
        let ext = ExtCtx::new(FieldCtx::new(m, modulus).map_err(err)?, k.map(FqElem)).map_err(err)?;
        Ok(PyTrinomials { inner: TrinomialCtx::new(ext) })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.ext().q()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.ext().k().0
    }

    #[getter]
    fn pair_count(&self) -> u64 {
        self.inner.pair_count()
    }

    fn is_pp_bruteforce(&self, py: Python<'_>, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<bool> {
        let pair = self.pair(alpha, beta)?;
        Ok(py.detach(|| self.inner.is_pp_bruteforce(&pair)))
    }

    fn is_perm_mu(&self, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<bool> {
        Ok(self.inner.is_perm_mu(&self.pair(alpha, beta)?))
    }

    fn has_mu_pole(&self, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<bool> {
        Ok(self.inner.has_mu_pole(&self.pair(alpha, beta)?))
    }

    fn classify<'py>(&self, py: Python<'py>, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<Bound<'py, PyAny>> {
        let c = classify(self.ext(), &self.pair(alpha, beta)?).map_err(err)?;
        to_py(py, &c)
    }

    /// `gamma[j][l]`, the coefficient of `x^j y^l`.
    fn curve_coeffs(&self, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<Vec<Vec<u32>>> {
        let [a, b, c, d] = self.pair(alpha, beta)?.coords();
        let g = gamma_coeffs(self.ext(), a, b, c, d);
        Ok(g.gamma.iter().map(|row| row.iter().map(|x| x.0).collect()).collect())
    }

    fn count_points_off_diagonal(&self, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<u64> {
        let [a, b, c, d] = self.pair(alpha, beta)?.coords();
        Ok(count_points_off_diagonal(self.ext().base(), &gamma_coeffs(self.ext(), a, b, c, d)))
    }

    fn split<'py>(&self, py: Python<'py>, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<Bound<'py, PyAny>> {
        let [a, b, c, d] = self.pair(alpha, beta)?.coords();
        to_py(py, &split_analysis(self.ext(), a, b, c, d).map_err(err)?)
    }

    fn verify_pair<'py>(&self, py: Python<'py>, alpha: (u32, u32), beta: (u32, u32)) -> PyResult<Bound<'py, PyAny>> {
        let pair = self.pair(alpha, beta)?;
        let report = py.detach(|| verify_pair(&self.inner, &pair)).map_err(err)?;
        to_py(py, &report)
    }

    /// `(summary, pairs)` where `pairs` lists the permuting `(alpha, beta)`.
    #[pyo3(signature = (mode="mu"))]
    fn enumerate<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<(Bound<'py, PyAny>, Vec<PairTuple>)> {
        let mode = match mode {
            "bruteforce" => Mode::Bruteforce,
            "mu" => Mode::Mu,
            "condition" => Mode::Condition,
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        };
        let (records, summary) = py.detach(|| enumerate_with_summary(&self.inner, mode));
        let pairs = records
            .iter()
            .filter(|r| r.permutes)
            .map(|r| ((r.pair.alpha.a.0, r.pair.alpha.b.0), (r.pair.beta.a.0, r.pair.beta.b.0)))
            .collect();
        Ok((to_py(py, &summary)?, pairs))
    }

    fn __repr__(&self) -> String {
        format!("Trinomials(q={}, k={:#x})", self.ext().q(), self.ext().k().0)
    }
}

/// Derivation reports for `suite` in {"curve", "conics", "chains", "all"}.
#[pyfunction]
#[pyo3(signature = (suite="all"))]
fn symbolic<'py>(py: Python<'py>, suite: &str) -> PyResult<Bound<'py, PyAny>> {
    let suite = match suite {
        "curve" => Suite::Curve,
        "conics" => Suite::Conics,
        "chains" => Suite::Chains,
        "all" => Suite::All,
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    };
    let reports = py.detach(|| run_suite(suite));
    to_py(py, &reports)
}

#[pymodule]
fn permtri(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyTrinomials>()?;
    m.add_function(wrap_pyfunction!(symbolic, m)?)?;
    Ok(())
}
