use properscore as ps;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

pyo3::create_exception!(properscore, ScoreError, PyValueError, "Scoring or estimation failed");
pyo3::create_exception!(properscore, DomainError, ScoreError, "Parameter outside its domain");

fn err(e: ps::ScoreError) -> PyErr {
    if e.is_parameter_domain() {
        DomainError::new_err(e.to_string())
    } else {
        ScoreError::new_err(e.to_string())
    }
}

fn tag(name: &str) -> PyResult<ps::FamilyTag> {
    name.parse()
        .map_err(|_| ScoreError::new_err(format!("unknown family '{name}'")))
}

fn dict_values(params: Option<&Bound<'_, PyDict>>) -> PyResult<Vec<(String, f64)>> {
    let mut out = Vec::new();
    if let Some(d) = params {
        for (k, v) in d.iter() {
            out.push((k.extract()?, v.extract()?));
        }
    }
    Ok(out)
}

/// A parametric forecast distribution, e.g. `Family("norm", mean=0, sd=1)`.
#[pyclass(name = "Family", module = "properscore", frozen)]
struct PyFamily {
    inner: ps::Family,
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (family, **params))]
    fn new(family: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let t = tag(family)?;
        let given = dict_values(params)?;
        let asked = std::cell::RefCell::new(Vec::new());
        let lookup = |name: &str| {
            asked.borrow_mut().push(name.to_string());
            given.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
        };
        let inner = ps::Family::from_params(t, &lookup).map_err(err)?;
        if let Some((k, _)) = given.iter().find(|(k, _)| !asked.borrow().contains(k)) {
            return Err(ScoreError::new_err(format!("family '{t}' has no parameter '{k}'")));
        }
        inner.validate().map_err(err)?;
        Ok(PyFamily { inner })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.tag().name()
    }

    /// Parameter values by canonical name.
    #[getter]
    fn params(&self) -> Vec<(&'static str, f64)> {
        let names = self.inner.tag().params().iter().map(|s| s.name);
        names.zip(self.inner.values()).collect()
    }

    fn crps(&self, y: f64) -> PyResult<f64> {
        ps::crps_closed(&self.inner, y).map_err(err)
    }

    fn logs(&self, y: f64) -> PyResult<f64> {
        ps::logs_closed(&self.inner, y).map_err(err)
    }

    /// CRPS gradient with respect to location and scale.
    fn gradcrps(&self, y: f64) -> PyResult<[f64; 2]> {
        ps::gradcrps(&self.inner, y).map_err(err)
    }

    fn hesscrps(&self, y: f64) -> PyResult<[[f64; 2]; 2]> {
        ps::hesscrps(&self.inner, y).map_err(err)
    }

    fn __repr__(&self) -> String {
        let body: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("Family('{}', {})", self.name(), body.join(", "))
    }
}

/// Closed-form CRPS of `family` with keyword parameters at `y`.
#[pyfunction]
#[pyo3(signature = (family, y, **params))]
fn crps(family: &str, y: f64, params: Option<&Bound<'_, PyDict>>) -> PyResult<f64> {
    PyFamily::new(family, params)?.crps(y)
}

#[pyfunction]
#[pyo3(signature = (family, y, **params))]
fn logs(family: &str, y: f64, params: Option<&Bound<'_, PyDict>>) -> PyResult<f64> {
    PyFamily::new(family, params)?.logs(y)
}

fn mixture(m: Vec<f64>, s: Vec<f64>, w: Option<Vec<f64>>) -> PyResult<ps::MixtureNormal> {
    let w = w.unwrap_or_else(|| vec![1.0; m.len()]);
    ps::MixtureNormal::new(m, s, w).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (y, m, s, w=None))]
fn crps_mixnorm(y: f64, m: Vec<f64>, s: Vec<f64>, w: Option<Vec<f64>>) -> PyResult<f64> {
    ps::crps_mixnorm(&mixture(m, s, w)?, y).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (y, m, s, w=None))]
fn logs_mixnorm(y: f64, m: Vec<f64>, s: Vec<f64>, w: Option<Vec<f64>>) -> PyResult<f64> {
    ps::logs_mixnorm(&mixture(m, s, w)?, y).map_err(err)
}

/// Draws from a forecast distribution, optionally weighted.
#[pyclass(name = "SampleForecast", module = "properscore", frozen)]
struct PySampleForecast {
    inner: ps::SampleForecast,
}

#[pymethods]
impl PySampleForecast {
    #[new]
    #[pyo3(signature = (draws, weights=None))]
    fn new(draws: Vec<f64>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let inner = match weights {
            None => ps::SampleForecast::new(draws),
            Some(w) => ps::SampleForecast::with_weights(draws, w),
        }
        .map_err(err)?;
        Ok(PySampleForecast { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// `method` is "edf" or "kde".
    #[pyo3(signature = (y, method="edf", bw=None))]
    fn crps(&self, y: f64, method: &str, bw: Option<f64>) -> PyResult<f64> {
        match method {
            "edf" if bw.is_none() => ps::crps_sample_edf(y, &self.inner),
            "edf" => return Err(ScoreError::new_err("bw only applies to method 'kde'")),
            "kde" => ps::crps_sample_kde(y, &self.inner, bw),
            other => return Err(ScoreError::new_err(format!("unknown method '{other}'"))),
        }
        .map_err(err)
    }

    #[pyo3(signature = (y, bw=None))]
    fn logs(&self, y: f64, bw: Option<f64>) -> PyResult<f64> {
        ps::logs_sample(y, &self.inner, bw).map_err(err)
    }

    fn bandwidth(&self) -> PyResult<f64> {
        ps::bandwidth_nrd(&self.inner).map_err(err)
    }
}

#[pyfunction]
#[pyo3(signature = (y, draws, weights=None, method="edf", bw=None))]
fn crps_sample(
    y: f64,
    draws: Vec<f64>,
    weights: Option<Vec<f64>>,
    method: &str,
    bw: Option<f64>,
) -> PyResult<f64> {
    PySampleForecast::new(draws, weights)?.crps(y, method, bw)
}

#[pyfunction]
#[pyo3(signature = (y, draws, weights=None, bw=None))]
fn logs_sample(y: f64, draws: Vec<f64>, weights: Option<Vec<f64>>, bw: Option<f64>) -> PyResult<f64> {
    PySampleForecast::new(draws, weights)?.logs(y, bw)
}

/// Multivariate draws given as a list of m samples, each of length d.
#[pyclass(name = "MultivariateForecast", module = "properscore", frozen)]
struct PyMultivariateForecast {
    inner: ps::MultivariateForecast,
}

#[pymethods]
impl PyMultivariateForecast {
    #[new]
    fn new(samples: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = ps::MultivariateForecast::from_columns(&samples).map_err(err)?;
        Ok(PyMultivariateForecast { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.n_samples()
    }

    fn es(&self, y: Vec<f64>) -> PyResult<f64> {
        ps::es_sample(&y, &self.inner).map_err(err)
    }

    /// `weights` is a d x d nested list; all ones by default.
    #[pyo3(signature = (y, p=0.5, weights=None))]
    fn vs(&self, y: Vec<f64>, p: f64, weights: Option<Vec<Vec<f64>>>) -> PyResult<f64> {
        let w = weights
            .map(|rows| ps::PairWeights::from_rows(&rows))
            .transpose()
            .map_err(err)?;
        ps::vs_sample(&y, &self.inner, w.as_ref(), p).map_err(err)
    }
}

#[pyfunction]
fn es_sample(y: Vec<f64>, samples: Vec<Vec<f64>>) -> PyResult<f64> {
    PyMultivariateForecast::new(samples)?.es(y)
}

#[pyfunction]
#[pyo3(signature = (y, samples, p=0.5, weights=None))]
fn vs_sample(y: Vec<f64>, samples: Vec<Vec<f64>>, p: f64, weights: Option<Vec<Vec<f64>>>) -> PyResult<f64> {
    PyMultivariateForecast::new(samples)?.vs(y, p, weights)
}

#[pyclass(name = "EstimationResult", module = "properscore", frozen, get_all)]
struct PyEstimationResult {
    /// Fitted values by parameter name, fixed ones included.
    params: Vec<(&'static str, f64)>,
    objective: f64,
    grad_norm: f64,
    iterations: usize,
    converged: bool,
    message: String,
}

#[pymethods]
impl PyEstimationResult {
    fn __repr__(&self) -> String {
        let body: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "EstimationResult({}, objective={}, converged={})",
            body.join(", "),
            self.objective,
            self.converged
        )
    }
}

/// Fits `family` to `data` by minimizing the mean score. `fix` holds
/// parameters at given values; `init` sets starting values.
#[pyfunction]
#[pyo3(signature = (family, data, score="crps", fix=None, init=None))]
fn minimize_score(
    family: &str,
    data: Vec<f64>,
    score: &str,
    fix: Option<&Bound<'_, PyDict>>,
    init: Option<&Bound<'_, PyDict>>,
) -> PyResult<PyEstimationResult> {
    let score: ps::Score = score.parse().map_err(err)?;
    let mut p = ps::EstimationProblem::new(tag(family)?, data, score).map_err(err)?;
    for (k, v) in dict_values(fix)? {
        p = p.fix(&k, v).map_err(err)?;
    }
    for (k, v) in dict_values(init)? {
        p = p.start(&k, v).map_err(err)?;
    }
    let r = ps::minimize_score(&p).map_err(err)?;
    Ok(PyEstimationResult {
        params: r.names.into_iter().zip(r.params).collect(),
        objective: r.objective,
        grad_norm: r.grad_norm,
        iterations: r.iterations,
        converged: r.converged,
        message: r.message,
    })
}

#[pymodule]
fn _properscore(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ScoreError", m.py().get_type::<ScoreError>())?;
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PySampleForecast>()?;
    m.add_class::<PyMultivariateForecast>()?;
    m.add_class::<PyEstimationResult>()?;
    m.add_function(wrap_pyfunction!(crps, m)?)?;
    m.add_function(wrap_pyfunction!(logs, m)?)?;
    m.add_function(wrap_pyfunction!(crps_mixnorm, m)?)?;
    m.add_function(wrap_pyfunction!(logs_mixnorm, m)?)?;
    m.add_function(wrap_pyfunction!(crps_sample, m)?)?;
    m.add_function(wrap_pyfunction!(logs_sample, m)?)?;
    m.add_function(wrap_pyfunction!(es_sample, m)?)?;
    m.add_function(wrap_pyfunction!(vs_sample, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_score, m)?)?;
    let families: Vec<&str> = ps::FamilyTag::ALL.iter().map(|t| t.name()).collect();
    m.add("FAMILIES", families)?;
    Ok(())
}
