//! Python module `pyibdd`: BCH components, product-code decoders, density evolution
//! and the Monte-Carlo harness. Structured results cross the boundary as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ibdd_core::de::{self, design_rate, gldpc_threshold, run_gldpc, run_sc, GldpcConfig, ScConfig, SumRange};
use ibdd_core::sim::{run_curve, SimConfig};
use ibdd_core::matrix::Matrix;
use ibdd_core::{BchCode, ChannelParams, Error, LlrMatrix, ProductCode, ScalingSchedule};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Bracket { .. } | Error::ScheduleUnavailable { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Row-major nested lists to a matrix; every row must have the same length.
pub fn to_matrix<T: Copy>(rows: &[Vec<T>]) -> Result<Matrix<T>, String> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err("ragged matrix: rows differ in length".into());
    }
    let data = rows.iter().flatten().copied().collect();
    Matrix::from_vec(rows.len(), cols, data).map_err(|e| e.to_string())
}

pub fn to_rows<T: Copy>(m: &Matrix<T>) -> Vec<Vec<T>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

#[pyclass(name = "Bch", frozen)]
struct PyBch {
    inner: BchCode,
}

#[pymethods]
impl PyBch {
    #[new]
    #[pyo3(signature = (m, t, shorten = 0))]
    fn new(m: u32, t: usize, shorten: usize) -> PyResult<Self> {
        Ok(Self {
            inner: BchCode::new(m, t, shorten).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    fn encode(&self, info: Vec<u8>) -> PyResult<Vec<u8>> {
        self.inner.encode(&info).map_err(py_err)
    }

    /// Decoded codeword, or `None` when no codeword lies within distance t.
    fn bdd_decode(&self, r: Vec<u8>) -> PyResult<Option<Vec<u8>>> {
        Ok(match self.inner.bdd_decode(&r).map_err(py_err)? {
            ibdd_core::BddOutcome::Decoded(c) => Some(c),
            ibdd_core::BddOutcome::Failure => None,
        })
    }

    fn is_codeword(&self, r: Vec<u8>) -> bool {
        r.len() == self.inner.n() && self.inner.is_codeword(&r)
    }

    fn weight_enumerator(&self) -> PyResult<Vec<u64>> {
        self.inner.weight_enumerator_exact().map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Bch(n={}, k={}, t={})", self.inner.n(), self.inner.k(), self.inner.t())
    }
}

/// DE threshold in dB of the GLDPC (`"gldpc"`) or windowed SC-GLDPC (`"sc"`) ensemble.
#[pyfunction]
#[pyo3(signature = (ensemble = "gldpc", m = 8, t = 3, shorten = 0, window = 6, iters = 20, lo = 2.0, hi = 8.0, tol_db = 0.002))]
#[allow(clippy::too_many_arguments)]
fn de_threshold(
    py: Python<'_>,
    ensemble: &str,
    m: u32,
    t: usize,
    shorten: usize,
    window: usize,
    iters: usize,
    lo: f64,
    hi: f64,
    tol_db: f64,
) -> PyResult<f64> {
    let code = BchCode::new(m, t, shorten).map_err(py_err)?;
    let prof = de::profile_for(&code, SumRange::Exact).map_err(py_err)?;
    let rate = design_rate(code.n(), code.k());
    let ens = ensemble.to_owned();
    py.detach(move || match ens.as_str() {
        "gldpc" => gldpc_threshold(
            &prof,
            rate,
            &GldpcConfig {
                iterations: iters,
                ..Default::default()
            },
            (lo, hi),
            tol_db,
        ),
        "sc" => de::sc_threshold(&prof, rate, &sc_config(window, iters), (lo, hi), tol_db),
        other => Err(Error::InvalidParameter(format!("unknown ensemble '{other}'"))),
    })
    .map_err(py_err)
}

fn sc_config(window: usize, iters: usize) -> ScConfig {
    ScConfig {
        window,
        iterations: iters,
        slides: 3 * window,
        ..Default::default()
    }
}

/// DE run at one Eb/N0; returns the profile (weights, trajectory, convergence) as JSON.
#[pyfunction]
#[pyo3(signature = (ebn0_db, ensemble = "gldpc", m = 8, t = 3, shorten = 0, window = 6, iters = 20))]
fn de_profile(
    ebn0_db: f64,
    ensemble: &str,
    m: u32,
    t: usize,
    shorten: usize,
    window: usize,
    iters: usize,
) -> PyResult<String> {
    let code = BchCode::new(m, t, shorten).map_err(py_err)?;
    let prof = de::profile_for(&code, SumRange::Exact).map_err(py_err)?;
    let params = ChannelParams::new(ebn0_db, design_rate(code.n(), code.k())).map_err(py_err)?;
    let out = match ensemble {
        "gldpc" => run_gldpc(
            &prof,
            &params,
            &GldpcConfig {
                iterations: iters,
                ..Default::default()
            },
        ),
        "sc" => run_sc(&prof, &params, &sc_config(window, iters)),
        other => return Err(PyValueError::new_err(format!("unknown ensemble '{other}'"))),
    };
    out.to_json().map_err(py_err)
}

/// Product-code decoding of an n x n LLR array (positive favours 0).
///
/// `mode` is `ibdd` (hard decisions) or `ibdd_sr`, which needs `w_row` and `w_col`
/// with at least `sr_iters` entries.
#[pyfunction]
#[pyo3(signature = (m, t, llr, mode = "ibdd", sr_iters = 10, plain_iters = 2, w_row = None, w_col = None, shorten = 0))]
#[allow(clippy::too_many_arguments)]
fn product_decode(
    m: u32,
    t: usize,
    llr: Vec<Vec<f64>>,
    mode: &str,
    sr_iters: usize,
    plain_iters: usize,
    w_row: Option<Vec<f64>>,
    w_col: Option<Vec<f64>>,
    shorten: usize,
) -> PyResult<Vec<Vec<u8>>> {
    let pc = ProductCode::new(BchCode::new(m, t, shorten).map_err(py_err)?);
    let l: LlrMatrix = to_matrix(&llr).map_err(PyValueError::new_err)?;
    let out = match mode {
        "ibdd" => pc.ibdd_decode(&ibdd_core::channel::harden(&l), sr_iters + plain_iters),
        "ibdd_sr" => {
            let (Some(r), Some(c)) = (w_row, w_col) else {
                return Err(PyValueError::new_err("ibdd_sr needs w_row and w_col"));
            };
            let s = ScalingSchedule::new(r, c).map_err(py_err)?;
            pc.ibdd_sr_decode(&l, &s, sr_iters, plain_iters)
        }
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    }
    .map_err(py_err)?;
    Ok(to_rows(&out))
}

/// Runs a BER/FER curve from a JSON SimConfig (missing fields take defaults) and
/// returns the report as JSON.
#[pyfunction]
fn simulate(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let cfg: SimConfig = serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.detach(move || run_curve(&cfg, |_| {}).and_then(|r| r.to_json()))
        .map_err(py_err)
}

#[pymodule]
fn pyibdd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBch>()?;
    m.add_function(wrap_pyfunction!(de_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(de_profile, m)?)?;
    m.add_function(wrap_pyfunction!(product_decode, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
