//! Python extension module exposing the main spinbath types and operations.

use num_complex::Complex64 as C64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spinbath::entanglement;
use spinbath::kernels;
use spinbath::mat::Mat4;
use spinbath::model::{self, BathMode, DensityMatrix4, PairSign};
use spinbath::rdm;
use spinbath::scenario::{self, ScenarioConfig};

fn err_to_py(e: spinbath::Error) -> PyErr {
    match e {
        spinbath::Error::Config(_) | spinbath::Error::State(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn modes_from(omegas: Vec<f64>, cs: Vec<f64>) -> PyResult<Vec<BathMode>> {
    if omegas.len() != cs.len() {
        return Err(PyValueError::new_err("omegas and cs must match in length"));
    }
    Ok(omegas
        .into_iter()
        .zip(cs)
        .map(|(omega, c)| BathMode { omega, c })
        .collect())
}

fn mat4_from(rho: Vec<Vec<C64>>) -> PyResult<Mat4> {
    if rho.len() != 4 || rho.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("rho must be a 4x4 nested list"));
    }
    let mut m = Mat4::zero();
    for (dst, src) in m.0.iter_mut().zip(&rho) {
        dst.copy_from_slice(src);
    }
    Ok(m)
}

fn mat4_to(m: &Mat4) -> Vec<Vec<C64>> {
    m.0.iter().map(|row| row.to_vec()).collect()
}

fn pair_sign(sign: &str) -> PyResult<PairSign> {
    match sign {
        "equal" => Ok(PairSign::Equal),
        "opposite" => Ok(PairSign::Opposite),
        other => Err(PyValueError::new_err(format!(
            "sign must be 'equal' or 'opposite', got '{other}'"
        ))),
    }
}

/// Thermal populations (n_plus, n_minus) at inverse temperature beta.
#[pyfunction]
fn thermal_populations(beta: f64, omega: f64) -> PyResult<(f64, f64)> {
    model::thermal_populations(beta, omega).map_err(err_to_py)
}

/// Local mixed-bath dephasing coefficient at time t.
#[pyfunction]
fn local_f_mixed(omegas: Vec<f64>, cs: Vec<f64>, t: f64) -> PyResult<C64> {
    kernels::local_f_mixed(&modes_from(omegas, cs)?, t).map_err(err_to_py)
}

/// Local pure-bath dephasing coefficient at time t.
#[pyfunction]
fn local_f_pure(omegas: Vec<f64>, cs: Vec<f64>, alphas: Vec<f64>, t: f64) -> PyResult<C64> {
    kernels::local_f_pure(&modes_from(omegas, cs)?, &alphas, t).map_err(err_to_py)
}

/// Local GHZ-pair dephasing coefficient (one omega/c per block).
#[pyfunction]
fn local_f_pairs(omegas: Vec<f64>, cs: Vec<f64>, sign: &str, t: f64) -> PyResult<C64> {
    kernels::local_f_pairs(&modes_from(omegas, cs)?, pair_sign(sign)?, t).map_err(err_to_py)
}

/// Shared-bath mixed coefficients (f, g) at time t.
#[pyfunction]
fn global_fg_mixed(
    omegas: Vec<f64>,
    cs: Vec<f64>,
    deltas: Vec<f64>,
    t: f64,
) -> PyResult<(C64, C64)> {
    kernels::global_fg_mixed(&modes_from(omegas, cs)?, &deltas, t).map_err(err_to_py)
}

/// Shared-bath pure-state coefficients (f, g) at time t (alpha = pi/4).
#[pyfunction]
fn global_fg_pure(omegas: Vec<f64>, cs: Vec<f64>, t: f64) -> PyResult<(C64, C64)> {
    kernels::global_fg_pure(&modes_from(omegas, cs)?, t).map_err(err_to_py)
}

/// Shared-bath GHZ-pair coefficients (f, g); modes listed in adjacent pairs.
#[pyfunction]
fn global_fg_pairs(omegas: Vec<f64>, cs: Vec<f64>, t: f64) -> PyResult<(C64, C64)> {
    kernels::global_fg_pairs(&modes_from(omegas, cs)?, t).map_err(err_to_py)
}

/// Closed-form Ohmic coefficient; variant is one of
/// 'local_mixed' | 'pairs_equal' | 'pairs_opposite'.
#[pyfunction]
fn ohmic_closed_form(eta: f64, omega_c: f64, variant: &str, t: f64) -> PyResult<f64> {
    let spec = model::OhmicSpec::new(eta, omega_c).map_err(err_to_py)?;
    let variant = match variant {
        "local_mixed" => kernels::OhmicVariant::LocalMixed,
        "pairs_equal" => kernels::OhmicVariant::PairsEqual,
        "pairs_opposite" => kernels::OhmicVariant::PairsOpposite,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown ohmic variant '{other}'"
            )))
        }
    };
    Ok(kernels::ohmic_closed_form(&spec, variant, t))
}

/// Wootters concurrence of a 4x4 density matrix (general spectral route).
#[pyfunction]
fn concurrence(rho: Vec<Vec<C64>>) -> PyResult<f64> {
    let m = DensityMatrix4::new(mat4_from(rho)?).map_err(err_to_py)?;
    entanglement::concurrence(&m).map_err(err_to_py)
}

/// Closed-form concurrence for X-form density matrices.
#[pyfunction]
fn concurrence_xstate(rho: Vec<Vec<C64>>) -> PyResult<f64> {
    let m = DensityMatrix4::new(mat4_from(rho)?).map_err(err_to_py)?;
    entanglement::concurrence_xstate(&m).map_err(err_to_py)
}

/// Validation report for a candidate density matrix:
/// (hermiticity_defect, trace_defect, min_eigenvalue, pass).
#[pyfunction]
fn validate_density_matrix(rho: Vec<Vec<C64>>) -> PyResult<(f64, f64, f64, bool)> {
    let report =
        model::validate_density_matrix(&DensityMatrix4::new_unchecked(mat4_from(rho)?));
    Ok((
        report.hermiticity_defect,
        report.trace_defect,
        report.min_eigenvalue,
        report.pass(),
    ))
}

/// Local-model RDM at time t from per-bath coefficients.
#[pyfunction]
fn rdm_local(
    rho0: Vec<Vec<C64>>,
    f_a: C64,
    f_b: C64,
    omega_s: f64,
    t: f64,
) -> PyResult<Vec<Vec<C64>>> {
    let rho0 = DensityMatrix4::new(mat4_from(rho0)?).map_err(err_to_py)?;
    let out = rdm::rdm_local(&rho0, f_a, f_b, omega_s, t).map_err(err_to_py)?;
    Ok(mat4_to(out.matrix()))
}

/// Shared-bath RDM at time t from (f, g) coefficients.
#[pyfunction]
fn rdm_global(
    rho0: Vec<Vec<C64>>,
    f: C64,
    g: C64,
    omega_s: f64,
    t: f64,
) -> PyResult<Vec<Vec<C64>>> {
    let rho0 = DensityMatrix4::new(mat4_from(rho0)?).map_err(err_to_py)?;
    let out = rdm::rdm_global(&rho0, f, g, omega_s, t).map_err(err_to_py)?;
    Ok(mat4_to(out.matrix()))
}

/// Result of a scenario run.
#[pyclass]
struct ScenarioResult {
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    f: Vec<C64>,
    #[pyo3(get)]
    g: Option<Vec<C64>>,
    #[pyo3(get)]
    concurrence: Vec<f64>,
    #[pyo3(get)]
    metadata: String,
}

/// Run a full scenario described by a JSON configuration string.
#[pyfunction]
fn run_scenario(config_json: &str) -> PyResult<ScenarioResult> {
    let cfg = ScenarioConfig::from_json(config_json).map_err(err_to_py)?;
    let run = scenario::run_scenario(&cfg).map_err(err_to_py)?;
    Ok(ScenarioResult {
        times: run.coefficients.times,
        f: run.coefficients.f,
        g: run.coefficients.g,
        concurrence: run.concurrence.values,
        metadata: serde_json::to_string(&run.metadata)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?,
    })
}

#[pymodule]
fn spinbath_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ScenarioResult>()?;
    m.add_function(wrap_pyfunction!(thermal_populations, m)?)?;
    m.add_function(wrap_pyfunction!(local_f_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(local_f_pure, m)?)?;
    m.add_function(wrap_pyfunction!(local_f_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(global_fg_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(global_fg_pure, m)?)?;
    m.add_function(wrap_pyfunction!(global_fg_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(ohmic_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_xstate, m)?)?;
    m.add_function(wrap_pyfunction!(validate_density_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rdm_local, m)?)?;
    m.add_function(wrap_pyfunction!(rdm_global, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
