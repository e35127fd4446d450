//! Wootters concurrence: the general 4x4 spectral route and the X-state
//! closed form.

use num_complex::Complex64 as C64;

use crate::eig;
use crate::error::{Error, Result};
use crate::mat::{Mat4, SIGMA_Y};
use crate::model::DensityMatrix4;

/// Entries outside the X pattern must stay below this for the fast path.
pub const X_FORM_TOL: f64 = 1e-12;
/// Spectral clamps larger than this are logged.
pub const CLAMP_LOG_THRESHOLD: f64 = 1e-9;

/// Spin-flipped conjugate (sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y).
pub fn spin_flip_tilde(rho: &DensityMatrix4) -> Mat4 {
    let yy = Mat4::kron(&SIGMA_Y, &SIGMA_Y);
    yy.mul(&rho.matrix().conj_entrywise()).mul(&yy)
}

/// Eigenvalues of a dense complex 4x4 matrix (shifted QR iteration).
pub fn eigenvalues_4x4(m: &Mat4) -> Result<[C64; 4]> {
    eig::eigenvalues4(m)
}

/// Wootters concurrence of a two-qubit state:
/// max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) over the descending
/// spectrum of rho * spin_flip_tilde(rho). The spectrum of that product is
/// real and nonnegative for a valid state; residual imaginary parts and
/// negative round-off are clamped (and logged when above 1e-9).
pub fn concurrence(rho: &DensityMatrix4) -> Result<f64> {
    let zeta = rho.matrix().mul(&spin_flip_tilde(rho));
    let eigs = eigenvalues_4x4(&zeta)?;
    let scale = 1.0 + zeta.frobenius_norm();
    let mut lambdas = [0.0f64; 4];
    for (i, l) in eigs.iter().enumerate() {
        if l.im.abs() > CLAMP_LOG_THRESHOLD * scale {
            log::warn!(
                "concurrence spectrum: imaginary part {:.3e} clamped (scale {scale:.3e})",
                l.im
            );
        }
        let mut re = l.re;
        if re < 0.0 {
            if re < -CLAMP_LOG_THRESHOLD * scale {
                log::warn!("concurrence spectrum: negative eigenvalue {re:.3e} clamped");
            }
            re = 0.0;
        }
        lambdas[i] = re;
    }
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // An isolated near-zero eigenvalue comes out of the QR sweep at the
    // round-off floor, and its square root then dominates the error budget.
    // The product of the spectrum is |det rho|^2, which LU evaluates with
    // small relative error, so the trailing eigenvalue is recovered from it.
    if lambdas[3] < 1e-8 * scale && lambdas[2] > 1e-8 * scale {
        let det_rho = crate::eig::char_poly_abs(rho.matrix(), crate::mat::ZERO);
        let refined = (det_rho * det_rho) / (lambdas[0] * lambdas[1] * lambdas[2]);
        lambdas[3] = refined.min(lambdas[2]);
    }
    let c = lambdas[0].sqrt() - lambdas[1].sqrt() - lambdas[2].sqrt() - lambdas[3].sqrt();
    Ok(c.clamp(0.0, 1.0))
}

/// True when every entry outside the diagonal and anti-diagonal is below
/// the X-form tolerance, i.e. [`concurrence_xstate`] applies exactly.
pub fn is_x_form(rho: &DensityMatrix4) -> bool {
    let m = rho.matrix();
    [
        (0usize, 1usize),
        (0, 2),
        (1, 0),
        (2, 0),
        (1, 3),
        (2, 3),
        (3, 1),
        (3, 2),
    ]
    .iter()
    .all(|&(r, c)| m.0[r][c].norm() <= X_FORM_TOL)
}

/// Closed-form concurrence for X states (nonzero entries only on the
/// diagonal and anti-diagonal):
/// 2 max(0, |rho_14| - sqrt(rho_22 rho_33), |rho_23| - sqrt(rho_11 rho_44)).
pub fn concurrence_xstate(rho: &DensityMatrix4) -> Result<f64> {
    let m = rho.matrix();
    let off_x = [
        (0, 1),
        (0, 2),
        (1, 0),
        (2, 0),
        (1, 3),
        (2, 3),
        (3, 1),
        (3, 2),
    ];
    for (r, c) in off_x {
        if m.0[r][c].norm() > X_FORM_TOL {
            return Err(Error::state(format!(
                "entry ({},{}) = {} is outside the X pattern",
                r + 1,
                c + 1,
                m.0[r][c]
            )));
        }
    }
    let d: Vec<f64> = (0..4).map(|i| m.0[i][i].re.max(0.0)).collect();
    let inner = m.0[0][3].norm() - (d[1] * d[2]).sqrt();
    let outer = m.0[1][2].norm() - (d[0] * d[3]).sqrt();
    Ok((2.0 * inner.max(outer).max(0.0)).clamp(0.0, 1.0))
}

/// Concurrence sampled on a time grid; every value lies in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl ConcurrenceSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::config("times and values lengths differ"));
        }
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::state(format!("concurrence {bad} outside [0,1]")));
        }
        Ok(ConcurrenceSeries { times, values })
    }
}
