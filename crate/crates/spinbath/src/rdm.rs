//! Analytic reduced-density-matrix assembly: Kraus operators for the local
//! model and the direct coefficient patterns for both topologies.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::kernels::COEFFICIENT_MAG_TOL;
use crate::mat::{Mat2, Mat4, ONE, ZERO};
use crate::model::{DensityMatrix4, QUBIT_A_EIGS, QUBIT_B_EIGS};
use crate::oracle::apply_dephasing_table;

fn check_coefficient(name: &str, f: C64) -> Result<()> {
    if f.norm() > 1.0 + COEFFICIENT_MAG_TOL {
        return Err(Error::state(format!(
            "|{name}| = {} exceeds 1; not a dephasing coefficient",
            f.norm()
        )));
    }
    Ok(())
}

/// Kraus pair of the one-qubit dephasing channel with coefficient `f`:
/// K1 = diag(1, exp(+i 2 omega t) conj(f)), K2 = diag(0, sqrt(1 - |f|^2)),
/// chosen so that K1 rho K1^+ + K2 rho K2^+ maps
/// rho_12 to exp(-i 2 omega t) f rho_12. Completeness K1^+K1 + K2^+K2 = I
/// holds for any |f| <= 1.
pub fn kraus_pair(f: C64, omega: f64, t: f64) -> Result<(Mat2, Mat2)> {
    check_coefficient("f", f)?;
    let k1 = Mat2::diag(ONE, C64::from_polar(1.0, 2.0 * omega * t) * f.conj());
    let k2 = Mat2::diag(ZERO, C64::new((1.0 - f.norm_sqr()).max(0.0).sqrt(), 0.0));
    Ok((k1, k2))
}

/// The four composite Kraus operators K_i^A (x) K_j^B of the two-qubit
/// local dephasing channel.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub k11: Mat4,
    pub k12: Mat4,
    pub k21: Mat4,
    pub k22: Mat4,
}

impl KrausSet {
    pub fn from_pairs(a: (Mat2, Mat2), b: (Mat2, Mat2)) -> Self {
        KrausSet {
            k11: Mat4::kron(&a.0, &b.0),
            k12: Mat4::kron(&a.0, &b.1),
            k21: Mat4::kron(&a.1, &b.0),
            k22: Mat4::kron(&a.1, &b.1),
        }
    }

    pub fn operators(&self) -> [&Mat4; 4] {
        [&self.k11, &self.k12, &self.k21, &self.k22]
    }

    /// Frobenius norm of sum_i K_i^+ K_i - I.
    pub fn completeness_defect(&self) -> f64 {
        let mut acc = Mat4::zero();
        for k in self.operators() {
            acc = acc.add(&k.adjoint().mul(k));
        }
        acc.sub(&Mat4::identity()).frobenius_norm()
    }

    /// sum_i K_i rho K_i^+.
    pub fn apply(&self, rho: &Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for k in self.operators() {
            out = out.add(&k.mul(rho).mul(&k.adjoint()));
        }
        out
    }
}

/// 4x4 coefficient table of the local model: entry (m, n) multiplies
/// rho_mn(0), with per-qubit coefficients f_a, f_b on their respective
/// raising/lowering label pairs.
pub fn dephasing_table_local(f_a: C64, f_b: C64) -> [[C64; 4]; 4] {
    let single = |f: C64, em: i32, en: i32| -> C64 {
        match (em, en) {
            (1, -1) => f,
            (-1, 1) => f.conj(),
            _ => ONE,
        }
    };
    let mut table = [[ONE; 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            table[m][n] = single(f_a, QUBIT_A_EIGS[m], QUBIT_A_EIGS[n])
                * single(f_b, QUBIT_B_EIGS[m], QUBIT_B_EIGS[n]);
        }
    }
    table
}

/// 4x4 coefficient table of the shared-bath model. `g_upper` multiplies the
/// (1,2)/(1,3) coherences, `g_lower` the (2,4)/(3,4) ones, `f` the (1,4)
/// coherence; the (2,3) coherence and the diagonal are untouched.
pub fn dephasing_table_global(f: C64, g_upper: C64, g_lower: C64) -> [[C64; 4]; 4] {
    let mut table = [[ONE; 4]; 4];
    table[0][1] = g_upper;
    table[0][2] = g_upper;
    table[1][0] = g_upper.conj();
    table[2][0] = g_upper.conj();
    table[0][3] = f;
    table[3][0] = f.conj();
    table[1][3] = g_lower;
    table[2][3] = g_lower;
    table[3][1] = g_lower.conj();
    table[3][2] = g_lower.conj();
    table
}

/// Local-model RDM at time `t` from per-bath coefficients, including the
/// free-evolution phases. Equals the composite-Kraus channel.
pub fn rdm_local(
    rho0: &DensityMatrix4,
    f_a: C64,
    f_b: C64,
    omega_s: f64,
    t: f64,
) -> Result<DensityMatrix4> {
    check_coefficient("f_a", f_a)?;
    check_coefficient("f_b", f_b)?;
    let table = dephasing_table_local(f_a, f_b);
    Ok(apply_dephasing_table(rho0, omega_s, t, &table))
}

/// Local-model RDM via the explicit composite Kraus operators; an
/// independent code path kept for cross-checking [`rdm_local`].
pub fn kraus_compose(
    rho0: &DensityMatrix4,
    f_a: C64,
    f_b: C64,
    omega_s: f64,
    t: f64,
) -> Result<DensityMatrix4> {
    let set = KrausSet::from_pairs(kraus_pair(f_a, omega_s, t)?, kraus_pair(f_b, omega_s, t)?);
    Ok(DensityMatrix4::new_unchecked(set.apply(rho0.matrix())))
}

/// Shared-bath RDM at time `t` for baths whose lower coherence coefficient
/// is conj(g) (diagonal mixed spins; also exact for any bath on X-form
/// states, where the g entries multiply zeros).
pub fn rdm_global(
    rho0: &DensityMatrix4,
    f: C64,
    g: C64,
    omega_s: f64,
    t: f64,
) -> Result<DensityMatrix4> {
    rdm_global_with(rho0, f, g, g.conj(), omega_s, t)
}

/// Shared-bath RDM with independently supplied upper and lower g
/// coefficients, covering bath states for which the two are not conjugate.
pub fn rdm_global_with(
    rho0: &DensityMatrix4,
    f: C64,
    g_upper: C64,
    g_lower: C64,
    omega_s: f64,
    t: f64,
) -> Result<DensityMatrix4> {
    check_coefficient("f", f)?;
    check_coefficient("g_upper", g_upper)?;
    check_coefficient("g_lower", g_lower)?;
    let table = dephasing_table_global(f, g_upper, g_lower);
    Ok(apply_dephasing_table(rho0, omega_s, t, &table))
}
