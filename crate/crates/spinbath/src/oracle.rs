//! Exact evolution engine: every dephasing factor computed from explicit
//! small-matrix algebra, with no use of the closed-form kernels. This is the
//! ground truth the kernels module is tested against, so the two paths must
//! stay independent.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::{stable_product, CMatrix, Mat2, Mat4, ONE, ZERO};
use crate::model::{
    BathInitialState, BathMode, BathSpec, DensityMatrix4, SystemSpec, Topology,
    GLOBAL_COUPLING_EIGS, QUBIT_A_EIGS, QUBIT_B_EIGS,
};

/// Largest entangled block the dense trace will accept.
pub const MAX_BLOCK_SPINS: usize = 12;

/// exp(i (u sigma_z + v sigma_x)) evaluated in closed form:
/// cos(r) I + i sin(r)/r (u sigma_z + v sigma_x) with r = sqrt(u^2 + v^2).
pub fn su2_exp(u: f64, v: f64) -> Mat2 {
    let r = u.hypot(v);
    let cos_r = r.cos();
    // sin(r)/r with the removable singularity at r = 0
    let sinc = if r < 1e-8 {
        1.0 - r * r / 6.0
    } else {
        r.sin() / r
    };
    Mat2([
        [
            C64::new(cos_r, u * sinc),
            C64::new(0.0, v * sinc),
        ],
        [
            C64::new(0.0, v * sinc),
            C64::new(cos_r, -u * sinc),
        ],
    ])
}

fn check_rho2(rho: &Mat2) -> Result<()> {
    let herm = rho.sub(&rho.adjoint()).frobenius_norm();
    let trace = (rho.trace() - ONE).norm();
    // closed-form eigenvalues of the 2x2 Hermitian part
    let a = rho.0[0][0].re;
    let d = rho.0[1][1].re;
    let b = (rho.0[0][1] + rho.0[1][0].conj()) * C64::new(0.5, 0.0);
    let disc = ((a - d) / 2.0).hypot(b.norm());
    let min_eig = (a + d) / 2.0 - disc;
    if herm > 1e-12 || trace > 1e-12 || min_eig < -1e-10 {
        return Err(Error::state(format!(
            "bath spin state invalid: hermiticity {herm:.3e}, trace defect {trace:.3e}, \
             min eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

/// One-mode dephasing factor
/// Tr[exp(-i X(e_m) t) rho exp(+i X(e_n) t)] with X(e) = omega sigma_z + e c sigma_x.
pub fn mode_trace_factor(
    mode: &BathMode,
    rho: &Mat2,
    e_m: i32,
    e_n: i32,
    t: f64,
) -> Result<C64> {
    check_rho2(rho)?;
    let u_m = su2_exp(-mode.omega * t, -(e_m as f64) * mode.c * t);
    let u_n = su2_exp(mode.omega * t, (e_n as f64) * mode.c * t);
    Ok(u_m.mul(rho).mul(&u_n).trace())
}

/// Density matrix of an N-spin GHZ block (|d..d> + |u..u>)/sqrt(2).
pub fn ghz_block_state(n_spins: usize) -> CMatrix {
    let dim = 1usize << n_spins;
    let mut rho = CMatrix::zeros(dim);
    let half = C64::new(0.5, 0.0);
    for &r in &[0, dim - 1] {
        for &c in &[0, dim - 1] {
            rho[(r, c)] = half;
        }
    }
    rho
}

/// Dephasing factor of an entangled block:
/// Tr[(kron_k U_k(e_m)) rho (kron_k U_k(e_n)^dagger)] with
/// U_k(e) = exp(-i X_k(e) t). Evaluated as Tr[rho kron_k M_k] with
/// M_k = U_k(e_n)^dagger U_k(e_m), walking the bit patterns of rho's indices.
pub fn block_trace_factor(
    block: &[BathMode],
    rho_block: &CMatrix,
    e_m: i32,
    e_n: i32,
    t: f64,
) -> Result<C64> {
    let n = block.len();
    if n == 0 {
        return Err(Error::config("entangled block must contain at least one spin"));
    }
    if n > MAX_BLOCK_SPINS {
        return Err(Error::Capacity(format!(
            "entangled block of {n} spins exceeds the {MAX_BLOCK_SPINS}-spin guard"
        )));
    }
    let dim = 1usize << n;
    if rho_block.dim() != dim {
        return Err(Error::state(format!(
            "block state dimension {} does not match 2^{n}",
            rho_block.dim()
        )));
    }
    let factors: Vec<Mat2> = block
        .iter()
        .map(|mode| {
            let u_m = su2_exp(-mode.omega * t, -(e_m as f64) * mode.c * t);
            let u_n = su2_exp(mode.omega * t, (e_n as f64) * mode.c * t);
            u_n.mul(&u_m)
        })
        .collect();
    // Tr[rho M] = sum_{i,j} rho_{ij} M_{ji}; M_{ji} factors over spin bits,
    // spin 0 on the most significant bit
    let mut acc = ZERO;
    for i in 0..dim {
        for j in 0..dim {
            let r = rho_block[(i, j)];
            if r == ZERO {
                continue;
            }
            let mut m_ji = ONE;
            for (k, f) in factors.iter().enumerate() {
                let shift = n - 1 - k;
                let jb = (j >> shift) & 1;
                let ib = (i >> shift) & 1;
                m_ji *= f.0[jb][ib];
            }
            acc += r * m_ji;
        }
    }
    Ok(acc)
}

/// Dephasing factor of one bath side for a coupling-eigenvalue pair,
/// multiplying per-mode or per-block trace factors in mode order.
fn side_factor(
    modes: &[BathMode],
    offset: usize,
    bath: &BathSpec,
    e_m: i32,
    e_n: i32,
    t: f64,
) -> Result<C64> {
    match &bath.initial_state {
        BathInitialState::MixedDiagonal { .. } | BathInitialState::Pure { .. } => {
            let mut factors = Vec::with_capacity(modes.len());
            for (k, mode) in modes.iter().enumerate() {
                let rho = bath.mode_state(offset + k)?;
                factors.push(mode_trace_factor(mode, &rho, e_m, e_n, t)?);
            }
            Ok(stable_product(factors.into_iter()))
        }
        BathInitialState::GhzBlocks { block_size, .. } => {
            let state = ghz_block_state(*block_size);
            let mut factors = Vec::with_capacity(modes.len() / block_size);
            for chunk in modes.chunks(*block_size) {
                factors.push(block_trace_factor(chunk, &state, e_m, e_n, t)?);
            }
            Ok(stable_product(factors.into_iter()))
        }
    }
}

/// Full 4x4 table of dephasing coefficients f_mn(t) for the two-qubit basis.
/// Every off-diagonal entry is computed independently (no Hermitian
/// mirroring), so f_mn = conj(f_nm) remains a checkable property. Diagonal
/// entries are pinned to exactly 1, which the algebra guarantees.
pub fn dephasing_exact(bath: &BathSpec, t: f64) -> Result<[[C64; 4]; 4]> {
    let mut table = [[ONE; 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            if m == n {
                continue;
            }
            table[m][n] = match &bath.topology {
                Topology::Local { modes_a, modes_b } => {
                    let fa = side_factor(modes_a, 0, bath, QUBIT_A_EIGS[m], QUBIT_A_EIGS[n], t)?;
                    let fb = side_factor(
                        modes_b,
                        modes_a.len(),
                        bath,
                        QUBIT_B_EIGS[m],
                        QUBIT_B_EIGS[n],
                        t,
                    )?;
                    fa * fb
                }
                Topology::Global { modes } => side_factor(
                    modes,
                    0,
                    bath,
                    GLOBAL_COUPLING_EIGS[m],
                    GLOBAL_COUPLING_EIGS[n],
                    t,
                )?,
            };
        }
    }
    Ok(table)
}

/// Exact reduced density matrix at time `t`:
/// rho_mn(t) = exp(-i omega_s (E_m - E_n) t) f_mn(t) rho_mn(0).
pub fn rdm_exact(
    bath: &BathSpec,
    sys: &SystemSpec,
    rho0: &DensityMatrix4,
    t: f64,
) -> Result<DensityMatrix4> {
    let table = dephasing_exact(bath, t)?;
    Ok(apply_dephasing_table(rho0, sys.omega_s, t, &table))
}

/// Applies a dephasing table and the free system phases to an initial state.
pub fn apply_dephasing_table(
    rho0: &DensityMatrix4,
    omega_s: f64,
    t: f64,
    table: &[[C64; 4]; 4],
) -> DensityMatrix4 {
    let mut out = Mat4::zero();
    for m in 0..4 {
        for n in 0..4 {
            let de = (GLOBAL_COUPLING_EIGS[m] - GLOBAL_COUPLING_EIGS[n]) as f64;
            let phase = C64::from_polar(1.0, -omega_s * de * t);
            out.0[m][n] = phase * table[m][n] * rho0.matrix().0[m][n];
        }
    }
    DensityMatrix4::new_unchecked(out)
}
