//! Eigenvalues of dense complex 4x4 matrices by shifted QR iteration.
//!
//! The concurrence path needs the spectrum of a non-Hermitian product of two
//! 4x4 matrices; the state validator needs the spectrum of a Hermitian 4x4.
//! Both are small enough for a self-contained solver: Householder reduction
//! to Hessenberg form, then explicit single-shift QR steps with Wilkinson
//! shifts and subdiagonal deflation. Every returned value is checked against
//! the characteristic polynomial of the input.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::{Mat4, ONE, ZERO};

/// Relative subdiagonal threshold below which an entry is treated as zero.
pub const DEFLATION_TOL: f64 = 1e-13;
/// Hard cap on QR sweeps across all deflation windows.
pub const MAX_QR_ITERATIONS: usize = 200;
/// Characteristic-polynomial residual bound, relative to the matrix scale.
pub const CHARPOLY_RESIDUAL_TOL: f64 = 1e-9;

/// All four eigenvalues of `m`, in no particular order.
///
/// Fails with a numeric error carrying the residual if the iteration does
/// not converge or a converged value does not annihilate the characteristic
/// polynomial to within `CHARPOLY_RESIDUAL_TOL` times the matrix scale.
pub fn eigenvalues4(m: &Mat4) -> Result<[C64; 4]> {
    let fro = m.frobenius_norm();
    let mut h = hessenberg(*m);

    let mut eigs = [ZERO; 4];
    let mut hi = 3usize;
    let mut iterations = 0usize;
    loop {
        // flush negligible subdiagonals
        for k in 1..=hi {
            let s = h.0[k - 1][k - 1].norm() + h.0[k][k].norm();
            let tol = DEFLATION_TOL * if s > 0.0 { s } else { fro };
            if h.0[k][k - 1].norm() <= tol {
                h.0[k][k - 1] = ZERO;
            }
        }
        if hi == 0 {
            eigs[0] = h.0[0][0];
            break;
        }
        if h.0[hi][hi - 1] == ZERO {
            eigs[hi] = h.0[hi][hi];
            hi -= 1;
            continue;
        }
        // active window [lo, hi]
        let mut lo = hi;
        while lo > 0 && h.0[lo][lo - 1] != ZERO {
            lo -= 1;
        }
        if hi - lo == 1 {
            let (l1, l2) = eig2(
                h.0[lo][lo],
                h.0[lo][hi],
                h.0[hi][lo],
                h.0[hi][hi],
            );
            eigs[hi] = l1;
            eigs[lo] = l2;
            h.0[hi][hi - 1] = ZERO;
            if hi >= 2 {
                hi -= 2;
            } else {
                break;
            }
            continue;
        }
        if iterations >= MAX_QR_ITERATIONS {
            let resid = h.0[hi][hi - 1].norm();
            return Err(Error::Numeric(format!(
                "QR iteration did not converge in {MAX_QR_ITERATIONS} sweeps; \
                 trailing subdiagonal residual {resid:.3e}"
            )));
        }
        qr_step(&mut h, lo, hi);
        iterations += 1;
    }

    // every eigenvalue must be a root of det(m - lambda I)
    let scale = (1.0 + fro).powi(4);
    for l in eigs {
        let r = char_poly_abs(m, l);
        if r.is_nan() || r > CHARPOLY_RESIDUAL_TOL * scale {
            return Err(Error::Numeric(format!(
                "eigenvalue {l} fails characteristic-polynomial check: residual {r:.3e} \
                 exceeds {:.3e}",
                CHARPOLY_RESIDUAL_TOL * scale
            )));
        }
    }
    Ok(eigs)
}

/// Eigenvalues of a complex 2x2 block, the one closer to `d` first.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half = C64::new(0.5, 0.0);
    let mid = (a + d) * half;
    let disc = ((a - d) * half * ((a - d) * half) + b * c).sqrt();
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        (l1, l2)
    } else {
        (l2, l1)
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg(mut h: Mat4) -> Mat4 {
    for col in 0..2 {
        // vector to annihilate: h[col+1..4][col]
        let x: Vec<C64> = (col + 1..4).map(|r| h.0[r][col]).collect();
        let norm_x = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO {
            ONE
        } else {
            x[0] / C64::new(x[0].norm(), 0.0)
        };
        let alpha = -phase * C64::new(norm_x, 0.0);
        let mut v = x;
        v[0] -= alpha;
        let vv = v.iter().map(|u| u.norm_sqr()).sum::<f64>();
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;
        // P = I - beta v v^dagger acting on rows/cols col+1..4
        // left: h <- P h
        for j in 0..4 {
            let mut dot = ZERO;
            for (i, vi) in v.iter().enumerate() {
                dot += vi.conj() * h.0[col + 1 + i][j];
            }
            dot *= C64::new(beta, 0.0);
            for (i, vi) in v.iter().enumerate() {
                h.0[col + 1 + i][j] -= vi * dot;
            }
        }
        // right: h <- h P
        for i in 0..4 {
            let mut dot = ZERO;
            for (j, vj) in v.iter().enumerate() {
                dot += h.0[i][col + 1 + j] * vj;
            }
            dot *= C64::new(beta, 0.0);
            for (j, vj) in v.iter().enumerate() {
                h.0[i][col + 1 + j] -= dot * vj.conj();
            }
        }
    }
    h
}

/// One explicit shifted QR step on the Hessenberg window [lo, hi].
fn qr_step(h: &mut Mat4, lo: usize, hi: usize) {
    // Wilkinson shift: trailing 2x2 eigenvalue closest to the corner
    let (shift, _) = eig2(
        h.0[hi - 1][hi - 1],
        h.0[hi - 1][hi],
        h.0[hi][hi - 1],
        h.0[hi][hi],
    );
    for k in lo..=hi {
        h.0[k][k] -= shift;
    }
    // QR by Givens rotations down the subdiagonal
    let mut rotations: Vec<(usize, f64, C64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h.0[k][k];
        let b = h.0[k + 1][k];
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if n == 0.0 {
            (1.0, ZERO)
        } else if a == ZERO {
            (0.0, b.conj() / C64::new(b.norm(), 0.0))
        } else {
            let phase = a / C64::new(a.norm(), 0.0);
            (a.norm() / n, phase * b.conj() / C64::new(n, 0.0))
        };
        // rows k, k+1: G = [[c, s], [-conj(s), c]]
        for j in 0..4 {
            let top = h.0[k][j];
            let bot = h.0[k + 1][j];
            h.0[k][j] = C64::new(c, 0.0) * top + s * bot;
            h.0[k + 1][j] = -s.conj() * top + C64::new(c, 0.0) * bot;
        }
        rotations.push((k, c, s));
    }
    // right-multiply by the adjoints: columns k, k+1
    for (k, c, s) in rotations {
        for i in 0..4 {
            let left = h.0[i][k];
            let right = h.0[i][k + 1];
            h.0[i][k] = C64::new(c, 0.0) * left + s.conj() * right;
            h.0[i][k + 1] = -s * left + C64::new(c, 0.0) * right;
        }
    }
    for k in lo..=hi {
        h.0[k][k] += shift;
    }
}

/// |det(m - lambda I)| by LU with partial pivoting.
pub fn char_poly_abs(m: &Mat4, lambda: C64) -> f64 {
    let mut a = *m;
    for i in 0..4 {
        a.0[i][i] -= lambda;
    }
    let mut det = ONE;
    for col in 0..4 {
        // pivot
        let mut pivot = col;
        for r in col + 1..4 {
            if a.0[r][col].norm() > a.0[pivot][col].norm() {
                pivot = r;
            }
        }
        if a.0[pivot][col] == ZERO {
            return 0.0;
        }
        if pivot != col {
            a.0.swap(pivot, col);
            det = -det;
        }
        det *= a.0[col][col];
        for r in col + 1..4 {
            let factor = a.0[r][col] / a.0[col][col];
            for c in col..4 {
                let sub = factor * a.0[col][c];
                a.0[r][c] -= sub;
            }
        }
    }
    det.norm()
}
