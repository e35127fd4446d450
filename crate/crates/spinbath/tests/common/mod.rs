//! Shared helpers for the integration suites: seeded random quantum objects
//! and an independent polynomial-root spectrum oracle.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use spinbath::mat::{Mat2, Mat4, ONE, ZERO};
use spinbath::model::DensityMatrix4;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha12Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random density matrix from a Ginibre draw: A A^+ normalized to unit trace.
pub fn random_density_matrix(rng: &mut ChaCha12Rng) -> DensityMatrix4 {
    let mut a = Mat4::zero();
    for r in 0..4 {
        for c in 0..4 {
            a.0[r][c] = random_complex(rng);
        }
    }
    let m = a.mul(&a.adjoint());
    let trace = m.trace().re;
    DensityMatrix4::new_unchecked(m.scale(C64::new(1.0 / trace, 0.0)))
}

/// Random Hermitian 4x4 (not necessarily positive).
pub fn random_hermitian(rng: &mut ChaCha12Rng) -> Mat4 {
    let mut m = Mat4::zero();
    for r in 0..4 {
        for c in r..4 {
            if r == c {
                m.0[r][c] = C64::new(rng.random_range(-1.0..1.0), 0.0);
            } else {
                let v = random_complex(rng);
                m.0[r][c] = v;
                m.0[c][r] = v.conj();
            }
        }
    }
    m
}

/// Random X-form density matrix (PSD by construction).
pub fn random_x_state(rng: &mut ChaCha12Rng) -> DensityMatrix4 {
    let raw: Vec<f64> = (0..4).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let d: Vec<f64> = raw.iter().map(|v| v / total).collect();
    let r14 = rng.random_range(0.0..1.0) * (d[0] * d[3]).sqrt();
    let phi14 = rng.random_range(0.0..std::f64::consts::TAU);
    let r23 = rng.random_range(0.0..1.0) * (d[1] * d[2]).sqrt();
    let phi23 = rng.random_range(0.0..std::f64::consts::TAU);
    let mut m = Mat4::zero();
    for i in 0..4 {
        m.0[i][i] = C64::new(d[i], 0.0);
    }
    m.0[0][3] = C64::from_polar(r14, phi14);
    m.0[3][0] = m.0[0][3].conj();
    m.0[1][2] = C64::from_polar(r23, phi23);
    m.0[2][1] = m.0[1][2].conj();
    DensityMatrix4::new_unchecked(m)
}

/// Random single-qubit unitary (Euler-angle parametrization).
pub fn random_unitary2(rng: &mut ChaCha12Rng) -> Mat2 {
    let theta = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
    let (a, b) = (
        rng.random_range(0.0..std::f64::consts::TAU),
        rng.random_range(0.0..std::f64::consts::TAU),
    );
    let (st, ct) = theta.sin_cos();
    Mat2([
        [C64::from_polar(ct, a), C64::from_polar(st, b)],
        [-C64::from_polar(st, -b), C64::from_polar(ct, -a)],
    ])
}

/// Monic characteristic polynomial x^4 + a3 x^3 + a2 x^2 + a1 x + a0 of a
/// 4x4 matrix, via Newton's identities on the power traces.
pub fn char_poly_coeffs(m: &Mat4) -> [C64; 4] {
    let m2 = m.mul(m);
    let m3 = m2.mul(m);
    let m4 = m3.mul(m);
    let (t1, t2, t3, t4) = (m.trace(), m2.trace(), m3.trace(), m4.trace());
    let e1 = t1;
    let e2 = (e1 * t1 - t2) / C64::new(2.0, 0.0);
    let e3 = (e2 * t1 - e1 * t2 + t3) / C64::new(3.0, 0.0);
    let e4 = (e3 * t1 - e2 * t2 + e1 * t3 - t4) / C64::new(4.0, 0.0);
    // p(x) = x^4 - e1 x^3 + e2 x^2 - e3 x + e4
    [-e1, e2, -e3, e4]
}

/// Roots of the monic quartic by Durand-Kerner iteration: an eigenvalue
/// oracle fully independent of the QR path.
pub fn quartic_roots(coeffs: [C64; 4]) -> [C64; 4] {
    let p = |x: C64| {
        (((x + coeffs[0]) * x + coeffs[1]) * x + coeffs[2]) * x + coeffs[3]
    };
    let seedling = C64::new(0.4, 0.9);
    let scale = 1.0
        + coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .powf(0.25);
    let mut roots = [ZERO; 4];
    let mut acc = ONE;
    for r in roots.iter_mut() {
        acc *= seedling;
        *r = acc * C64::new(scale, 0.0);
    }
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..4 {
            let mut denom = ONE;
            for j in 0..4 {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            if denom == ZERO {
                continue;
            }
            let step = p(roots[k]) / denom;
            roots[k] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 * scale {
            break;
        }
    }
    roots
}

/// Eigenvalue oracle: spectrum of `m` via the characteristic polynomial and
/// Durand-Kerner roots.
pub fn spectrum_oracle(m: &Mat4) -> [C64; 4] {
    quartic_roots(char_poly_coeffs(m))
}

/// Match two unordered spectra greedily; returns the largest pairing error.
pub fn spectrum_distance(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut remaining: Vec<C64> = b.to_vec();
    let mut worst = 0.0f64;
    for v in a {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (v - w).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        worst = worst.max(dist);
        remaining.swap_remove(idx);
    }
    worst
}

pub fn max_table_diff(a: &[[C64; 4]; 4], b: &[[C64; 4]; 4]) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            worst = worst.max((a[r][c] - b[r][c]).norm());
        }
    }
    worst
}
