//! Closed-form dephasing coefficients f(t) (and g(t) for the shared bath)
//! for every bath family, plus the Ohmic-continuum closed forms.
//!
//! All kernels take a scalar time and are mapped over grids by callers. The
//! products run in the fixed mode order, through [`stable_product`], so
//! results are bit-deterministic and safe against underflow on very large
//! baths.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::{stable_product, ONE};
use crate::model::{BathMode, OhmicSpec, PairSign};

/// Slack allowed on |f| <= 1 and |g| <= 1.
pub const COEFFICIENT_MAG_TOL: f64 = 1e-12;

/// sin(x)/x with the removable singularity filled in.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn require_nonempty(modes: &[BathMode]) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::config("kernel needs at least one bath mode"));
    }
    Ok(())
}

/// Dephasing coefficient of one local bath over spins in a diagonal mixed
/// state: f(t) = prod_k [1 - 2 c_k^2 sin^2(p_k t) / p_k^2]. Real valued and
/// independent of the populations.
pub fn local_f_mixed(modes: &[BathMode], t: f64) -> Result<C64> {
    require_nonempty(modes)?;
    Ok(stable_product(modes.iter().map(|m| {
        let s = t * sinc(m.p() * t); // sin(p t) / p
        C64::new(1.0 - 2.0 * m.c * m.c * s * s, 0.0)
    })))
}

/// Dephasing coefficient of one local bath over spins in product pure states
/// cos(a_k)|u> + sin(a_k)|d>:
/// f(t) = prod_k [1 - 2 (c_k^2/p_k^2) sin^2(p_k t)
///                - i (c_k/p_k) sin(2 p_k t) sin(2 a_k)].
pub fn local_f_pure(modes: &[BathMode], alphas: &[f64], t: f64) -> Result<C64> {
    require_nonempty(modes)?;
    if alphas.len() != modes.len() {
        return Err(Error::config(format!(
            "got {} alphas for {} modes",
            alphas.len(),
            modes.len()
        )));
    }
    Ok(stable_product(modes.iter().zip(alphas).map(|(m, &a)| {
        let p = m.p();
        let s = t * sinc(p * t); // sin(p t) / p
        let re = 1.0 - 2.0 * m.c * m.c * s * s;
        let im = -m.c / p.max(f64::MIN_POSITIVE) * (2.0 * p * t).sin() * (2.0 * a).sin();
        // the c/p ratio is finite even as p -> 0 since |c| <= p
        let im = if p == 0.0 { 0.0 } else { im };
        C64::new(re, im)
    })))
}

/// Dephasing coefficient of one local bath made of two-spin GHZ blocks with
/// shared per-block frequency and coupling (`blocks` holds one mode per
/// block). Equal signs: prod_j [1 - 2 (c_j^2/p_j^2) sin^2(2 p_j t)];
/// opposite signs: prod_j [1 - 8 (w_j^2 c_j^2 / p_j^4) sin^4(p_j t)].
pub fn local_f_pairs(blocks: &[BathMode], sign: PairSign, t: f64) -> Result<C64> {
    require_nonempty(blocks)?;
    Ok(stable_product(blocks.iter().map(|m| {
        let p = m.p();
        match sign {
            PairSign::Equal => {
                let s2 = 2.0 * t * sinc(2.0 * p * t); // sin(2 p t) / p
                C64::new(1.0 - 2.0 * m.c * m.c * s2 * s2, 0.0)
            }
            PairSign::Opposite => {
                let s = t * sinc(p * t); // sin(p t) / p
                let s_over_p = if p == 0.0 { 0.0 } else { s / p };
                C64::new(
                    1.0 - 8.0 * m.omega * m.omega * m.c * m.c * s_over_p.powi(2) * (p * t).sin().powi(2),
                    0.0,
                )
            }
        }
    })))
}

/// Trace factor of a single N-spin GHZ block under the per-qubit coupling
/// convention (eigenvalues +-1):
///
/// prod_k a_k + (1/2) ((e_n - e_m)/2)^N [prod_k (A_k + i B_k)
///                                       + prod_k (-A_k + i B_k)]
///
/// with a_k = 1 - (c_k^2/p_k^2) sin^2(p_k t) (1 - e_m e_n),
/// A_k = w_k c_k (1 - cos 2 p_k t) / p_k^2 and B_k = c_k sin(2 p_k t) / p_k.
pub fn local_block_trace(block: &[BathMode], e_m: i32, e_n: i32, t: f64) -> Result<C64> {
    require_nonempty(block)?;
    if e_m.abs() != 1 || e_n.abs() != 1 {
        return Err(Error::config(format!(
            "local coupling eigenvalues must be +1 or -1, got ({e_m}, {e_n})"
        )));
    }
    let n = block.len() as i32;
    let diag: C64 = stable_product(block.iter().map(|m| {
        let s = t * sinc(m.p() * t);
        C64::new(
            1.0 - m.c * m.c * s * s * (1.0 - (e_m * e_n) as f64),
            0.0,
        )
    }));
    let sign = (e_n - e_m) / 2; // in {-1, 0, +1}
    if sign == 0 {
        return Ok(diag);
    }
    let prefactor = if sign == 1 || n % 2 == 0 { 0.5 } else { -0.5 };
    let plus: C64 = stable_product(block.iter().map(|m| cross_term(m, t, 1.0)));
    let minus: C64 = stable_product(block.iter().map(|m| cross_term(m, t, -1.0)));
    Ok(diag + (plus + minus) * C64::new(prefactor, 0.0))
}

/// A_k + i B_k (or with A negated) for the GHZ cross terms.
fn cross_term(m: &BathMode, t: f64, a_sign: f64) -> C64 {
    let p = m.p();
    let s = t * sinc(p * t); // sin(p t)/p
    let a = 2.0 * m.omega * m.c * s * (p * t).sin() / if p == 0.0 { 1.0 } else { p }; // w c (1 - cos 2pt)/p^2
    let b = 2.0 * m.c * s * (p * t).cos(); // c sin(2 p t)/p
    C64::new(a_sign * a, b)
}

fn check_deltas(modes: &[BathMode], deltas: &[f64]) -> Result<()> {
    if deltas.len() != modes.len() {
        return Err(Error::config(format!(
            "got {} deltas for {} modes",
            deltas.len(),
            modes.len()
        )));
    }
    if let Some(bad) = deltas.iter().find(|d| !(-1.0..=1.0).contains(*d)) {
        return Err(Error::config(format!("delta={bad} outside [-1,1]")));
    }
    Ok(())
}

/// Shared-bath coefficients for spins in a diagonal mixed state:
/// f = prod_k [1 - 8 (c_k^2/q_k^2) sin^2(q_k t)]                (delta-free)
/// g = prod_k [cos(q_k t) cos(w_k t) + (w_k/q_k) sin(q_k t) sin(w_k t)
///             + i delta_k (cos(q_k t) sin(w_k t)
///                          - (w_k/q_k) sin(q_k t) cos(w_k t))].
pub fn global_fg_mixed(modes: &[BathMode], deltas: &[f64], t: f64) -> Result<(C64, C64)> {
    require_nonempty(modes)?;
    check_deltas(modes, deltas)?;
    let f = stable_product(modes.iter().map(|m| {
        let s = t * sinc(m.q() * t); // sin(q t)/q
        C64::new(1.0 - 8.0 * m.c * m.c * s * s, 0.0)
    }));
    let g = stable_product(modes.iter().zip(deltas).map(|(m, &d)| {
        let q = m.q();
        let (cq, sq_over_q) = ((q * t).cos(), t * sinc(q * t));
        let (sw, cw) = (m.omega * t).sin_cos();
        let re = cq * cw + m.omega * sq_over_q * sw;
        let im = d * (cq * sw - m.omega * sq_over_q * cw);
        C64::new(re, im)
    }));
    Ok((f, g))
}

/// Shared-bath coefficients for spins in the pure state
/// (|u> + |d>)/sqrt(2) (alpha = pi/4):
/// f = prod_k [1 - 8 (c_k^2/q_k^2) sin^2(q_k t) - 2 i (c_k/q_k) sin(2 q_k t)]
/// g = prod_k [cos(q_k t) cos(w_k t) + (w_k/q_k) sin(q_k t) sin(w_k t)
///             - 2 i (c_k/q_k) sin(q_k t) cos(w_k t)].
pub fn global_fg_pure(modes: &[BathMode], t: f64) -> Result<(C64, C64)> {
    require_nonempty(modes)?;
    let f = stable_product(modes.iter().map(|m| {
        let q = m.q();
        let s = t * sinc(q * t); // sin(q t)/q
        let re = 1.0 - 8.0 * m.c * m.c * s * s;
        let im = if q == 0.0 {
            0.0
        } else {
            -2.0 * m.c / q * (2.0 * q * t).sin()
        };
        C64::new(re, im)
    }));
    let g = stable_product(modes.iter().map(|m| {
        let q = m.q();
        let (cq, sq_over_q) = ((q * t).cos(), t * sinc(q * t));
        let (sw, cw) = (m.omega * t).sin_cos();
        let re = cq * cw + m.omega * sq_over_q * sw;
        let im = -2.0 * m.c * sq_over_q * cw;
        C64::new(re, im)
    }));
    Ok((f, g))
}

/// Shared-bath coefficients for two-spin GHZ blocks, `modes` listed in
/// adjacent pairs (opposite-sign blocks carry the negated coupling on their
/// second spin). With C_i = cos(q_i t), S_i = sin(q_i t)/q_i and
/// phi = (w_1 + w_2) t, each block contributes
///
/// f_j = (1 - 8 c_1^2 S_1^2)(1 - 8 c_2^2 S_2^2)
///       + 16 c_1 c_2 (w_1 w_2 S_1^2 S_2^2 - C_1 C_2 S_1 S_2)
/// g_j = cos(phi)(C_1 C_2 - w_1 w_2 S_1 S_2 - 4 c_1 c_2 S_1 S_2)
///       + sin(phi)(w_1 S_1 C_2 + w_2 S_2 C_1).
pub fn global_fg_pairs(modes: &[BathMode], t: f64) -> Result<(C64, C64)> {
    require_nonempty(modes)?;
    if !modes.len().is_multiple_of(2) {
        return Err(Error::config(format!(
            "pair bath needs an even mode count, got {}",
            modes.len()
        )));
    }
    let mut f_factors = Vec::with_capacity(modes.len() / 2);
    let mut g_factors = Vec::with_capacity(modes.len() / 2);
    for pair in modes.chunks(2) {
        let (m1, m2) = (&pair[0], &pair[1]);
        let (c1, c2) = ((m1.q() * t).cos(), (m2.q() * t).cos());
        let (s1, s2) = (t * sinc(m1.q() * t), t * sinc(m2.q() * t));
        let f_j = (1.0 - 8.0 * m1.c * m1.c * s1 * s1) * (1.0 - 8.0 * m2.c * m2.c * s2 * s2)
            + 16.0 * m1.c * m2.c * (m1.omega * m2.omega * s1 * s1 * s2 * s2 - c1 * c2 * s1 * s2);
        let (sphi, cphi) = ((m1.omega + m2.omega) * t).sin_cos();
        let g_j = cphi * (c1 * c2 - m1.omega * m2.omega * s1 * s2 - 4.0 * m1.c * m2.c * s1 * s2)
            + sphi * (m1.omega * s1 * c2 + m2.omega * s2 * c1);
        f_factors.push(C64::new(f_j, 0.0));
        g_factors.push(C64::new(g_j, 0.0));
    }
    Ok((
        stable_product(f_factors.into_iter()),
        stable_product(g_factors.into_iter()),
    ))
}

/// Coefficient multiplying the (2,4)/(3,4)-type coherences of the shared
/// bath, given the (1,2)-type coefficient `g`. Diagonal mixed spins give the
/// conjugate; the pure and block families give `g` itself.
pub fn global_g_lower(g: C64, family_is_mixed: bool) -> C64 {
    if family_is_mixed {
        g.conj()
    } else {
        g
    }
}

/// Continuum closed forms reached by an infinite Ohmic bath at weak coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OhmicVariant {
    LocalMixed,
    PairsEqual,
    PairsOpposite,
}

/// Closed-form Ohmic dephasing coefficient:
/// local mixed      (1 + 4 wc^2 t^2)^(-eta/2)
/// pairs, equal     (1 + 16 wc^2 t^2)^(-eta/2)
/// pairs, opposite  (1 + 16 wc^2 t^2)^(+eta/2) (1 + 4 wc^2 t^2)^(-2 eta)
///
/// Long-time behavior: the first two decay like (2 wc t)^(-eta) and
/// (4 wc t)^(-eta); the opposite-coupling form falls off as t^(-3 eta).
/// These asymptotics are not exposed as operations; the exact forms above
/// are authoritative.
pub fn ohmic_closed_form(spec: &OhmicSpec, variant: OhmicVariant, t: f64) -> f64 {
    let wt2 = spec.omega_c * spec.omega_c * t * t;
    match variant {
        OhmicVariant::LocalMixed => (1.0 + 4.0 * wt2).powf(-0.5 * spec.eta),
        OhmicVariant::PairsEqual => (1.0 + 16.0 * wt2).powf(-0.5 * spec.eta),
        OhmicVariant::PairsOpposite => {
            (1.0 + 16.0 * wt2).powf(0.5 * spec.eta) * (1.0 + 4.0 * wt2).powf(-2.0 * spec.eta)
        }
    }
}

/// Dephasing coefficients sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingCoefficients {
    pub times: Vec<f64>,
    pub f: Vec<C64>,
    /// Present for the shared-bath topology only.
    pub g: Option<Vec<C64>>,
}

impl DephasingCoefficients {
    pub fn new(times: Vec<f64>, f: Vec<C64>, g: Option<Vec<C64>>) -> Result<Self> {
        if times.len() != f.len() {
            return Err(Error::config("times and f lengths differ"));
        }
        if times.windows(2).any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan()) {
            return Err(Error::config("time grid must be strictly ascending"));
        }
        if let Some(g) = &g {
            if g.len() != times.len() {
                return Err(Error::config("times and g lengths differ"));
            }
        }
        let check = |name: &str, vals: &[C64]| -> Result<()> {
            for (i, v) in vals.iter().enumerate() {
                if v.norm() > 1.0 + COEFFICIENT_MAG_TOL {
                    return Err(Error::state(format!(
                        "|{name}(t={})| = {} exceeds 1",
                        times[i],
                        v.norm()
                    )));
                }
            }
            if !times.is_empty() && times[0] == 0.0 && (vals[0] - ONE).norm() > COEFFICIENT_MAG_TOL
            {
                return Err(Error::state(format!("{name}(0) must be 1, got {}", vals[0])));
            }
            Ok(())
        };
        check("f", &f)?;
        if let Some(gv) = &g {
            check("g", gv)?;
        }
        Ok(DephasingCoefficients { times, f, g })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(omega: f64, c: f64) -> BathMode {
        BathMode { omega, c }
    }

    #[test]
    fn all_kernels_start_at_one() {
        let modes = [mode(1.3, 0.15), mode(1.8, 0.11)];
        assert_eq!(local_f_mixed(&modes, 0.0).unwrap(), ONE);
        assert_eq!(local_f_pure(&modes, &[0.4, 0.9], 0.0).unwrap(), ONE);
        assert_eq!(local_f_pairs(&modes, PairSign::Equal, 0.0).unwrap(), ONE);
        assert_eq!(local_f_pairs(&modes, PairSign::Opposite, 0.0).unwrap(), ONE);
        let (f, g) = global_fg_mixed(&modes, &[0.9, 0.9], 0.0).unwrap();
        assert_eq!((f, g), (ONE, ONE));
        let (f, g) = global_fg_pure(&modes, 0.0).unwrap();
        assert_eq!((f, g), (ONE, ONE));
        let paired = [mode(1.3, 0.15), mode(1.3, 0.15)];
        let (f, g) = global_fg_pairs(&paired, 0.0).unwrap();
        assert!((f - ONE).norm() < 1e-15 && (g - ONE).norm() < 1e-15);
    }

    #[test]
    fn decoupled_baths_do_not_dephase() {
        let modes = [mode(1.3, 0.0), mode(0.7, 0.0)];
        for &t in &[0.3, 2.0, 17.0] {
            assert!((local_f_mixed(&modes, t).unwrap() - ONE).norm() < 1e-12);
            let (f, g) = global_fg_mixed(&modes, &[0.5, -0.2], t).unwrap();
            assert!((f - ONE).norm() < 1e-12);
            assert!((g - ONE).norm() < 1e-12, "g = {g}");
            let (f, g) = global_fg_pure(&modes, t).unwrap();
            assert!((f - ONE).norm() < 1e-12 && (g - ONE).norm() < 1e-12);
            let paired = [mode(1.3, 0.0), mode(0.9, 0.0)];
            let (f, g) = global_fg_pairs(&paired, t).unwrap();
            assert!((f - ONE).norm() < 1e-12 && (g - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn resonant_single_mode_is_cos_2t() {
        // omega = 0, c = 1 gives p = 1 and f(t) = 1 - 2 sin^2 t = cos 2t
        let modes = [mode(0.0, 1.0)];
        for &t in &[0.2, std::f64::consts::FRAC_PI_4, 1.9] {
            let f = local_f_mixed(&modes, t).unwrap();
            assert!((f.re - (2.0 * t).cos()).abs() < 1e-14);
            assert_eq!(f.im, 0.0);
        }
        let at_quarter_pi = local_f_mixed(&modes, std::f64::consts::FRAC_PI_4).unwrap();
        assert!(at_quarter_pi.norm() < 1e-15);
    }

    #[test]
    fn pure_with_zero_alpha_matches_mixed() {
        let modes = [mode(1.2, 0.18), mode(1.7, 0.12), mode(1.05, 0.2)];
        for &t in &[0.5, 4.2, 13.0] {
            let fp = local_f_pure(&modes, &[0.0; 3], t).unwrap();
            let fm = local_f_mixed(&modes, t).unwrap();
            assert!((fp - fm).norm() < 1e-14);
            assert_eq!(fp.im, 0.0);
        }
    }

    #[test]
    fn pair_kernels_at_resonance() {
        let blocks = [mode(0.0, 1.0)];
        for &t in &[0.3, 0.9, 2.2] {
            let fe = local_f_pairs(&blocks, PairSign::Equal, t).unwrap();
            assert!((fe.re - (4.0 * t).cos()).abs() < 1e-13);
            let fo = local_f_pairs(&blocks, PairSign::Opposite, t).unwrap();
            assert!((fo - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn global_single_mode_closed_values() {
        // omega = 0, c = 1/2 gives q = 1: f = cos 2t, g = cos t
        let modes = [mode(0.0, 0.5)];
        for &t in &[0.4, 1.1, 3.0] {
            let (f, g) = global_fg_mixed(&modes, &[0.9], t).unwrap();
            assert!((f.re - (2.0 * t).cos()).abs() < 1e-14);
            assert!((g.re - t.cos()).abs() < 1e-14);
            assert!(g.im.abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_f_ignores_deltas_g_does_not() {
        let modes = [mode(1.3, 0.19), mode(1.6, 0.11)];
        let t = 2.4;
        let (f1, g1) = global_fg_mixed(&modes, &[0.9, 0.9], t).unwrap();
        let (f2, g2) = global_fg_mixed(&modes, &[0.0, 0.0], t).unwrap();
        assert_eq!(f1, f2);
        assert!((g1 - g2).norm() > 1e-3);
    }

    #[test]
    fn block_trace_is_one_for_equal_eigenvalues() {
        let block = [mode(1.1, 0.14), mode(1.9, 0.16)];
        for e in [-1, 1] {
            let f = local_block_trace(&block, e, e, 3.1).unwrap();
            assert!((f - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn block_trace_rejects_global_eigenvalues() {
        let block = [mode(1.1, 0.14)];
        assert!(local_block_trace(&block, 2, -2, 1.0).is_err());
    }

    #[test]
    fn two_spin_block_equals_pair_kernel_factor() {
        // equal couplings: the N=2 block trace must reduce to the pair formula
        let golden = 0.618_033_988_749_894_8f64;
        for k in 1..=100 {
            let r1 = (k as f64 * golden).fract();
            let r2 = (k as f64 * golden * golden).fract();
            let r3 = (k as f64 * 0.414_213_562_373_095_1).fract();
            let omega = 0.4 + 1.6 * r1;
            let c = 0.05 + 0.4 * r2;
            let t = 12.0 * r3;
            let block = [mode(omega, c), mode(omega, c)];
            let via_block = local_block_trace(&block, 1, -1, t).unwrap();
            let via_pairs = local_f_pairs(&[mode(omega, c)], PairSign::Equal, t).unwrap();
            assert!(
                (via_block - via_pairs).norm() < 1e-12,
                "mismatch at omega={omega}, c={c}, t={t}: {via_block} vs {via_pairs}"
            );
        }
    }

    #[test]
    fn ohmic_closed_forms() {
        let spec = OhmicSpec::new(1.0, 1.0).unwrap();
        for v in [
            OhmicVariant::LocalMixed,
            OhmicVariant::PairsEqual,
            OhmicVariant::PairsOpposite,
        ] {
            assert_eq!(ohmic_closed_form(&spec, v, 0.0), 1.0);
        }
        let f10 = ohmic_closed_form(&spec, OhmicVariant::LocalMixed, 10.0);
        assert!((f10 - 401.0f64.powf(-0.5)).abs() < 1e-15);
        assert!((f10 - 0.049938).abs() < 1e-6);
    }

    #[test]
    fn coefficient_series_validation() {
        let times = vec![0.0, 1.0, 2.0];
        let ok = vec![ONE, C64::new(0.5, 0.1), C64::new(-0.2, 0.0)];
        assert!(DephasingCoefficients::new(times.clone(), ok, None).is_ok());
        let bad = vec![ONE, C64::new(1.5, 0.0), ONE];
        assert!(DephasingCoefficients::new(times, bad, None).is_err());
    }
}
