//! Domain types for baths and system states, random bath sampling, Ohmic
//! discretization and density-matrix validation.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::eig;
use crate::error::{Error, Result};
use crate::mat::{Mat2, Mat4, ONE, ZERO};

/// Hermiticity defect allowed for a valid density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace defect allowed for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue allowed for a valid density matrix.
pub const MIN_EIGENVALUE_TOL: f64 = -1e-10;

/// One environment spin: transition frequency and coupling constant, both in
/// units of the system frequency. The dressed frequencies `p` and `q` are
/// derived on demand so they can never go stale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathMode {
    pub omega: f64,
    pub c: f64,
}

impl BathMode {
    pub fn new(omega: f64, c: f64) -> Result<Self> {
        if omega.is_nan() || omega <= 0.0 || !omega.is_finite() {
            return Err(Error::config(format!(
                "bath mode frequency must be positive and finite, got {omega}"
            )));
        }
        if !c.is_finite() {
            return Err(Error::config(format!("bath mode coupling must be finite, got {c}")));
        }
        Ok(BathMode { omega, c })
    }

    /// Dressed frequency for the single-qubit coupling, sqrt(omega^2 + c^2).
    pub fn p(&self) -> f64 {
        self.omega.hypot(self.c)
    }

    /// Dressed frequency for the collective coupling, sqrt(omega^2 + 4 c^2).
    pub fn q(&self) -> f64 {
        self.omega.hypot(2.0 * self.c)
    }
}

/// Sign convention for the couplings inside a two-spin entangled block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSign {
    /// Both spins couple with +c.
    #[default]
    Equal,
    /// Second spin couples with -c.
    Opposite,
}

/// Initial state of the environment spins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BathInitialState {
    /// Each spin is diagonal in sigma_z with up population `n_plus[k]`
    /// (down population is `1 - n_plus[k]`).
    MixedDiagonal { n_plus: Vec<f64> },
    /// Each spin is in cos(alpha)|up> + sin(alpha)|down>.
    Pure { alphas: Vec<f64> },
    /// Spins are grouped into consecutive blocks of `block_size`, each block
    /// prepared in (|d..d> + |u..u>)/sqrt(2).
    GhzBlocks { block_size: usize, sign: PairSign },
}

/// Bath topology: either one private environment per qubit, or a single
/// environment shared by both qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Topology {
    Local {
        modes_a: Vec<BathMode>,
        modes_b: Vec<BathMode>,
    },
    Global { modes: Vec<BathMode> },
}

/// Full environment description: mode lists plus their initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub topology: Topology,
    pub initial_state: BathInitialState,
}

impl BathSpec {
    pub fn new(topology: Topology, initial_state: BathInitialState) -> Result<Self> {
        let spec = BathSpec {
            topology,
            initial_state,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let sides: Vec<&[BathMode]> = match &self.topology {
            Topology::Local { modes_a, modes_b } => vec![modes_a, modes_b],
            Topology::Global { modes } => vec![modes],
        };
        for side in &sides {
            if side.is_empty() {
                return Err(Error::config("bath mode list must be non-empty"));
            }
        }
        let total: usize = sides.iter().map(|s| s.len()).sum();
        match &self.initial_state {
            BathInitialState::MixedDiagonal { n_plus } => {
                if n_plus.len() != total {
                    return Err(Error::config(format!(
                        "n_plus length {} does not match mode count {total}",
                        n_plus.len()
                    )));
                }
                if let Some(bad) = n_plus.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(Error::config(format!("population n_plus={bad} outside [0,1]")));
                }
            }
            BathInitialState::Pure { alphas } => {
                if alphas.len() != total {
                    return Err(Error::config(format!(
                        "alphas length {} does not match mode count {total}",
                        alphas.len()
                    )));
                }
            }
            BathInitialState::GhzBlocks { block_size, .. } => {
                if *block_size == 0 {
                    return Err(Error::config("GHZ block size must be positive"));
                }
                for side in &sides {
                    if side.len() % block_size != 0 {
                        return Err(Error::config(format!(
                            "mode count {} not divisible by GHZ block size {block_size}",
                            side.len()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Total number of environment spins over all baths.
    pub fn total_modes(&self) -> usize {
        match &self.topology {
            Topology::Local { modes_a, modes_b } => modes_a.len() + modes_b.len(),
            Topology::Global { modes } => modes.len(),
        }
    }

    /// Population asymmetry delta_k = n_plus - n_minus for mode `k` (global
    /// index, bath A before bath B); zero for non-mixed states.
    pub fn delta(&self, k: usize) -> f64 {
        match &self.initial_state {
            BathInitialState::MixedDiagonal { n_plus } => 2.0 * n_plus[k] - 1.0,
            _ => 0.0,
        }
    }

    /// Single-spin initial density matrix for mode `k` (global index).
    /// Not defined for block-entangled states.
    pub fn mode_state(&self, k: usize) -> Result<Mat2> {
        match &self.initial_state {
            BathInitialState::MixedDiagonal { n_plus } => Ok(Mat2::diag(
                C64::new(n_plus[k], 0.0),
                C64::new(1.0 - n_plus[k], 0.0),
            )),
            BathInitialState::Pure { alphas } => {
                let (s, c) = alphas[k].sin_cos();
                Ok(Mat2([
                    [C64::new(c * c, 0.0), C64::new(c * s, 0.0)],
                    [C64::new(c * s, 0.0), C64::new(s * s, 0.0)],
                ]))
            }
            BathInitialState::GhzBlocks { .. } => Err(Error::state(
                "block-entangled bath has no per-mode density matrix",
            )),
        }
    }
}

/// Central two-qubit system parameters. Both qubits share the transition
/// frequency omega_s; the coupling-operator eigenvalue conventions are
/// exposed as constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub omega_s: f64,
}

impl SystemSpec {
    pub fn new(omega_s: f64) -> Result<Self> {
        if omega_s.is_nan() || omega_s <= 0.0 || !omega_s.is_finite() {
            return Err(Error::config(format!(
                "omega_s must be positive and finite, got {omega_s}"
            )));
        }
        Ok(SystemSpec { omega_s })
    }
}

/// sigma_z^A + sigma_z^B eigenvalues on |uu>, |ud>, |du>, |dd>.
pub const GLOBAL_COUPLING_EIGS: [i32; 4] = [2, 0, 0, -2];
/// sigma_z^A eigenvalue per basis state.
pub const QUBIT_A_EIGS: [i32; 4] = [1, 1, -1, -1];
/// sigma_z^B eigenvalue per basis state.
pub const QUBIT_B_EIGS: [i32; 4] = [1, -1, 1, -1];

/// Diagnostic produced by [`validate_density_matrix`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StateReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl StateReport {
    pub fn pass(&self) -> bool {
        self.hermiticity_defect <= HERMITICITY_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= MIN_EIGENVALUE_TOL
    }
}

/// 4x4 density matrix of the two central qubits, basis |uu>, |ud>, |du>, |dd>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(pub Mat4);

impl DensityMatrix4 {
    /// Builds a density matrix, enforcing Hermiticity, unit trace and
    /// positive semidefiniteness at the crate tolerances.
    pub fn new(m: Mat4) -> Result<Self> {
        let rho = DensityMatrix4(m);
        let report = rho.validate();
        if !report.pass() {
            return Err(Error::state(format!(
                "invalid density matrix: hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
                report.hermiticity_defect, report.trace_defect, report.min_eigenvalue
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix without validation; for internal construction of
    /// states that are valid by construction.
    pub fn new_unchecked(m: Mat4) -> Self {
        DensityMatrix4(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// Projector onto (|uu> + |dd>)/sqrt(2).
    pub fn bell_phi_plus() -> Self {
        Self::pure_state([0.5f64.sqrt(), 0.0, 0.0, 0.5f64.sqrt()])
    }

    /// Projector onto (|uu> - |dd>)/sqrt(2).
    pub fn bell_phi_minus() -> Self {
        Self::pure_state([0.5f64.sqrt(), 0.0, 0.0, -(0.5f64.sqrt())])
    }

    /// Projector onto (|ud> + |du>)/sqrt(2).
    pub fn bell_psi_plus() -> Self {
        Self::pure_state([0.0, 0.5f64.sqrt(), 0.5f64.sqrt(), 0.0])
    }

    /// Projector onto (|ud> - |du>)/sqrt(2).
    pub fn bell_psi_minus() -> Self {
        Self::pure_state([0.0, 0.5f64.sqrt(), -(0.5f64.sqrt()), 0.0])
    }

    /// Projector onto (|u>+|d>)/sqrt(2) on each qubit; every entry is 1/4.
    pub fn separable_plus_plus() -> Self {
        Self::pure_state([0.5, 0.5, 0.5, 0.5])
    }

    pub fn maximally_mixed() -> Self {
        let mut m = Mat4::zero();
        for i in 0..4 {
            m.0[i][i] = C64::new(0.25, 0.0);
        }
        DensityMatrix4(m)
    }

    /// Projector onto a real four-amplitude pure state (not normalized here;
    /// amplitudes are assumed normalized by the caller).
    fn pure_state(amps: [f64; 4]) -> Self {
        let mut m = Mat4::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = C64::new(amps[r] * amps[c], 0.0);
            }
        }
        DensityMatrix4(m)
    }

    pub fn validate(&self) -> StateReport {
        validate_density_matrix(self)
    }
}

/// Reports the Hermiticity defect, trace defect and minimum eigenvalue of a
/// candidate two-qubit state. Pure diagnostic: never fails.
pub fn validate_density_matrix(rho: &DensityMatrix4) -> StateReport {
    let m = &rho.0;
    let mut herm = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            herm = herm.max((m.0[r][c] - m.0[c][r].conj()).norm());
        }
    }
    let trace_defect = (m.trace() - ONE).norm();
    // eigenvalues of the Hermitian part; for a near-Hermitian matrix the
    // imaginary parts returned by the solver are negligible
    let mut h = Mat4::zero();
    for r in 0..4 {
        for c in 0..4 {
            h.0[r][c] = (m.0[r][c] + m.0[c][r].conj()) * C64::new(0.5, 0.0);
        }
    }
    let eigs = eig::eigenvalues4(&h).unwrap_or([ZERO; 4]);
    let min_eigenvalue = eigs.iter().map(|l| l.re).fold(f64::INFINITY, f64::min);
    StateReport {
        hermiticity_defect: herm,
        trace_defect,
        min_eigenvalue,
    }
}

/// Thermal populations (n_plus, n_minus) of a bath spin at inverse
/// temperature `beta`: n_pm = exp(-+ beta omega) / (2 cosh(beta omega)).
/// The pair always sums to one exactly.
pub fn thermal_populations(beta: f64, omega: f64) -> Result<(f64, f64)> {
    if beta < 0.0 || beta.is_nan() {
        return Err(Error::config(format!("beta must be nonnegative, got {beta}")));
    }
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::config(format!("omega must be positive, got {omega}")));
    }
    let n_plus = 1.0 / (1.0 + (2.0 * beta * omega).exp());
    Ok((n_plus, 1.0 - n_plus))
}

/// Which topology [`sample_bath`] should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    Local,
    Global,
}

/// Bath family tag with its state parameter, as drawn by [`sample_bath`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilySpec {
    /// Diagonal mixed state with uniform asymmetry delta = n_plus - n_minus.
    Mixed { delta: f64 },
    /// Product pure state with uniform angle alpha.
    Pure { alpha: f64 },
    /// Two-spin GHZ blocks with the given coupling sign convention.
    GhzPairs { sign: PairSign },
}

/// Draws a bath with `n_modes` spins per environment (per local bath, or in
/// total for the global bath), frequencies and couplings uniform on the open
/// intervals given. Deterministic in the seed: the generator is ChaCha12
/// keyed by `seed`, stream 0.
pub fn sample_bath(
    seed: u64,
    n_modes: usize,
    omega_range: (f64, f64),
    c_range: (f64, f64),
    topology: TopologyKind,
    family: FamilySpec,
) -> Result<BathSpec> {
    sample_bath_stream(seed, 0, n_modes, omega_range, c_range, topology, family)
}

/// [`sample_bath`] on an explicit ChaCha stream, so callers running several
/// scenarios off one seed get independent, order-insensitive draws.
pub fn sample_bath_stream(
    seed: u64,
    stream: u64,
    n_modes: usize,
    omega_range: (f64, f64),
    c_range: (f64, f64),
    topology: TopologyKind,
    family: FamilySpec,
) -> Result<BathSpec> {
    if n_modes == 0 {
        return Err(Error::config("n_modes must be at least 1"));
    }
    check_range("omega_range", omega_range)?;
    check_range("c_range", c_range)?;
    match family {
        FamilySpec::Mixed { delta } => {
            if !(-1.0..=1.0).contains(&delta) {
                return Err(Error::config(format!("delta={delta} outside [-1,1]")));
            }
        }
        FamilySpec::Pure { alpha } => {
            if !alpha.is_finite() {
                return Err(Error::config("alpha must be finite"));
            }
        }
        FamilySpec::GhzPairs { .. } => {
            if !n_modes.is_multiple_of(2) {
                return Err(Error::config(format!(
                    "GHZ pair bath needs an even mode count, got {n_modes}"
                )));
            }
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);

    let n_baths = match topology {
        TopologyKind::Local => 2,
        TopologyKind::Global => 1,
    };
    let mut baths: Vec<Vec<BathMode>> = Vec::with_capacity(n_baths);
    for _ in 0..n_baths {
        let mut modes = Vec::with_capacity(n_modes);
        match family {
            FamilySpec::Mixed { .. } | FamilySpec::Pure { .. } => {
                for _ in 0..n_modes {
                    let omega = open_uniform(&mut rng, omega_range);
                    let c = open_uniform(&mut rng, c_range);
                    modes.push(BathMode { omega, c });
                }
            }
            FamilySpec::GhzPairs { sign } => {
                for _ in 0..n_modes / 2 {
                    let omega = open_uniform(&mut rng, omega_range);
                    let c = open_uniform(&mut rng, c_range);
                    modes.push(BathMode { omega, c });
                    let c2 = match sign {
                        PairSign::Equal => c,
                        PairSign::Opposite => -c,
                    };
                    modes.push(BathMode { omega, c: c2 });
                }
            }
        }
        baths.push(modes);
    }

    let total = n_baths * n_modes;
    let initial_state = match family {
        FamilySpec::Mixed { delta } => BathInitialState::MixedDiagonal {
            n_plus: vec![(1.0 + delta) / 2.0; total],
        },
        FamilySpec::Pure { alpha } => BathInitialState::Pure {
            alphas: vec![alpha; total],
        },
        FamilySpec::GhzPairs { sign } => BathInitialState::GhzBlocks {
            block_size: 2,
            sign,
        },
    };

    let topology = match topology {
        TopologyKind::Local => {
            let modes_b = baths.pop().unwrap();
            let modes_a = baths.pop().unwrap();
            Topology::Local { modes_a, modes_b }
        }
        TopologyKind::Global => Topology::Global {
            modes: baths.pop().unwrap(),
        },
    };
    BathSpec::new(topology, initial_state)
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::config(format!(
            "{name} must be a non-degenerate finite interval, got ({lo}, {hi})"
        )));
    }
    Ok(())
}

/// Uniform draw from the open interval (lo, hi).
fn open_uniform(rng: &mut ChaCha12Rng, (lo, hi): (f64, f64)) -> f64 {
    loop {
        let x = rng.random_range(lo..hi);
        if x > lo {
            return x;
        }
    }
}

/// Ohmic spectral weight: couplings carry the density eta * omega *
/// exp(-omega/omega_c), so mode sums over c_k^2 approximate the continuum
/// integral of that density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhmicSpec {
    pub eta: f64,
    pub omega_c: f64,
}

impl OhmicSpec {
    pub fn new(eta: f64, omega_c: f64) -> Result<Self> {
        if eta < 0.0 || !eta.is_finite() {
            return Err(Error::config(format!("eta must be nonnegative, got {eta}")));
        }
        if omega_c.is_nan() || omega_c <= 0.0 || !omega_c.is_finite() {
            return Err(Error::config(format!("omega_c must be positive, got {omega_c}")));
        }
        Ok(OhmicSpec { eta, omega_c })
    }
}

/// Minimum mode count accepted by [`ohmic_discretize`].
pub const OHMIC_MIN_MODES: usize = 100;

/// Discretizes the Ohmic spectral density on a midpoint grid over
/// (0, omega_max): omega_i = (i + 1/2) d, c_i^2 = eta omega_i
/// exp(-omega_i/omega_c) d. Sums over c_k^2 h(omega_k) then converge to
/// the continuum integral of eta omega exp(-omega/omega_c) h(omega) at
/// second order in the spacing.
///
/// Returns a local-topology bath with both environments on the same grid,
/// each spin in the infinite-temperature mixed state (the local kernel is
/// population-insensitive).
pub fn ohmic_discretize(spec: OhmicSpec, m_modes: usize, omega_max: f64) -> Result<BathSpec> {
    if m_modes < OHMIC_MIN_MODES {
        return Err(Error::config(format!(
            "ohmic discretization needs at least {OHMIC_MIN_MODES} modes, got {m_modes}"
        )));
    }
    if omega_max.is_nan() || omega_max < 5.0 * spec.omega_c {
        return Err(Error::config(format!(
            "omega_max={omega_max} must cover at least 5 omega_c = {}",
            5.0 * spec.omega_c
        )));
    }
    let d = omega_max / m_modes as f64;
    let modes: Vec<BathMode> = (0..m_modes)
        .map(|i| {
            let omega = (i as f64 + 0.5) * d;
            let c = (spec.eta * omega * (-omega / spec.omega_c).exp() * d).sqrt();
            BathMode { omega, c }
        })
        .collect();
    BathSpec::new(
        Topology::Local {
            modes_a: modes.clone(),
            modes_b: modes,
        },
        BathInitialState::MixedDiagonal {
            n_plus: vec![0.5; 2 * m_modes],
        },
    )
}
