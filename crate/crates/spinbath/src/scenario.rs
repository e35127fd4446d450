//! Scenario runner: configuration ingestion, bath sampling, coefficient and
//! concurrence series evaluation, figure reproduction, CSV/SVG emission.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence, concurrence_xstate, is_x_form, ConcurrenceSeries};
use crate::error::{Error, Result};
use crate::kernels::{
    self, DephasingCoefficients, COEFFICIENT_MAG_TOL,
};
use crate::mat::Mat4;
use crate::model::{
    BathInitialState, BathMode, BathSpec, DensityMatrix4, FamilySpec, PairSign, SystemSpec,
    Topology, TopologyKind, HERMITICITY_TOL, MIN_EIGENVALUE_TOL, TRACE_TOL,
};
use crate::oracle;
use crate::rdm::{dephasing_table_global, dephasing_table_local};

/// Engines must agree to this bound on small baths.
pub const ENGINE_AGREEMENT_TOL: f64 = 1e-10;

/// Time grid: `n_points` samples from 0 to `t_max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub n_points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid {
            t_max: 20.0,
            n_points: 2000,
        }
    }
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|i| self.t_max * i as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Bath initial-state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Mixed,
    Pure,
    GhzPairs,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Mixed => "mixed",
            Family::Pure => "pure",
            Family::GhzPairs => "ghz_pairs",
        }
    }

    /// Fixed ChaCha stream per family, so adding one family to a run never
    /// perturbs another family's bath draw.
    fn stream(&self) -> u64 {
        match self {
            Family::Mixed => 0,
            Family::Pure => 1,
            Family::GhzPairs => 2,
        }
    }
}

/// Which evaluation path produces the dephasing table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Kernels,
    Oracle,
}

/// Initial state of the two central qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    BellPhiPlus,
    BellPhiMinus,
    BellPsiPlus,
    BellPsiMinus,
    SeparablePlusPlus,
    /// Explicit 4x4 matrix of (re, im) entries; must validate.
    Explicit(Box<[[(f64, f64); 4]; 4]>),
}

impl InitialState {
    pub fn density_matrix(&self) -> Result<DensityMatrix4> {
        Ok(match self {
            InitialState::BellPhiPlus => DensityMatrix4::bell_phi_plus(),
            InitialState::BellPhiMinus => DensityMatrix4::bell_phi_minus(),
            InitialState::BellPsiPlus => DensityMatrix4::bell_psi_plus(),
            InitialState::BellPsiMinus => DensityMatrix4::bell_psi_minus(),
            InitialState::SeparablePlusPlus => DensityMatrix4::separable_plus_plus(),
            InitialState::Explicit(entries) => {
                let mut m = Mat4::zero();
                for r in 0..4 {
                    for c in 0..4 {
                        m.0[r][c] = C64::new(entries[r][c].0, entries[r][c].1);
                    }
                }
                DensityMatrix4::new(m).map_err(|e| {
                    Error::config(format!("initial_state.explicit: {e}"))
                })?
            }
        })
    }
}

fn default_alpha() -> f64 {
    std::f64::consts::FRAC_PI_4
}
fn default_delta() -> f64 {
    0.9
}
fn default_omega_s() -> f64 {
    1.0
}
fn default_omega_range() -> (f64, f64) {
    (1.0, 2.0)
}
fn default_c_range() -> (f64, f64) {
    (0.1, 0.2)
}

/// Full description of one scenario, as read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub topology: TopologyKind,
    pub family: Family,
    /// Spins per local bath, or total spins of the global bath.
    pub n_modes: usize,
    pub seed: u64,
    pub initial_state: InitialState,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub ghz_sign: PairSign,
    #[serde(default = "default_omega_s")]
    pub omega_s: f64,
    #[serde(default)]
    pub time_grid: TimeGrid,
    #[serde(default = "default_omega_range")]
    pub omega_range: (f64, f64),
    #[serde(default = "default_c_range")]
    pub c_range: (f64, f64),
    /// Optional output directory recorded for CLI use.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::config("n_modes: must be at least 1"));
        }
        if self.family == Family::GhzPairs && !self.n_modes.is_multiple_of(2) {
            return Err(Error::config("n_modes: GHZ pair family needs an even count"));
        }
        let t_max = self.time_grid.t_max;
        if t_max.is_nan() || t_max <= 0.0 || !t_max.is_finite() {
            return Err(Error::config("time_grid.t_max: must be positive and finite"));
        }
        if self.time_grid.n_points < 2 {
            return Err(Error::config("time_grid.n_points: must be at least 2"));
        }
        if !self.alpha.is_finite() {
            return Err(Error::config("alpha: must be finite"));
        }
        if !(-1.0..=1.0).contains(&self.delta) {
            return Err(Error::config("delta: must lie in [-1, 1]"));
        }
        if self.omega_s.is_nan() || self.omega_s <= 0.0 || !self.omega_s.is_finite() {
            return Err(Error::config("omega_s: must be positive and finite"));
        }
        let check_range = |name: &str, (lo, hi): (f64, f64)| -> Result<()> {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::config(format!(
                    "{name}: must be a non-degenerate interval, got ({lo}, {hi})"
                )));
            }
            Ok(())
        };
        check_range("omega_range", self.omega_range)?;
        check_range("c_range", self.c_range)?;
        if self.engine == Engine::Kernels
            && self.topology == TopologyKind::Global
            && self.family == Family::Pure
            && (self.alpha - std::f64::consts::FRAC_PI_4).abs() > 1e-12
        {
            return Err(Error::config(
                "alpha: the global pure closed form is specific to alpha = pi/4; \
                 use the oracle engine for other angles",
            ));
        }
        self.initial_state.density_matrix()?;
        Ok(())
    }

    fn family_spec(&self) -> FamilySpec {
        match self.family {
            Family::Mixed => FamilySpec::Mixed { delta: self.delta },
            Family::Pure => FamilySpec::Pure { alpha: self.alpha },
            Family::GhzPairs => FamilySpec::GhzPairs { sign: self.ghz_sign },
        }
    }

    /// Samples the scenario bath. Local scenarios use one shared draw for
    /// both environments, so a single f(t) drives both qubits exactly as in
    /// the closed-form analysis.
    pub fn sample(&self) -> Result<BathSpec> {
        let drawn = crate::model::sample_bath_stream(
            self.seed,
            self.family.stream(),
            self.n_modes,
            self.omega_range,
            self.c_range,
            TopologyKind::Global,
            self.family_spec(),
        )?;
        let Topology::Global { modes } = drawn.topology else {
            unreachable!()
        };
        match self.topology {
            TopologyKind::Global => BathSpec::new(Topology::Global { modes }, drawn.initial_state),
            TopologyKind::Local => {
                let initial_state = match drawn.initial_state {
                    BathInitialState::MixedDiagonal { n_plus } => BathInitialState::MixedDiagonal {
                        n_plus: [n_plus.clone(), n_plus].concat(),
                    },
                    BathInitialState::Pure { alphas } => BathInitialState::Pure {
                        alphas: [alphas.clone(), alphas].concat(),
                    },
                    s @ BathInitialState::GhzBlocks { .. } => s,
                };
                BathSpec::new(
                    Topology::Local {
                        modes_a: modes.clone(),
                        modes_b: modes,
                    },
                    initial_state,
                )
            }
        }
    }
}

/// Tolerances recorded with every run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunTolerances {
    pub coefficient_magnitude: f64,
    pub hermiticity: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub engine_agreement: f64,
}

impl Default for RunTolerances {
    fn default() -> Self {
        RunTolerances {
            coefficient_magnitude: COEFFICIENT_MAG_TOL,
            hermiticity: HERMITICITY_TOL,
            trace: TRACE_TOL,
            min_eigenvalue: MIN_EIGENVALUE_TOL,
            engine_agreement: ENGINE_AGREEMENT_TOL,
        }
    }
}

/// Provenance and contract data for one run.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioMetadata {
    pub seed: u64,
    pub rng: &'static str,
    pub stream: u64,
    pub engine: Engine,
    pub topology: TopologyKind,
    pub family: Family,
    pub n_modes: usize,
    pub total_bath_spins: usize,
    pub omega_s: f64,
    pub tolerances: RunTolerances,
}

/// Everything one scenario produces.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub coefficients: DephasingCoefficients,
    pub concurrence: ConcurrenceSeries,
    pub metadata: ScenarioMetadata,
}

/// Closed-form dephasing table for a sampled bath. Which kernels apply is
/// read off the bath itself.
pub fn kernel_dephasing_table(bath: &BathSpec, t: f64) -> Result<[[C64; 4]; 4]> {
    match &bath.topology {
        Topology::Local { modes_a, modes_b } => {
            let f_a = local_side_kernel(bath, modes_a, 0, t)?;
            let f_b = local_side_kernel(bath, modes_b, modes_a.len(), t)?;
            Ok(dephasing_table_local(f_a, f_b))
        }
        Topology::Global { modes } => {
            let (f, g_upper, g_lower) = match &bath.initial_state {
                BathInitialState::MixedDiagonal { n_plus } => {
                    let deltas: Vec<f64> = n_plus.iter().map(|p| 2.0 * p - 1.0).collect();
                    let (f, g) = kernels::global_fg_mixed(modes, &deltas, t)?;
                    (f, g, kernels::global_g_lower(g, true))
                }
                BathInitialState::Pure { alphas } => {
                    if alphas
                        .iter()
                        .any(|a| (a - std::f64::consts::FRAC_PI_4).abs() > 1e-12)
                    {
                        return Err(Error::config(
                            "global pure closed form requires alpha = pi/4",
                        ));
                    }
                    let (f, g) = kernels::global_fg_pure(modes, t)?;
                    (f, g, kernels::global_g_lower(g, false))
                }
                BathInitialState::GhzBlocks { block_size, .. } => {
                    if *block_size != 2 {
                        return Err(Error::config(
                            "no closed form for global blocks larger than two spins; \
                             use the oracle engine",
                        ));
                    }
                    let (f, g) = kernels::global_fg_pairs(modes, t)?;
                    (f, g, kernels::global_g_lower(g, false))
                }
            };
            Ok(dephasing_table_global(f, g_upper, g_lower))
        }
    }
}

/// One local bath's closed-form coefficient (the f_12 convention).
fn local_side_kernel(bath: &BathSpec, modes: &[BathMode], offset: usize, t: f64) -> Result<C64> {
    match &bath.initial_state {
        BathInitialState::MixedDiagonal { .. } => kernels::local_f_mixed(modes, t),
        BathInitialState::Pure { alphas } => {
            kernels::local_f_pure(modes, &alphas[offset..offset + modes.len()], t)
        }
        BathInitialState::GhzBlocks { block_size, sign } => {
            if *block_size == 2 {
                let reps = pair_representatives(modes, *sign)?;
                kernels::local_f_pairs(&reps, *sign, t)
            } else {
                let factors: Result<Vec<C64>> = modes
                    .chunks(*block_size)
                    .map(|chunk| kernels::local_block_trace(chunk, 1, -1, t))
                    .collect();
                Ok(crate::mat::stable_product(factors?.into_iter()))
            }
        }
    }
}

/// One representative mode per two-spin block, after checking the shared
/// frequency and the coupling sign convention.
pub fn pair_representatives(modes: &[BathMode], sign: PairSign) -> Result<Vec<BathMode>> {
    if !modes.len().is_multiple_of(2) {
        return Err(Error::config("pair bath needs an even mode count"));
    }
    modes
        .chunks(2)
        .map(|pair| {
            let expected = match sign {
                PairSign::Equal => pair[0].c,
                PairSign::Opposite => -pair[0].c,
            };
            if pair[0].omega != pair[1].omega || pair[1].c != expected {
                return Err(Error::config(
                    "pair kernel requires shared frequency and the declared coupling signs",
                ));
            }
            Ok(pair[0])
        })
        .collect()
}

/// Runs one scenario: samples the bath, evaluates the dephasing table on the
/// time grid with the configured engine, assembles the RDM at each time and
/// reduces it to concurrence. Deterministic for a fixed config.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    config.validate()?;
    let bath = config.sample()?;
    let sys = SystemSpec::new(config.omega_s)?;
    let rho0 = config.initial_state.density_matrix()?;
    let times = config.time_grid.times();

    let mut f_series = Vec::with_capacity(times.len());
    let mut g_series = Vec::with_capacity(times.len());
    let mut c_series = Vec::with_capacity(times.len());
    for &t in &times {
        let table = match config.engine {
            Engine::Kernels => kernel_dephasing_table(&bath, t)?,
            Engine::Oracle => oracle::dephasing_exact(&bath, t)?,
        };
        match config.topology {
            TopologyKind::Local => f_series.push(table[0][2]),
            TopologyKind::Global => {
                f_series.push(table[0][3]);
                g_series.push(table[0][1]);
            }
        }
        let rho_t = oracle::apply_dephasing_table(&rho0, sys.omega_s, t, &table);
        let report = rho_t.validate();
        if !report.pass() {
            return Err(Error::state(format!(
                "evolved state failed validation at t={t}: hermiticity {:.3e}, trace {:.3e}, \
                 min eigenvalue {:.3e}",
                report.hermiticity_defect, report.trace_defect, report.min_eigenvalue
            )));
        }
        // Bell-state scenarios keep the X form, where the closed form is
        // exact; anything else (the separable starts) takes the spectral
        // route.
        let c = if is_x_form(&rho_t) {
            concurrence_xstate(&rho_t)?
        } else {
            concurrence(&rho_t)?
        };
        c_series.push(c);
    }

    let g = match config.topology {
        TopologyKind::Local => None,
        TopologyKind::Global => Some(g_series),
    };
    let coefficients = DephasingCoefficients::new(times.clone(), f_series, g)?;
    let concurrence = ConcurrenceSeries::new(times, c_series)?;
    let metadata = ScenarioMetadata {
        seed: config.seed,
        rng: "chacha12",
        stream: config.family.stream(),
        engine: config.engine,
        topology: config.topology,
        family: config.family,
        n_modes: config.n_modes,
        total_bath_spins: bath.total_modes(),
        omega_s: config.omega_s,
        tolerances: RunTolerances::default(),
    };
    Ok(ScenarioRun {
        coefficients,
        concurrence,
        metadata,
    })
}

/// Bath sizes and system states behind each published figure.
pub fn figure_config(id: u32, family: Family, seed: u64) -> Result<ScenarioConfig> {
    let (topology, n_modes, initial_state) = match id {
        2 => (TopologyKind::Local, 6, InitialState::BellPhiPlus),
        3 => (TopologyKind::Local, 60, InitialState::BellPhiPlus),
        4 => (TopologyKind::Local, 400, InitialState::BellPhiPlus),
        5 => (TopologyKind::Global, 6, InitialState::SeparablePlusPlus),
        6 => (TopologyKind::Global, 60, InitialState::SeparablePlusPlus),
        7 => (TopologyKind::Global, 200, InitialState::SeparablePlusPlus),
        8 => (TopologyKind::Global, 800, InitialState::SeparablePlusPlus),
        other => {
            return Err(Error::config(format!(
                "figure id must be in 2..=8, got {other}"
            )))
        }
    };
    Ok(ScenarioConfig {
        topology,
        family,
        n_modes,
        seed,
        initial_state,
        engine: Engine::Kernels,
        alpha: default_alpha(),
        delta: default_delta(),
        ghz_sign: PairSign::Equal,
        omega_s: default_omega_s(),
        time_grid: TimeGrid::default(),
        omega_range: default_omega_range(),
        c_range: default_c_range(),
        out_dir: None,
    })
}

/// Output kinds [`emit_outputs`] can write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

/// Runs all three bath families of one figure and writes its CSV and SVG
/// into `out_dir`. Returns the created paths.
pub fn reproduce_figure(id: u32, seed: u64, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let families = [Family::Mixed, Family::Pure, Family::GhzPairs];
    let mut runs = Vec::new();
    for family in families {
        let config = figure_config(id, family, seed)?;
        runs.push((family.label().to_string(), run_scenario(&config)?));
    }
    let labeled: Vec<(&str, &ScenarioRun)> =
        runs.iter().map(|(l, r)| (l.as_str(), r)).collect();
    let mut paths = emit_outputs(
        &labeled,
        &[OutputFormat::Csv, OutputFormat::Svg],
        out_dir,
        &format!("fig{id}"),
    )?;
    // metadata for all families of the figure
    let meta_path = out_dir.join(format!("fig{id}_metadata.json"));
    let metas: Vec<&ScenarioMetadata> = runs.iter().map(|(_, r)| &r.metadata).collect();
    write_file(&meta_path, &serde_json::to_string_pretty(&metas).unwrap())?;
    paths.push(meta_path);
    Ok(paths)
}

/// Writes the requested formats for one or more labeled series. A single
/// series produces the plain six-column CSV; multiple series prepend a
/// `family` column. The SVG holds one polyline per series. All output bytes
/// are a pure function of the inputs.
pub fn emit_outputs(
    series: &[(&str, &ScenarioRun)],
    formats: &[OutputFormat],
    dir: &Path,
    stem: &str,
) -> Result<Vec<PathBuf>> {
    if series.is_empty() {
        return Err(Error::config("emit_outputs needs at least one series"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            OutputFormat::Csv => {
                let path = dir.join(format!("{stem}.csv"));
                let body = if series.len() == 1 {
                    csv_single(series[0].1)
                } else {
                    csv_multi(series)
                };
                write_file(&path, &body)?;
                written.push(path);
            }
            OutputFormat::Svg => {
                let path = dir.join(format!("{stem}.svg"));
                write_file(&path, &svg_plot(series, stem))?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body.as_bytes()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// 17-significant-digit scientific notation, locale-independent.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_row(run: &ScenarioRun, i: usize) -> String {
    let f = run.coefficients.f[i];
    let (g_re, g_im) = match &run.coefficients.g {
        Some(g) => (g[i].re, g[i].im),
        None => (0.0, 0.0),
    };
    format!(
        "{},{},{},{},{},{}",
        fmt_float(run.coefficients.times[i]),
        fmt_float(f.re),
        fmt_float(f.im),
        fmt_float(g_re),
        fmt_float(g_im),
        fmt_float(run.concurrence.values[i]),
    )
}

fn csv_single(run: &ScenarioRun) -> String {
    let mut out = String::from("t,f_re,f_im,g_re,g_im,concurrence\n");
    for i in 0..run.coefficients.times.len() {
        out.push_str(&csv_row(run, i));
        out.push('\n');
    }
    out
}

fn csv_multi(series: &[(&str, &ScenarioRun)]) -> String {
    let mut out = String::from("family,t,f_re,f_im,g_re,g_im,concurrence\n");
    for (label, run) in series {
        for i in 0..run.coefficients.times.len() {
            out.push_str(label);
            out.push(',');
            out.push_str(&csv_row(run, i));
            out.push('\n');
        }
    }
    out
}

const PLOT_STYLES: [(&str, &str); 3] = [
    ("#2266bb", "none"),    // solid
    ("#cc3333", "2,3"),     // dotted
    ("#d4a017", "8,4"),     // dashed
];

/// Minimal deterministic concurrence-versus-time plot.
fn svg_plot(series: &[(&str, &ScenarioRun)], title: &str) -> String {
    let (w, h) = (840.0, 560.0);
    let (left, right, top, bottom) = (60.0, 20.0, 30.0, 50.0);
    let t_max = series
        .iter()
        .map(|(_, r)| r.coefficients.times.last().copied().unwrap_or(1.0))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let x = |t: f64| left + (w - left - right) * t / t_max;
    let y = |c: f64| h - bottom - (h - top - bottom) * c;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n",
        left
    ));
    // axes
    s.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        left,
        h - bottom,
        w - right,
        h - bottom
    ));
    s.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        left,
        top,
        left,
        h - bottom
    ));
    // ticks
    for k in 0..=5 {
        let c = k as f64 / 5.0;
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{:.1}</text>\n",
            left - 5.0,
            y(c),
            left,
            y(c),
            left - 8.0,
            y(c) + 4.0,
            c
        ));
        let t = t_max * k as f64 / 5.0;
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{:.1}</text>\n",
            x(t),
            h - bottom,
            x(t),
            h - bottom + 5.0,
            x(t),
            h - bottom + 18.0,
            t
        ));
    }
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">t</text>\n",
        (left + w - right) / 2.0,
        h - 12.0
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">concurrence</text>\n",
        (top + h - bottom) / 2.0,
        (top + h - bottom) / 2.0
    ));
    // curves and legend
    for (idx, (label, run)) in series.iter().enumerate() {
        let (color, dash) = PLOT_STYLES[idx % PLOT_STYLES.len()];
        let mut points = String::new();
        for (t, c) in run
            .coefficients
            .times
            .iter()
            .zip(&run.concurrence.values)
        {
            points.push_str(&format!("{:.2},{:.2} ", x(*t), y(*c)));
        }
        let dash_attr = if dash == "none" {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{dash}\"")
        };
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr} \
             points=\"{}\"/>\n",
            points.trim_end()
        ));
        let ly = top + 16.0 * idx as f64 + 8.0;
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" \
             stroke-width=\"1.5\"{dash_attr}/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>\n",
            w - right - 150.0,
            w - right - 120.0,
            w - right - 114.0,
            ly + 4.0
        ));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ScenarioConfig {
        ScenarioConfig {
            topology: TopologyKind::Global,
            family: Family::Mixed,
            n_modes: 4,
            seed: 9,
            initial_state: InitialState::BellPhiPlus,
            engine: Engine::Kernels,
            alpha: default_alpha(),
            delta: 0.9,
            ghz_sign: PairSign::Equal,
            omega_s: 1.0,
            time_grid: TimeGrid {
                t_max: 10.0,
                n_points: 101,
            },
            omega_range: (1.0, 2.0),
            c_range: (0.1, 0.2),
            out_dir: None,
        }
    }

    #[test]
    fn run_starts_at_initial_concurrence() {
        let run = run_scenario(&small_config()).unwrap();
        assert!((run.concurrence.values[0] - 1.0).abs() < 1e-12);
        assert!((run.coefficients.f[0] - crate::mat::ONE).norm() < 1e-14);
    }

    #[test]
    fn local_runs_fill_no_g() {
        let mut cfg = small_config();
        cfg.topology = TopologyKind::Local;
        let run = run_scenario(&cfg).unwrap();
        assert!(run.coefficients.g.is_none());
    }

    #[test]
    fn config_json_round_trip_and_field_errors() {
        let text = r#"{
            "topology": "global",
            "family": "mixed",
            "n_modes": 4,
            "seed": 3,
            "initial_state": "bell_phi_plus"
        }"#;
        let cfg = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(cfg.omega_s, 1.0);
        assert_eq!(cfg.time_grid.n_points, 2000);

        let bad = r#"{
            "topology": "global",
            "family": "mixed",
            "n_modes": 0,
            "seed": 3,
            "initial_state": "bell_phi_plus"
        }"#;
        let err = ScenarioConfig::from_json(bad).unwrap_err();
        assert!(err.to_string().contains("n_modes"));
    }

    #[test]
    fn figure_ids_are_guarded() {
        assert!(figure_config(9, Family::Mixed, 1).is_err());
        assert!(figure_config(1, Family::Mixed, 1).is_err());
        assert!(figure_config(5, Family::Mixed, 1).is_ok());
    }

    #[test]
    fn csv_zero_fills_g_for_local_topology() {
        let mut cfg = small_config();
        cfg.topology = TopologyKind::Local;
        cfg.time_grid.n_points = 3;
        let run = run_scenario(&cfg).unwrap();
        let body = csv_single(&run);
        let mut lines = body.lines();
        assert_eq!(lines.next().unwrap(), "t,f_re,f_im,g_re,g_im,concurrence");
        for line in lines {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 6);
            assert_eq!(cols[3], "0.0000000000000000e0");
            assert_eq!(cols[4], "0.0000000000000000e0");
        }
    }
}
