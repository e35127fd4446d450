//! Analytic RDM assembly against the exact oracle, and channel validity on
//! randomized inputs.

mod common;

use num_complex::Complex64 as C64;
use rand::Rng;

use spinbath::kernels;
use spinbath::model::{
    sample_bath, DensityMatrix4, FamilySpec, PairSign, SystemSpec, Topology, TopologyKind,
};
use spinbath::oracle::rdm_exact;
use spinbath::rdm::{kraus_compose, rdm_global, rdm_global_with, rdm_local};
use spinbath::scenario::pair_representatives;

const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

fn local_bath(seed: u64, family: FamilySpec) -> spinbath::model::BathSpec {
    sample_bath(seed, 5, (1.0, 2.0), (0.1, 0.2), TopologyKind::Local, family).unwrap()
}

/// rdm_local fed with the per-bath closed forms reproduces the exact RDM for
/// every local family, on random initial states.
#[test]
fn rdm_local_matches_oracle_for_all_families() {
    let sys = SystemSpec::new(1.0).unwrap();
    let mut r = common::rng(0xBEEF);
    for family in [
        FamilySpec::Mixed { delta: 0.9 },
        FamilySpec::Pure { alpha: FRAC_PI_4 },
        FamilySpec::Pure { alpha: 0.3 },
    ] {
        for seed in 0..6u64 {
            let bath = local_bath(500 + seed, family);
            let Topology::Local { modes_a, modes_b } = &bath.topology else {
                panic!()
            };
            let rho0 = common::random_density_matrix(&mut r);
            for _ in 0..8 {
                let t = r.random_range(0.0..15.0);
                let (f_a, f_b) = match family {
                    FamilySpec::Mixed { .. } => (
                        kernels::local_f_mixed(modes_a, t).unwrap(),
                        kernels::local_f_mixed(modes_b, t).unwrap(),
                    ),
                    FamilySpec::Pure { alpha } => (
                        kernels::local_f_pure(modes_a, &vec![alpha; modes_a.len()], t).unwrap(),
                        kernels::local_f_pure(modes_b, &vec![alpha; modes_b.len()], t).unwrap(),
                    ),
                    FamilySpec::GhzPairs { .. } => unreachable!(),
                };
                let analytic = rdm_local(&rho0, f_a, f_b, sys.omega_s, t).unwrap();
                let exact = rdm_exact(&bath, &sys, &rho0, t).unwrap();
                assert!(
                    analytic.matrix().max_abs_diff(exact.matrix()) < 1e-10,
                    "family {family:?} seed {seed} t {t}"
                );
            }
        }
    }
}

/// Same check for the block-entangled local family, with the pair kernel.
#[test]
fn rdm_local_matches_oracle_for_pair_baths() {
    let sys = SystemSpec::new(1.0).unwrap();
    let mut r = common::rng(0xFACE);
    for sign in [PairSign::Equal, PairSign::Opposite] {
        let bath = sample_bath(
            777,
            6,
            (1.0, 2.0),
            (0.1, 0.2),
            TopologyKind::Local,
            FamilySpec::GhzPairs { sign },
        )
        .unwrap();
        let Topology::Local { modes_a, modes_b } = &bath.topology else {
            panic!()
        };
        let rho0 = common::random_density_matrix(&mut r);
        for _ in 0..12 {
            let t = r.random_range(0.0..15.0);
            let f_a = kernels::local_f_pairs(&pair_representatives(modes_a, sign).unwrap(), sign, t)
                .unwrap();
            let f_b = kernels::local_f_pairs(&pair_representatives(modes_b, sign).unwrap(), sign, t)
                .unwrap();
            let analytic = rdm_local(&rho0, f_a, f_b, sys.omega_s, t).unwrap();
            let exact = rdm_exact(&bath, &sys, &rho0, t).unwrap();
            assert!(analytic.matrix().max_abs_diff(exact.matrix()) < 1e-10);
        }
    }
}

/// rdm_global with the mixed-bath kernel pair reproduces the exact RDM on
/// arbitrary initial states.
#[test]
fn rdm_global_matches_oracle_for_mixed_baths() {
    let sys = SystemSpec::new(1.0).unwrap();
    let mut r = common::rng(0xC0FFEE);
    for seed in 0..8u64 {
        let bath = sample_bath(
            300 + seed,
            6,
            (1.0, 2.0),
            (0.1, 0.2),
            TopologyKind::Global,
            FamilySpec::Mixed { delta: 0.9 },
        )
        .unwrap();
        let Topology::Global { modes } = &bath.topology else {
            panic!()
        };
        let rho0 = common::random_density_matrix(&mut r);
        for _ in 0..8 {
            let t = r.random_range(0.0..15.0);
            let (f, g) = kernels::global_fg_mixed(modes, &vec![0.9; modes.len()], t).unwrap();
            let analytic = rdm_global(&rho0, f, g, sys.omega_s, t).unwrap();
            let exact = rdm_exact(&bath, &sys, &rho0, t).unwrap();
            assert!(analytic.matrix().max_abs_diff(exact.matrix()) < 1e-10);
        }
    }
}

/// For pure and block baths the lower coherences carry g itself;
/// rdm_global_with covers general states, and the conjugate-g shortcut of
/// rdm_global stays exact on X-form states where those entries vanish.
#[test]
fn rdm_global_conventions_for_pure_and_pair_baths() {
    let sys = SystemSpec::new(1.0).unwrap();
    let mut r = common::rng(0xD00D);
    for family in [
        FamilySpec::Pure { alpha: FRAC_PI_4 },
        FamilySpec::GhzPairs {
            sign: PairSign::Equal,
        },
    ] {
        let bath = sample_bath(55, 6, (1.0, 2.0), (0.1, 0.2), TopologyKind::Global, family)
            .unwrap();
        let Topology::Global { modes } = &bath.topology else {
            panic!()
        };
        for _ in 0..10 {
            let t = r.random_range(0.0..15.0);
            let (f, g) = match family {
                FamilySpec::Pure { .. } => kernels::global_fg_pure(modes, t).unwrap(),
                FamilySpec::GhzPairs { .. } => kernels::global_fg_pairs(modes, t).unwrap(),
                _ => unreachable!(),
            };
            let rho0 = common::random_density_matrix(&mut r);
            let exact = rdm_exact(&bath, &sys, &rho0, t).unwrap();
            let analytic = rdm_global_with(&rho0, f, g, g, sys.omega_s, t).unwrap();
            assert!(analytic.matrix().max_abs_diff(exact.matrix()) < 1e-10);

            let bell = DensityMatrix4::bell_phi_plus();
            let exact_bell = rdm_exact(&bath, &sys, &bell, t).unwrap();
            let shortcut = rdm_global(&bell, f, g, sys.omega_s, t).unwrap();
            assert!(shortcut.matrix().max_abs_diff(exact_bell.matrix()) < 1e-10);
        }
    }
}

/// Channel outputs are valid density matrices for random valid inputs and
/// coefficients anywhere in the closed unit disk.
#[test]
fn channel_outputs_remain_valid_states() {
    let mut r = common::rng(0xF00D);
    for _ in 0..200 {
        let rho0 = common::random_density_matrix(&mut r);
        let f_a = C64::from_polar(r.random_range(0.0..1.0), r.random_range(0.0..std::f64::consts::TAU));
        let f_b = C64::from_polar(r.random_range(0.0..1.0), r.random_range(0.0..std::f64::consts::TAU));
        let t = r.random_range(0.0..20.0);
        let local = rdm_local(&rho0, f_a, f_b, 1.0, t).unwrap();
        let report = local.validate();
        assert!(report.pass(), "local output invalid: {report:?}");

        // a Gram-consistent global coefficient triple: f, g from one mixed draw
        let bath = sample_bath(
            9000 + (t * 10.0) as u64,
            4,
            (1.0, 2.0),
            (0.1, 0.2),
            TopologyKind::Global,
            FamilySpec::Mixed { delta: 0.9 },
        )
        .unwrap();
        let Topology::Global { modes } = &bath.topology else {
            panic!()
        };
        let (f, g) = kernels::global_fg_mixed(modes, &[0.9; 4], t).unwrap();
        let global = rdm_global(&rho0, f, g, 1.0, t).unwrap();
        let report = global.validate();
        assert!(report.pass(), "global output invalid: {report:?}");
    }
}

/// The two local code paths (coefficient table vs explicit Kraus sum) agree.
#[test]
fn rdm_local_equals_kraus_composition() {
    let mut r = common::rng(0xAAA);
    for _ in 0..300 {
        let rho0 = common::random_density_matrix(&mut r);
        let f_a = C64::from_polar(r.random_range(0.0..1.0), r.random_range(0.0..std::f64::consts::TAU));
        let f_b = C64::from_polar(r.random_range(0.0..1.0), r.random_range(0.0..std::f64::consts::TAU));
        let (omega_s, t) = (r.random_range(0.2..3.0), r.random_range(0.0..20.0));
        let direct = rdm_local(&rho0, f_a, f_b, omega_s, t).unwrap();
        let kraus = kraus_compose(&rho0, f_a, f_b, omega_s, t).unwrap();
        assert!(direct.matrix().max_abs_diff(kraus.matrix()) < 1e-13);
    }
}

/// Exact-oracle outputs remain valid states across many baths and times.
#[test]
fn oracle_rdm_outputs_are_valid_states() {
    let sys = SystemSpec::new(1.0).unwrap();
    let mut r = common::rng(0xE11E);
    for draw in 0..100u64 {
        let families = [
            FamilySpec::Mixed { delta: 0.9 },
            FamilySpec::Pure { alpha: FRAC_PI_4 },
            FamilySpec::GhzPairs {
                sign: PairSign::Equal,
            },
        ];
        let family = families[draw as usize % families.len()];
        let topology = if draw % 2 == 0 {
            TopologyKind::Global
        } else {
            TopologyKind::Local
        };
        let bath = sample_bath(draw, 4, (1.0, 2.0), (0.1, 0.2), topology, family).unwrap();
        let rho0 = common::random_density_matrix(&mut r);
        for k in 0..50 {
            let t = 20.0 * k as f64 / 49.0;
            let rho_t = rdm_exact(&bath, &sys, &rho0, t).unwrap();
            let report = rho_t.validate();
            assert!(
                report.pass(),
                "invalid oracle state at draw {draw}, t={t}: {report:?}"
            );
        }
    }
}
