//! Exhaustive comparison of the determinant engine against exact
//! diagonalization on small lattices.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourpoint::{mott_delta, site_order, FourPointEngine, OperatorTuple, Propagators};
use crate::oracle::{
    bose_hubbard_ground, hcb_ground_state, oracle_density, oracle_four_point, oracle_noise_map,
    oracle_two_point, Algebra, OracleState, MAX_NOISE_SITES,
};
use crate::scenario::{Boundary, LatticeScenario, Normalization, Potential};
use crate::spectral::{big_g, fermi_sea_energy, SpectralData};
use crate::twopoint::two_point_matrix;

pub const ORACLE_TOL: f64 = 1e-8;
pub const MOTT_SITES: usize = 6;
pub const CONVERGENCE_U: [f64; 3] = [10.0, 100.0, 1000.0];

#[derive(Debug, Clone)]
pub struct OracleCheckOptions {
    pub max_sites: usize,
    pub tolerance: f64,
    /// Perturb `g` before building the engine; the check must then fail.
    pub corrupt_g: bool,
}

impl OracleCheckOptions {
    pub fn new(max_sites: usize) -> Self {
        OracleCheckOptions {
            max_sites,
            tolerance: ORACLE_TOL,
            corrupt_g: false,
        }
    }
}

/// The three potentials of the sweep on `sites` sites.
pub fn sweep_potentials() -> [(&'static str, Potential); 3] {
    [
        ("flat", Potential::Flat),
        ("harmonic", Potential::Harmonic { omega: 0.1 }),
        (
            "quasiperiodic",
            Potential::Quasiperiodic {
                lambda: 0.5,
                gamma_num: 3,
                gamma_den: 5,
                phi: PI / 4.0,
            },
        ),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct Offender {
    pub sites: [usize; 4],
    pub signs: [i32; 4],
    pub engine: f64,
    pub oracle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioCheck {
    pub label: String,
    pub sites: usize,
    pub particles: usize,
    pub bc: Boundary,
    pub potential: String,
    pub skipped: Option<String>,
    pub tuples: usize,
    pub max_deviation: f64,
    pub two_point_deviation: f64,
    pub energy_deviation: f64,
    pub worst: Option<Offender>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FingerprintEntry {
    pub sites: [usize; 4],
    pub bosonic: f64,
    pub spin: f64,
    pub engine: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fingerprint {
    pub scenario: String,
    /// Tuples whose bosonic and spin values differ.
    pub tuples: Vec<FingerprintEntry>,
    /// Differing tuples without an adjacent same-site `b b†` pair.
    pub unexplained: usize,
    /// Largest `|engine - bosonic|` over the differing tuples.
    pub engine_vs_bosonic: f64,
    /// Smallest `|engine - spin|` over the differing tuples.
    pub engine_vs_spin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MottConstants {
    pub sites: usize,
    pub normalization: Normalization,
    pub oracle_zero: f64,
    pub oracle_nonzero: f64,
    pub closed_form_zero: f64,
    pub closed_form_nonzero: f64,
    /// `2 - 1/L` and `-1/L`, listed for reference only.
    pub published_zero: f64,
    pub published_nonzero: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub u: f64,
    pub four_point_deviation: f64,
    pub density_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub max_sites: usize,
    pub tolerance: f64,
    pub corrupted: bool,
    pub passed: bool,
    pub max_deviation: f64,
    pub worst_scenario: Option<String>,
    pub scenarios: Vec<ScenarioCheck>,
    pub fingerprint: Option<Fingerprint>,
    pub mott: Option<MottConstants>,
    pub convergence: Vec<ConvergenceRow>,
}

fn all_density_tuples(l: usize) -> impl Iterator<Item = OperatorTuple> {
    (0..l.pow(4)).map(move |k| {
        OperatorTuple::density_pair(k / (l * l * l), (k / (l * l)) % l, (k / l) % l, k % l)
    })
}

fn corrupt(g: &DMatrix<f64>) -> DMatrix<f64> {
    let mut g = g.clone();
    if g.nrows() >= 2 {
        g[(0, 1)] += 1e-3;
        g[(1, 0)] += 1e-3;
    } else {
        g[(0, 0)] += 1e-3;
    }
    g
}

/// Engine propagators for `spectral`, optionally corrupted.
struct EngineInputs {
    g: DMatrix<f64>,
    big_g: DMatrix<f64>,
    b: DMatrix<f64>,
}

impl EngineInputs {
    fn new(spectral: &SpectralData, corrupted: bool) -> Self {
        let g = if corrupted {
            corrupt(&spectral.g)
        } else {
            spectral.g.clone()
        };
        let big_g = big_g(&g);
        let b = two_point_matrix(&big_g);
        EngineInputs { g, big_g, b }
    }

    fn propagators(&self) -> Propagators<'_> {
        Propagators::new(&self.g, &self.big_g, &self.b)
    }
}

/// Compares all `L⁴` density-pattern tuples of one scenario.
pub fn check_scenario(scenario: &LatticeScenario, label: &str, corrupted: bool) -> ScenarioCheck {
    let mut out = ScenarioCheck {
        label: format!(
            "{label} L={} N={} {:?}",
            scenario.sites, scenario.particles, scenario.bc
        )
        .to_lowercase(),
        sites: scenario.sites,
        particles: scenario.particles,
        bc: scenario.bc,
        potential: label.to_string(),
        skipped: None,
        tuples: 0,
        max_deviation: 0.0,
        two_point_deviation: 0.0,
        energy_deviation: 0.0,
        worst: None,
    };
    let spectral = match SpectralData::from_scenario(scenario) {
        Ok(s) => s,
        Err(e) => {
            out.skipped = Some(e.to_string());
            return out;
        }
    };
    let state = match hcb_ground_state(scenario) {
        Ok(s) => s,
        Err(e) => {
            out.skipped = Some(e.to_string());
            return out;
        }
    };
    let inputs = EngineInputs::new(&spectral, corrupted);
    let engine = FourPointEngine::new(inputs.propagators());
    let l = scenario.sites;

    let worst = all_density_tuples(l)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| {
            let e = engine.evaluate(&t);
            let o = oracle_four_point(&state, &t).expect("bosonic oracle with cap 2");
            ((e - o).abs(), t, e, o)
        })
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a });
    out.tuples = l.pow(4);
    if let Some((dev, t, e, o)) = worst {
        out.max_deviation = dev;
        out.worst = Some(Offender {
            sites: t.sites,
            signs: t.signs(),
            engine: e,
            oracle: o,
        });
    }
    if let Ok(b) = oracle_two_point(&state) {
        out.two_point_deviation = crate::linalg::max_abs_diff(&b, &inputs.b);
    }
    out.energy_deviation = (state.energy - fermi_sea_energy(&spectral)).abs();
    out
}

/// Bosonic versus spin evaluation on every density tuple of `scenario`.
pub fn fingerprint(scenario: &LatticeScenario, label: &str) -> Result<Fingerprint> {
    let spectral = SpectralData::from_scenario(scenario)?;
    let bosonic = hcb_ground_state(scenario)?;
    let spin = bosonic.clone().with_algebra(Algebra::Spin);
    let inputs = EngineInputs::new(&spectral, false);
    let engine = FourPointEngine::new(inputs.propagators());
    let mut tuples = Vec::new();
    let mut unexplained = 0;
    let (mut vs_bos, mut vs_spin) = (0.0f64, f64::INFINITY);
    for t in all_density_tuples(scenario.sites) {
        let b = oracle_four_point(&bosonic, &t)?;
        let s = oracle_four_point(&spin, &t)?;
        if (b - s).abs() <= 1e-12 {
            continue;
        }
        if !site_order(&t).has_virtual_pair() {
            unexplained += 1;
        }
        let e = engine.evaluate(&t);
        vs_bos = vs_bos.max((e - b).abs());
        vs_spin = vs_spin.min((e - s).abs());
        tuples.push(FingerprintEntry {
            sites: t.sites,
            bosonic: b,
            spin: s,
            engine: e,
        });
    }
    Ok(Fingerprint {
        scenario: format!(
            "{label} L={} N={} {:?}",
            scenario.sites, scenario.particles, scenario.bc
        )
        .to_lowercase(),
        tuples,
        unexplained,
        engine_vs_bosonic: vs_bos,
        engine_vs_spin: vs_spin,
    })
}

/// Mott constants `Δ(0,0)` and `Δ(1,0)` from the oracle on an `L = N` ring.
pub fn mott_constants(sites: usize, normalization: Normalization) -> Result<MottConstants> {
    let scenario = LatticeScenario::flat(sites, sites, Boundary::Periodic);
    let state = hcb_ground_state(&scenario)?;
    let map = oracle_noise_map(&state, normalization)?;
    let l = sites as f64;
    let scale = match normalization {
        Normalization::PerSite => 1.0,
        Normalization::Raw => l * l,
    };
    Ok(MottConstants {
        sites,
        normalization,
        oracle_zero: map.get(0, 0).re,
        oracle_nonzero: map.get(1 % sites, 0).re,
        closed_form_zero: mott_delta(sites, 0, 0, normalization),
        closed_form_nonzero: mott_delta(sites, 1 % sites, 0, normalization),
        published_zero: (2.0 - 1.0 / l) * scale,
        published_nonzero: -scale / l,
    })
}

/// Max-norm distance of finite-`U` four-point values and densities from
/// the hard-core oracle, for each `u` in `us`.
pub fn convergence(scenario: &LatticeScenario, us: &[f64], cap: u8) -> Result<Vec<ConvergenceRow>> {
    let hcb = hcb_ground_state(scenario)?;
    let tuples: Vec<OperatorTuple> = all_density_tuples(scenario.sites).collect();
    let reference: Vec<f64> = tuples
        .iter()
        .map(|t| oracle_four_point(&hcb, t))
        .collect::<Result<_>>()?;
    let ref_density = oracle_density(&hcb)?;
    us.iter()
        .map(|&u| {
            let bh: OracleState = bose_hubbard_ground(scenario, u, cap)?;
            let mut dev = 0.0f64;
            for (t, r) in tuples.iter().zip(&reference) {
                dev = dev.max((oracle_four_point(&bh, t)? - r).abs());
            }
            let density = oracle_density(&bh)?;
            let ddev = density
                .iter()
                .zip(&ref_density)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(ConvergenceRow {
                u,
                four_point_deviation: dev,
                density_deviation: ddev,
            })
        })
        .collect()
}

/// Full sweep over `L = 2..=max_sites`, every `N`, open and periodic
/// boundaries and the three sweep potentials.
pub fn oracle_check(opts: &OracleCheckOptions) -> Result<OracleReport> {
    if opts.max_sites > MAX_NOISE_SITES || opts.max_sites < 2 {
        return Err(Error::TooLarge {
            what: "max-L",
            value: opts.max_sites,
            limit: MAX_NOISE_SITES,
        });
    }
    let mut scenarios = Vec::new();
    for l in 2..=opts.max_sites {
        for n in 1..=l {
            for bc in [Boundary::Open, Boundary::Periodic] {
                for (label, potential) in sweep_potentials() {
                    let s = LatticeScenario::new(l, n, bc, potential);
                    scenarios.push(check_scenario(&s, label, opts.corrupt_g));
                }
            }
        }
    }
    let worst = scenarios
        .iter()
        .filter(|s| s.skipped.is_none())
        .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation));
    let max_deviation = worst.map_or(0.0, |s| s.max_deviation);
    let worst_scenario = worst.map(|s| s.label.clone());

    let fp_sites = opts.max_sites.min(4);
    let fingerprint = if fp_sites >= 3 {
        Some(fingerprint(
            &LatticeScenario::flat(fp_sites, fp_sites / 2 + 1, Boundary::Open),
            "flat",
        )?)
    } else {
        None
    };
    let mott = if opts.max_sites >= MOTT_SITES {
        Some(mott_constants(MOTT_SITES, Normalization::PerSite)?)
    } else {
        None
    };
    let convergence = if opts.max_sites >= 4 {
        convergence(
            &LatticeScenario::flat(4, 2, Boundary::Open),
            &CONVERGENCE_U,
            3,
        )?
    } else {
        Vec::new()
    };
    let two_point_ok = scenarios
        .iter()
        .all(|s| s.two_point_deviation <= opts.tolerance || opts.corrupt_g);
    let passed = max_deviation <= opts.tolerance && two_point_ok;
    Ok(OracleReport {
        max_sites: opts.max_sites,
        tolerance: opts.tolerance,
        corrupted: opts.corrupt_g,
        passed,
        max_deviation,
        worst_scenario,
        scenarios,
        fingerprint,
        mott,
        convergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let report = oracle_check(&OracleCheckOptions::new(4)).unwrap();
        assert!(report.passed, "{:?}", report.worst_scenario);
        assert!(report.max_deviation < 1e-10);
        let fp = report.fingerprint.unwrap();
        assert!(!fp.tuples.is_empty());
        assert_eq!(fp.unexplained, 0);
        assert!(fp.engine_vs_bosonic < 1e-10);
        assert!(fp.engine_vs_spin > 1e-3);
    }

    #[test]
    fn trivial_sweep() {
        let report = oracle_check(&OracleCheckOptions::new(2)).unwrap();
        assert!(report.passed);
        assert!(report.fingerprint.is_none());
    }

    #[test]
    fn corrupted_input_fails() {
        let opts = OracleCheckOptions {
            corrupt_g: true,
            ..OracleCheckOptions::new(3)
        };
        let report = oracle_check(&opts).unwrap();
        assert!(!report.passed);
        assert!(report.max_deviation > 1e-6);
    }

    #[test]
    fn max_sites_guard() {
        assert!(oracle_check(&OracleCheckOptions::new(9)).is_err());
        assert!(oracle_check(&OracleCheckOptions::new(1)).is_err());
    }
}
