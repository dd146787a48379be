//! One scenario from Hamiltonian to written artifacts.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::fourpoint::{delta_cut, noise_map, CacheMode, NoiseMap, NoiseStats};
use crate::io::{self, Artifact, ArtifactWriter};
use crate::scenario::LatticeScenario;
use crate::spectral::SpectralData;
use crate::twopoint::{report_scale, CorrelationSet};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub cache: CacheMode,
    /// `q2` values for which `noise_cut_q2-<q2>.csv` is written.
    pub cuts: Vec<usize>,
    /// Skip the noise map and write only spectral and two-point output.
    pub two_point_only: bool,
    /// Also write `noise.csv` with the full map.
    pub full_map: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            cache: CacheMode::Auto,
            cuts: vec![0],
            two_point_only: false,
            full_map: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub scenario: LatticeScenario,
    pub warnings: Vec<String>,
    pub spectral: SpectralData,
    pub correlations: CorrelationSet,
    /// `N/Z` for trapped runs with renormalisation, otherwise 1.
    pub report_scale: f64,
    pub noise: Option<NoiseMap>,
    pub timings: BTreeMap<String, f64>,
}

impl RunResult {
    /// Momentum distribution as reported, including `report_scale`.
    pub fn reported_nq(&self) -> Vec<f64> {
        self.correlations
            .nq
            .iter()
            .map(|v| v * self.report_scale)
            .collect()
    }
}

/// Validates the scenario and computes every requested quantity.
pub fn compute(scenario: &LatticeScenario, opts: &RunOptions) -> Result<RunResult> {
    let warnings = scenario.check()?;
    let mut timings = BTreeMap::new();

    let t = Instant::now();
    let spectral = SpectralData::from_scenario(scenario)?;
    timings.insert("spectral".to_string(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let correlations = CorrelationSet::compute(&spectral, scenario.normalization)?;
    let scale = report_scale(scenario, &correlations.density)?;
    timings.insert("twopoint".to_string(), t.elapsed().as_secs_f64());

    let noise = if opts.two_point_only {
        None
    } else {
        let t = Instant::now();
        let map =
            noise_map(scenario, &spectral, &correlations, opts.cache)?.with_report_scale(scale);
        timings.insert("fourpoint".to_string(), t.elapsed().as_secs_f64());
        Some(map)
    };

    Ok(RunResult {
        scenario: scenario.clone(),
        warnings,
        spectral,
        correlations,
        report_scale: scale,
        noise,
        timings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InputChecksums {
    pub g: String,
    pub big_g: String,
    pub b: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub version: String,
    pub scenario: LatticeScenario,
    pub warnings: Vec<String>,
    pub threads: usize,
    pub report_scale: f64,
    pub timings: BTreeMap<String, f64>,
    pub noise: Option<NoiseStats>,
    pub inputs: InputChecksums,
    pub artifacts: Vec<Artifact>,
}

/// Writes CSV artifacts and `manifest.json` into `dir`.
pub fn write_artifacts(
    result: &RunResult,
    opts: &RunOptions,
    dir: impl AsRef<Path>,
) -> Result<Manifest> {
    let mut w = ArtifactWriter::create(dir)?;
    w.write("spectrum.csv", &io::spectrum_csv(&result.spectral))?;
    w.write("gmatrix.csv", &io::gmatrix_csv(&result.spectral.g))?;
    w.write(
        "density.csv",
        &io::density_csv(&result.correlations.density),
    )?;
    w.write("momentum.csv", &io::momentum_csv(&result.reported_nq()))?;
    if let Some(noise) = &result.noise {
        if opts.full_map {
            w.write("noise.csv", &io::noise_csv(noise))?;
        }
        for &q2 in &opts.cuts {
            let cut = delta_cut(noise, q2)?;
            w.write(&io::cut_file_name(q2), &io::cut_csv(&cut))?;
        }
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: result.scenario.clone(),
        warnings: result.warnings.clone(),
        threads: rayon::current_num_threads(),
        report_scale: result.report_scale,
        timings: result.timings.clone(),
        noise: result.noise.as_ref().map(|n| n.stats.clone()),
        inputs: InputChecksums {
            g: io::matrix_checksum(&result.spectral.g),
            big_g: io::matrix_checksum(&result.spectral.big_g),
            b: io::matrix_checksum(&result.correlations.b),
        },
        artifacts: w.artifacts().to_vec(),
    };
    w.write_json("manifest.json", &manifest)?;
    Ok(manifest)
}

/// `compute` followed by `write_artifacts`.
pub fn run_to_dir(
    scenario: &LatticeScenario,
    opts: &RunOptions,
    dir: impl AsRef<Path>,
) -> Result<(RunResult, Manifest)> {
    let result = compute(scenario, opts)?;
    let manifest = write_artifacts(&result, opts, dir)?;
    Ok((result, manifest))
}
