//! Noise correlations `Δ(q1, q2) = <n_q1 n_q2> - <n_q1><n_q2>`.
//!
//! The lattice sum over `(n, m, l, j)` is done in two stages:
//!
//! 1. `Y(n, m, q2) = Σ_{l,j} e^{i 2π q2 (l - j)/L} <b_n† b_m b_l† b_j>`,
//!    one independent task per `(n, m)`;
//! 2. `S4(q1, q2) = Σ_{n,m} e^{i 2π q1 (n - m)/L} Y(n, m, q2)`,
//!    one independent task per `q2`.
//!
//! Every reduction runs sequentially in ascending index order inside its
//! task, so the result does not depend on the number of threads.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::chi::Propagators;
use super::engine::FourPointEngine;
use crate::error::{Error, Result};
use crate::scenario::{LatticeScenario, Normalization};
use crate::spectral::SpectralData;
use crate::twopoint::{momentum_distribution, CorrelationSet};

/// `Δ(q1, q2)` and `Δ(-q1, -q2)*` may differ by at most this much.
pub const CONJUGATION_TOL: f64 = 1e-9;

/// Above this many sites the full four-point tensor is not kept in memory.
pub const MATERIALIZE_MAX_SITES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheMode {
    /// Materialise for `L <= 64`, stream above.
    #[default]
    Auto,
    /// Keep all `L⁴` four-point values, half of them filled by hermiticity.
    Materialized,
    /// Evaluate four-point rows on the fly inside stage 1.
    Streaming,
}

impl CacheMode {
    pub fn resolve(self, sites: usize) -> CacheMode {
        match self {
            CacheMode::Auto if sites <= MATERIALIZE_MAX_SITES => CacheMode::Materialized,
            CacheMode::Auto => CacheMode::Streaming,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct NoiseStats {
    pub tuples: usize,
    pub determinants: usize,
    pub cache_mode: CacheMode,
    pub table_bytes: usize,
    pub tensor_bytes: usize,
    pub tables_seconds: f64,
    pub stage1_seconds: f64,
    pub stage2_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct NoiseMap {
    pub sites: usize,
    /// Row-major `Δ[q1 * L + q2]`.
    pub delta: Vec<Complex64>,
    /// Raw lattice sums `S4[q1 * L + q2]` before normalisation.
    pub s4: Vec<Complex64>,
    /// Momentum distribution used for the disconnected part.
    pub nq: Vec<f64>,
    pub normalization: Normalization,
    /// Reporting factor applied to cuts (`N/Z` for trapped runs).
    pub report_scale: f64,
    pub stats: NoiseStats,
}

impl NoiseMap {
    #[inline]
    pub fn get(&self, q1: usize, q2: usize) -> Complex64 {
        self.delta[q1 * self.sites + q2]
    }

    pub fn with_report_scale(mut self, scale: f64) -> Self {
        self.report_scale = scale;
        self
    }

    /// `Σ_{q1} Δ(q1, q2)` for each `q2`; zero on a number eigenstate.
    pub fn column_sums(&self) -> Vec<Complex64> {
        let l = self.sites;
        (0..l)
            .map(|q2| (0..l).map(|q1| self.get(q1, q2)).sum())
            .collect()
    }

    /// Largest `|Δ(q1, q2) - Δ(-q1, -q2)*|`.
    pub fn conjugation_residue(&self) -> f64 {
        let l = self.sites;
        let mut worst = 0.0f64;
        for q1 in 0..l {
            for q2 in 0..l {
                let mirror = self.get((l - q1) % l, (l - q2) % l).conj();
                worst = worst.max((self.get(q1, q2) - mirror).norm());
            }
        }
        worst
    }
}

struct Trig {
    l: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Trig {
    fn new(l: usize) -> Self {
        let mut cos = Vec::with_capacity(l * l);
        let mut sin = Vec::with_capacity(l * l);
        for q in 0..l {
            for n in 0..l {
                let angle = 2.0 * std::f64::consts::PI * ((q * n) % l) as f64 / l as f64;
                cos.push(angle.cos());
                sin.push(angle.sin());
            }
        }
        Trig { l, cos, sin }
    }

    #[inline]
    fn row(&self, q: usize) -> (&[f64], &[f64]) {
        let r = q * self.l..(q + 1) * self.l;
        (&self.cos[r.clone()], &self.sin[r])
    }
}

/// `out[q] = Σ_{l,j} e^{i 2π q (l - j)/L} f[l][j]` for a real row-major `f`.
fn double_transform(trig: &Trig, f: &[f64], partial: &mut Vec<(f64, f64)>, out: &mut [Complex64]) {
    let l = trig.l;
    partial.clear();
    partial.resize(l * l, (0.0, 0.0));
    // partial[lq] = Σ_j f[l][j] e^{-i 2π q j / L}
    for site in 0..l {
        let frow = &f[site * l..(site + 1) * l];
        if frow.iter().all(|&v| v == 0.0) {
            continue;
        }
        for q in 0..l {
            let (c, s) = trig.row(q);
            let mut re = 0.0;
            let mut im = 0.0;
            for j in 0..l {
                re += frow[j] * c[j];
                im -= frow[j] * s[j];
            }
            partial[site * l + q] = (re, im);
        }
    }
    for (q, slot) in out.iter_mut().enumerate() {
        let (c, s) = trig.row(q);
        let mut re = 0.0;
        let mut im = 0.0;
        for site in 0..l {
            let (pr, pi) = partial[site * l + q];
            re += c[site] * pr - s[site] * pi;
            im += c[site] * pi + s[site] * pr;
        }
        *slot = Complex64::new(re, im);
    }
}

fn materialize(engine: &FourPointEngine) -> Vec<f64> {
    let l = engine.sites();
    let l3 = l * l * l;
    let mut tensor = vec![0.0; l3 * l];
    let index = |n: usize, m: usize, k: usize, j: usize| ((n * l + m) * l + k) * l + j;
    tensor
        .par_chunks_mut(l3)
        .enumerate()
        .for_each(|(n, chunk)| {
            for m in 0..l {
                for k in 0..l {
                    for j in 0..l {
                        if (n, m, k, j) <= (j, k, m, n) {
                            chunk[(m * l + k) * l + j] = engine.density_pair(n, m, k, j);
                        }
                    }
                }
            }
        });
    for n in 0..l {
        for m in 0..l {
            for k in 0..l {
                for j in 0..l {
                    if (n, m, k, j) > (j, k, m, n) {
                        tensor[index(n, m, k, j)] = tensor[index(j, k, m, n)];
                    }
                }
            }
        }
    }
    tensor
}

/// Full `Δ(q1, q2)` map for one ground state.
pub fn noise_map(
    scenario: &LatticeScenario,
    spectral: &SpectralData,
    corr: &CorrelationSet,
    cache: CacheMode,
) -> Result<NoiseMap> {
    let l = spectral.sites();
    let normalization = scenario.normalization;
    let nq = if corr.normalization == normalization {
        corr.nq.clone()
    } else {
        momentum_distribution(&corr.b, normalization)?
    };
    let props = Propagators::new(&spectral.g, &spectral.big_g, &corr.b);

    let t0 = Instant::now();
    let engine = FourPointEngine::new(props);
    let tables_seconds = t0.elapsed().as_secs_f64();

    let mode = cache.resolve(l);
    let t1 = Instant::now();
    let tensor = match mode {
        CacheMode::Materialized => Some(materialize(&engine)),
        _ => None,
    };
    let trig = Trig::new(l);
    let mut y = vec![Complex64::new(0.0, 0.0); l * l * l];
    y.par_chunks_mut(l).enumerate().for_each_init(
        || (vec![0.0; l * l], Vec::new()),
        |(row, partial), (nm, out)| {
            let (n, m) = (nm / l, nm % l);
            match &tensor {
                Some(t) => row.copy_from_slice(&t[nm * l * l..(nm + 1) * l * l]),
                None => {
                    for k in 0..l {
                        for j in 0..l {
                            row[k * l + j] = engine.density_pair(n, m, k, j);
                        }
                    }
                }
            }
            double_transform(&trig, row, partial, out);
        },
    );
    let tensor_bytes = tensor
        .as_ref()
        .map_or(0, |t| t.len() * std::mem::size_of::<f64>());
    drop(tensor);
    let stage1_seconds = t1.elapsed().as_secs_f64();

    let t2 = Instant::now();
    let columns: Vec<Vec<Complex64>> = (0..l)
        .into_par_iter()
        .map(|q2| {
            let z: Vec<Complex64> = (0..l * l).map(|nm| y[nm * l + q2]).collect();
            (0..l)
                .map(|q1| {
                    let (c, s) = trig.row(q1);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for n in 0..l {
                        let mut inner = Complex64::new(0.0, 0.0);
                        for m in 0..l {
                            inner += Complex64::new(c[m], -s[m]) * z[n * l + m];
                        }
                        acc += Complex64::new(c[n], s[n]) * inner;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let stage2_seconds = t2.elapsed().as_secs_f64();

    let scale = match normalization {
        Normalization::PerSite => 1.0 / (l * l) as f64,
        Normalization::Raw => 1.0,
    };
    let mut s4 = vec![Complex64::new(0.0, 0.0); l * l];
    let mut delta = vec![Complex64::new(0.0, 0.0); l * l];
    for (q2, col) in columns.iter().enumerate() {
        for (q1, &v) in col.iter().enumerate() {
            s4[q1 * l + q2] = v;
            delta[q1 * l + q2] = v * scale - nq[q1] * nq[q2];
        }
    }

    let map = NoiseMap {
        sites: l,
        delta,
        s4,
        nq,
        normalization,
        report_scale: 1.0,
        stats: NoiseStats {
            tuples: l.pow(4),
            determinants: engine.tables().determinant_count(),
            cache_mode: mode,
            table_bytes: engine.tables().memory_bytes(),
            tensor_bytes,
            tables_seconds,
            stage1_seconds,
            stage2_seconds,
        },
    };
    let residue = map.conjugation_residue();
    if residue > CONJUGATION_TOL {
        return Err(Error::ComplexResidue(residue));
    }
    Ok(map)
}

/// `Δ(q1, q2)` at unit filling on a flat lattice: `2 δ_{q1 q2} - 2/L` per
/// site (`L²` times that in raw normalisation).
pub fn mott_delta(sites: usize, q1: usize, q2: usize, normalization: Normalization) -> f64 {
    let l = sites as f64;
    let per_site = if q1 % sites == q2 % sites { 2.0 } else { 0.0 } - 2.0 / l;
    match normalization {
        Normalization::PerSite => per_site,
        Normalization::Raw => per_site * l * l,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaCut {
    pub q2: usize,
    /// `Δ(q1, q2)` for `q1 = 0..L`, multiplied by `report_scale`.
    pub values: Vec<Complex64>,
    pub normalization: Normalization,
    pub report_scale: f64,
}

impl DeltaCut {
    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

pub fn delta_cut(noise: &NoiseMap, q2: usize) -> Result<DeltaCut> {
    if q2 >= noise.sites {
        return Err(Error::Range {
            index: q2,
            len: noise.sites,
        });
    }
    Ok(DeltaCut {
        q2,
        values: (0..noise.sites)
            .map(|q1| noise.get(q1, q2) * noise.report_scale)
            .collect(),
        normalization: noise.normalization,
        report_scale: noise.report_scale,
    })
}

#[derive(Debug, Clone)]
pub struct Regularity {
    /// `max |Δ(q1, q2) - Δ̄(q1 - q2)|`.
    pub deviation: f64,
    /// `Δ̄(r)`, the average of `Δ(q2 + r, q2)` over `q2`.
    pub profile: Vec<Complex64>,
}

/// How far the map is from depending on `q1 - q2` alone.
pub fn mott_regularity(noise: &NoiseMap) -> Regularity {
    let l = noise.sites;
    let profile: Vec<Complex64> = (0..l)
        .map(|r| {
            let sum: Complex64 = (0..l).map(|q2| noise.get((q2 + r) % l, q2)).sum();
            sum / l as f64
        })
        .collect();
    let mut deviation = 0.0f64;
    for q1 in 0..l {
        for q2 in 0..l {
            let r = (q1 + l - q2) % l;
            deviation = deviation.max((noise.get(q1, q2) - profile[r]).norm());
        }
    }
    Regularity { deviation, profile }
}

/// Which indices form the background of a peak measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackgroundWindow {
    /// Every index.
    All,
    /// Indices within this cyclic distance of some peak.
    Around(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakStats {
    pub peak_mean: f64,
    pub background_median: f64,
}

impl PeakStats {
    /// Peak mean over the magnitude of the background median, so a
    /// negative background (as in `Δ` cuts) still gives a positive ratio
    /// for peaks that stand above it.
    pub fn contrast(&self) -> f64 {
        self.peak_mean / self.background_median.abs()
    }

    /// Peak height above the background.
    pub fn excess(&self) -> f64 {
        self.peak_mean - self.background_median
    }
}

/// Mean over `peaks` and median over the background, which excludes the
/// peaks themselves and `q = 0`.
pub fn peak_stats(signal: &[f64], peaks: &[usize], window: BackgroundWindow) -> Result<PeakStats> {
    let len = signal.len();
    if let Some(&bad) = peaks.iter().find(|&&p| p >= len) {
        return Err(Error::Range { index: bad, len });
    }
    if peaks.is_empty() {
        return Err(Error::Range { index: 0, len: 0 });
    }
    let near = |q: usize| match window {
        BackgroundWindow::All => true,
        BackgroundWindow::Around(w) => peaks.iter().any(|&p| {
            let d = q.abs_diff(p);
            d.min(len - d) <= w
        }),
    };
    let mut background: Vec<f64> = (1..len)
        .filter(|q| !peaks.contains(q) && near(*q))
        .map(|q| signal[q])
        .collect();
    if background.is_empty() {
        return Err(Error::Range { index: len, len });
    }
    background.sort_by(f64::total_cmp);
    let k = background.len();
    let median = if k % 2 == 1 {
        background[k / 2]
    } else {
        0.5 * (background[k / 2 - 1] + background[k / 2])
    };
    let peak_mean = peaks.iter().map(|&p| signal[p]).sum::<f64>() / peaks.len() as f64;
    Ok(PeakStats {
        peak_mean,
        background_median: median,
    })
}

/// `(mean over peaks) / |median over background|`.
pub fn peak_contrast(signal: &[f64], peaks: &[usize], window: BackgroundWindow) -> Result<f64> {
    Ok(peak_stats(signal, peaks, window)?.contrast())
}
