//! Timing and determinism runs on flat rings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::fourpoint::{noise_map, CacheMode, NoiseMap};
use crate::io::{complex_checksum, fmt_f64, peak_rss_kb};
use crate::scenario::{Boundary, LatticeScenario};
use crate::spectral::SpectralData;
use crate::twopoint::CorrelationSet;

/// Flat periodic ring with an odd particle count near `L/3`, which keeps
/// the Fermi level non-degenerate.
pub fn bench_scenario(sites: usize) -> LatticeScenario {
    let n = ((sites / 3).max(1)) | 1;
    LatticeScenario::flat(sites, n.min(sites), Boundary::Periodic)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub sites: usize,
    pub particles: usize,
    pub threads: usize,
    pub cache_mode: CacheMode,
    pub tuples: usize,
    pub determinants: usize,
    pub tables_seconds: f64,
    pub stage1_seconds: f64,
    pub stage2_seconds: f64,
    pub total_seconds: f64,
    pub tuples_per_second: f64,
    pub determinants_per_second: f64,
    pub checksum: String,
    pub peak_rss_kb: Option<u64>,
}

/// Full noise map of `scenario` on a pool of `threads` workers.
pub fn timed_map(
    scenario: &LatticeScenario,
    threads: usize,
    cache: CacheMode,
) -> Result<(NoiseMap, f64)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?;
    pool.install(|| {
        let t = Instant::now();
        let spectral = SpectralData::from_scenario(scenario)?;
        let corr = CorrelationSet::compute(&spectral, scenario.normalization)?;
        let map = noise_map(scenario, &spectral, &corr, cache)?;
        Ok((map, t.elapsed().as_secs_f64()))
    })
}

pub fn bench_one(sites: usize, threads: usize, cache: CacheMode) -> Result<BenchRow> {
    let scenario = bench_scenario(sites);
    let (map, total) = timed_map(&scenario, threads, cache)?;
    let stats = &map.stats;
    let rate = |count: usize, secs: f64| {
        if secs > 0.0 {
            count as f64 / secs
        } else {
            f64::INFINITY
        }
    };
    Ok(BenchRow {
        sites,
        particles: scenario.particles,
        threads,
        cache_mode: stats.cache_mode,
        tuples: stats.tuples,
        determinants: stats.determinants,
        tables_seconds: stats.tables_seconds,
        stage1_seconds: stats.stage1_seconds,
        stage2_seconds: stats.stage2_seconds,
        total_seconds: total,
        tuples_per_second: rate(stats.tuples, stats.stage1_seconds),
        determinants_per_second: rate(stats.determinants, stats.tables_seconds),
        checksum: complex_checksum(&map.delta),
        peak_rss_kb: peak_rss_kb(),
    })
}

pub fn benchmark(sites: &[usize], threads: &[usize], cache: CacheMode) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &l in sites {
        for &t in threads {
            rows.push(bench_one(l, t, cache)?);
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "L,N,threads,cache,tuples,determinants,tables_s,stage1_s,stage2_s,total_s,tuples_per_s,dets_per_s,checksum,peak_rss_kb\n",
    );
    for r in rows {
        let cache = match r.cache_mode {
            CacheMode::Auto => "auto",
            CacheMode::Materialized => "materialized",
            CacheMode::Streaming => "streaming",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.sites,
            r.particles,
            r.threads,
            cache,
            r.tuples,
            r.determinants,
            fmt_f64(r.tables_seconds),
            fmt_f64(r.stage1_seconds),
            fmt_f64(r.stage2_seconds),
            fmt_f64(r.total_seconds),
            fmt_f64(r.tuples_per_second),
            fmt_f64(r.determinants_per_second),
            r.checksum,
            r.peak_rss_kb.map_or(String::new(), |k| k.to_string()),
        );
    }
    out
}
