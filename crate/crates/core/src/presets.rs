//! Preset experiments: trapped rings, Mott versus superfluid noise maps,
//! quasiperiodic localization and a filling sweep.

use std::f64::consts::PI;

use crate::scenario::{fibonacci_up_to, Boundary, LatticeScenario, Potential};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `L = 55, N = 19`, trap curvatures `Ω/J ∈ {0, 0.008, 0.018, 0.17}`.
    Fig1,
    /// Noise maps for `Ω/J ∈ {0.17, 0.008}` with cuts at `q2 ∈ {0, 15, 30, 45}`.
    Fig2,
    /// `L = 89, N = 25`, `γ = 55/89`, `λ ∈ {0, 0.5, 1, 2}`.
    Fig3,
    /// `L = 34, N = 10`, `γ = 21/34`.
    Fig3Small,
    /// Flat ring `L = 11`, `N = 1..=11`.
    MottSweep,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig3Small,
        Preset::MottSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig3Small => "fig3-small",
            Preset::MottSweep => "mott-sweep",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

pub const TRAP_CURVATURES: [f64; 4] = [0.0, 0.008, 0.018, 0.17];
pub const MAP_CURVATURES: [f64; 2] = [0.17, 0.008];
pub const CUTS_AT_55: [usize; 4] = [0, 15, 30, 45];
pub const DISORDER_AMPLITUDES: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// One scenario of a preset with the `q2` cuts to export.
#[derive(Debug, Clone)]
pub struct PresetRun {
    pub name: String,
    pub scenario: LatticeScenario,
    pub cuts: Vec<usize>,
}

/// The `q2` cuts `{0, 15, 30, 45}` of a 55-site ring, rescaled to `sites`.
pub fn scaled_cuts(sites: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = CUTS_AT_55
        .iter()
        .map(|&q| ((q * sites) as f64 / 55.0).round() as usize % sites)
        .collect();
    cuts.dedup();
    cuts
}

pub fn trap_scenario(sites: usize, particles: usize, omega: f64) -> LatticeScenario {
    let potential = if omega == 0.0 {
        Potential::Flat
    } else {
        Potential::Harmonic { omega }
    };
    LatticeScenario::new(sites, particles, Boundary::Periodic, potential).with_trap_renorm(true)
}

pub fn quasiperiodic_scenario(
    sites: usize,
    particles: usize,
    gamma: (u64, u64),
    lambda: f64,
) -> LatticeScenario {
    let potential = if lambda == 0.0 {
        Potential::Flat
    } else {
        Potential::Quasiperiodic {
            lambda,
            gamma_num: gamma.0,
            gamma_den: gamma.1,
            phi: PI / 4.0,
        }
    };
    LatticeScenario::new(sites, particles, Boundary::Periodic, potential)
}

/// Fibonacci momenta `F_n` strictly between 0 and `L`, for `γ = F_n/F_{n+1}`
/// on an `L = F_{n+1}` ring. Mirror images `L - F_n` are included.
pub fn fibonacci_peaks(sites: usize, count: usize) -> Vec<usize> {
    let fib = fibonacci_up_to(sites as u64);
    let mut peaks: Vec<usize> = fib
        .iter()
        .rev()
        .skip(1)
        .take(count)
        .map(|&f| f as usize)
        .collect();
    peaks.sort();
    peaks.dedup();
    peaks
}

fn fig1_runs(sites: usize, particles: usize) -> Vec<PresetRun> {
    TRAP_CURVATURES
        .iter()
        .map(|&omega| PresetRun {
            name: format!("omega-{omega}"),
            scenario: trap_scenario(sites, particles, omega),
            cuts: vec![0],
        })
        .collect()
}

fn fig2_runs(sites: usize, particles: usize) -> Vec<PresetRun> {
    MAP_CURVATURES
        .iter()
        .map(|&omega| PresetRun {
            name: format!("omega-{omega}"),
            scenario: trap_scenario(sites, particles, omega),
            cuts: scaled_cuts(sites),
        })
        .collect()
}

fn fig3_runs(sites: usize, particles: usize, gamma: (u64, u64)) -> Vec<PresetRun> {
    DISORDER_AMPLITUDES
        .iter()
        .map(|&lambda| PresetRun {
            name: format!("lambda-{lambda}"),
            scenario: quasiperiodic_scenario(sites, particles, gamma, lambda),
            cuts: vec![0],
        })
        .collect()
}

/// Runs of a preset at its published size.
pub fn preset_runs(preset: Preset) -> Vec<PresetRun> {
    match preset {
        Preset::Fig1 => fig1_runs(55, 19),
        Preset::Fig2 => fig2_runs(55, 19),
        Preset::Fig3 => fig3_runs(89, 25, (55, 89)),
        Preset::Fig3Small => fig3_runs(34, 10, (21, 34)),
        Preset::MottSweep => (1..=11)
            .map(|n| PresetRun {
                name: format!("N-{n}"),
                scenario: LatticeScenario::flat(11, n, Boundary::Periodic),
                cuts: vec![0],
            })
            .collect(),
    }
}

/// The trap presets at a reduced size with the same filling.
pub fn scaled_trap_runs(preset: Preset, sites: usize, particles: usize) -> Vec<PresetRun> {
    match preset {
        Preset::Fig1 => fig1_runs(sites, particles),
        Preset::Fig2 => fig2_runs(sites, particles),
        _ => preset_runs(preset),
    }
}
