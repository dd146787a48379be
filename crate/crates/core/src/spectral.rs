//! Single-particle problem and the free-fermion propagators `g` and `G = 2g - 1`.
//!
//! On a periodic ring the Jordan-Wigner string picks up the fermion parity
//! when it wraps around, so the fermions see a periodic boundary for odd `N`
//! and an antiperiodic one for even `N`. Both are real.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::{Boundary, LatticeScenario};

/// Levels closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FermionBoundary {
    Open,
    Periodic,
    Antiperiodic,
}

impl FermionBoundary {
    /// Fermion boundary seen by `particles` hard-core bosons with boundary `bc`.
    pub fn for_bosons(bc: Boundary, particles: usize) -> Self {
        match bc {
            Boundary::Open => FermionBoundary::Open,
            Boundary::Periodic if particles % 2 == 1 => FermionBoundary::Periodic,
            Boundary::Periodic => FermionBoundary::Antiperiodic,
        }
    }
}

/// Tight-binding matrix with `-hopping` bonds and on-site `potential`.
pub fn hopping_matrix(potential: &[f64], hopping: f64, boundary: FermionBoundary) -> DMatrix<f64> {
    let l = potential.len();
    let mut h = DMatrix::from_diagonal(&DVector::from_column_slice(potential));
    for i in 0..l.saturating_sub(1) {
        h[(i, i + 1)] = -hopping;
        h[(i + 1, i)] = -hopping;
    }
    // a two-site ring would double the single bond, so it stays a dimer
    if l > 2 {
        let corner = match boundary {
            FermionBoundary::Open => 0.0,
            FermionBoundary::Periodic => -hopping,
            FermionBoundary::Antiperiodic => hopping,
        };
        h[(0, l - 1)] = corner;
        h[(l - 1, 0)] = corner;
    }
    h
}

/// Single-particle Hamiltonian of the fermionised scenario, in units of `J`.
pub fn build_single_particle(scenario: &LatticeScenario) -> DMatrix<f64> {
    let j = scenario.hopping;
    let v: Vec<f64> = scenario.potential_values().iter().map(|x| x * j).collect();
    hopping_matrix(
        &v,
        j,
        FermionBoundary::for_bosons(scenario.bc, scenario.particles),
    )
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Ascending single-particle energies.
    pub energies: Vec<f64>,
    /// Column `s` is the `s`-th eigenmode.
    pub modes: DMatrix<f64>,
    /// `g_lm = Σ_{s<N} ψ_l^(s) ψ_m^(s)`.
    pub g: DMatrix<f64>,
    /// `G = 2g - 1`.
    pub big_g: DMatrix<f64>,
    pub particles: usize,
}

impl SpectralData {
    pub fn sites(&self) -> usize {
        self.g.nrows()
    }

    pub fn from_scenario(scenario: &LatticeScenario) -> Result<Self> {
        ground_modes(&build_single_particle(scenario), scenario.particles)
    }
}

/// Diagonalises `h` and fills the `n` lowest modes.
pub fn ground_modes(h: &DMatrix<f64>, n: usize) -> Result<SpectralData> {
    let l = h.nrows();
    assert!(h.is_square(), "Hamiltonian must be square");
    if n < 1 || n > l {
        return Err(Error::BadFilling { n, l });
    }

    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let energies: Vec<f64> = order.iter().map(|&s| eig.eigenvalues[s]).collect();
    let mut modes = DMatrix::zeros(l, l);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        let lead = col.iter().copied().find(|x| x.abs() > 1e-8).unwrap_or(1.0);
        if lead < 0.0 {
            col.neg_mut();
        }
        modes.set_column(dst, &col);
    }

    if n < l {
        let gap = energies[n] - energies[n - 1];
        if gap < DEGENERACY_TOL {
            return Err(Error::DegenerateFermi {
                n,
                below: energies[n - 1],
                above: energies[n],
                gap,
            });
        }
    }

    let occupied = modes.columns(0, n);
    let g = occupied * occupied.transpose();
    let big_g = big_g(&g);
    Ok(SpectralData {
        energies,
        modes,
        g,
        big_g,
        particles: n,
    })
}

/// `G_ij = 2 g_ij - δ_ij`.
pub fn big_g(g: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(g.is_square());
    let mut out = g * 2.0;
    for i in 0..g.nrows() {
        out[(i, i)] -= 1.0;
    }
    out
}

/// Filled-sea energy `Σ_{s<N} E_s`.
pub fn fermi_sea_energy(spectral: &SpectralData) -> f64 {
    spectral.energies[..spectral.particles].iter().sum()
}
