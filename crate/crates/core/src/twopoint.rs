//! One-body correlations `B_ij = <b_i† b_j>`, density and momentum distribution.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::PhaseTable;
use crate::linalg::DetScratch;
use crate::scenario::{LatticeScenario, Normalization};
use crate::spectral::SpectralData;

/// Imaginary residues below this are rounding noise.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// `<b_a† b_b>` from the string determinant over `G`.
///
/// For `a < b` this is `½ det[G_{r,c}]` with rows `a..b` and columns
/// `a+1..=b`. The diagonal is the density `g_aa = (G_aa + 1)/2`.
pub fn two_point(big_g: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    two_point_with(&mut DetScratch::new(), big_g, a, b)
}

pub(crate) fn two_point_with(
    scratch: &mut DetScratch,
    big_g: &DMatrix<f64>,
    a: usize,
    b: usize,
) -> f64 {
    if a == b {
        return 0.5 * (big_g[(a, a)] + 1.0);
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let rows: Vec<usize> = (lo..hi).collect();
    let cols: Vec<usize> = (lo + 1..=hi).collect();
    0.5 * scratch.minor(big_g, &rows, &cols)
}

/// Full `B` matrix; symmetric by construction.
pub fn two_point_matrix(big_g: &DMatrix<f64>) -> DMatrix<f64> {
    let l = big_g.nrows();
    let pairs: Vec<(usize, usize)> = (0..l).flat_map(|a| (a..l).map(move |b| (a, b))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map_init(DetScratch::new, |scratch, &(a, b)| {
            two_point_with(scratch, big_g, a, b)
        })
        .collect();
    let mut out = DMatrix::zeros(l, l);
    for (&(a, b), v) in pairs.iter().zip(values) {
        out[(a, b)] = v;
        out[(b, a)] = v;
    }
    out
}

pub fn density(g: &DMatrix<f64>) -> Vec<f64> {
    g.diagonal().iter().copied().collect()
}

/// `n_q = Σ_{n,m} e^{i 2π q (n-m)/L} B_nm`, divided by `L` under per-site
/// normalisation.
pub fn momentum_distribution(b: &DMatrix<f64>, normalization: Normalization) -> Result<Vec<f64>> {
    let l = b.nrows();
    let phases = PhaseTable::new(l);
    let scale = match normalization {
        Normalization::PerSite => 1.0 / l as f64,
        Normalization::Raw => 1.0,
    };
    let mut out = Vec::with_capacity(l);
    for q in 0..l {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..l {
            for m in 0..l {
                acc += phases.phase(q, n as isize - m as isize) * b[(n, m)];
            }
        }
        acc *= scale;
        if acc.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::ComplexResidue(acc.im.abs()));
        }
        out.push(acc.re);
    }
    Ok(out)
}

/// `N/Z` with `Z` the number of sites whose density exceeds `threshold`.
pub fn trap_scale(density: &[f64], particles: usize, threshold: f64) -> Result<f64> {
    let support = density.iter().filter(|&&n| n > threshold).count();
    if support == 0 {
        return Err(Error::EmptySupport(threshold));
    }
    Ok(particles as f64 / support as f64)
}

pub fn trap_renormalize(
    values: &[f64],
    density: &[f64],
    particles: usize,
    threshold: f64,
) -> Result<Vec<f64>> {
    let s = trap_scale(density, particles, threshold)?;
    Ok(values.iter().map(|v| v * s).collect())
}

/// Reporting factor for a scenario: `N/Z` for trapped runs with
/// renormalisation enabled, otherwise 1.
pub fn report_scale(scenario: &LatticeScenario, density: &[f64]) -> Result<f64> {
    if scenario.trap_renorm && !scenario.potential.is_flat() {
        trap_scale(density, scenario.particles, scenario.density_threshold)
    } else {
        Ok(1.0)
    }
}

#[derive(Debug, Clone)]
pub struct CorrelationSet {
    pub b: DMatrix<f64>,
    pub density: Vec<f64>,
    pub nq: Vec<f64>,
    pub normalization: Normalization,
}

impl CorrelationSet {
    pub fn compute(spectral: &SpectralData, normalization: Normalization) -> Result<Self> {
        let b = two_point_matrix(&spectral.big_g);
        let nq = momentum_distribution(&b, normalization)?;
        Ok(CorrelationSet {
            density: density(&spectral.g),
            b,
            nq,
            normalization,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Boundary, LatticeScenario, Potential};

    fn corr(s: &LatticeScenario) -> CorrelationSet {
        CorrelationSet::compute(
            &SpectralData::from_scenario(s).unwrap(),
            Normalization::PerSite,
        )
        .unwrap()
    }

    #[test]
    fn unit_filling() {
        let l = 7;
        let c = corr(&LatticeScenario::flat(l, l, Boundary::Periodic));
        let id = DMatrix::<f64>::identity(l, l);
        assert!(crate::linalg::max_abs_diff(&c.b, &id) < 1e-12);
        assert!(c.density.iter().all(|n| (n - 1.0).abs() < 1e-12));
        assert!(c.nq.iter().all(|n| (n - 1.0).abs() < 1e-12));
    }

    #[test]
    fn dimer() {
        let c = corr(&LatticeScenario::flat(2, 1, Boundary::Open));
        assert!((c.b[(0, 1)] - 0.5).abs() < 1e-14);
        assert!((c.density[0] - 0.5).abs() < 1e-14 && (c.density[1] - 0.5).abs() < 1e-14);
        assert!((c.nq[0] - 1.0).abs() < 1e-14 && c.nq[1].abs() < 1e-14);
        let raw = momentum_distribution(&c.b, Normalization::Raw).unwrap();
        assert!((raw[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adjacent_sites_equal_g() {
        let sd = SpectralData::from_scenario(&LatticeScenario::flat(6, 3, Boundary::Open)).unwrap();
        for a in 0..5 {
            assert!((two_point(&sd.big_g, a, a + 1) - sd.g[(a, a + 1)]).abs() < 1e-14);
            assert_eq!(
                two_point(&sd.big_g, a + 1, a),
                two_point(&sd.big_g, a, a + 1)
            );
        }
    }

    #[test]
    fn flat_ring_peaks_at_zero() {
        let c = corr(&LatticeScenario::flat(55, 19, Boundary::Periodic));
        let argmax = (0..55)
            .max_by(|&a, &b| c.nq[a].total_cmp(&c.nq[b]))
            .unwrap();
        assert_eq!(argmax, 0);
    }

    #[test]
    fn mott_trap_density() {
        let s = LatticeScenario::new(
            55,
            19,
            Boundary::Periodic,
            Potential::Harmonic { omega: 0.17 },
        );
        let c = corr(&s);
        for j in 19..=35 {
            assert!(c.density[j] > 0.99, "site {j}: {}", c.density[j]);
        }
        for j in (0..5).chain(50..55) {
            assert!(c.density[j] < 1e-6);
        }
    }

    #[test]
    fn sum_rule_and_reflection() {
        for s in [
            LatticeScenario::flat(21, 7, Boundary::Periodic),
            LatticeScenario::new(30, 9, Boundary::Open, Potential::Harmonic { omega: 0.02 }),
            LatticeScenario::new(
                34,
                10,
                Boundary::Periodic,
                Potential::Quasiperiodic {
                    lambda: 1.5,
                    gamma_num: 21,
                    gamma_den: 34,
                    phi: 0.785,
                },
            ),
        ] {
            let c = corr(&s);
            let l = s.sites;
            assert!((c.nq.iter().sum::<f64>() - s.particles as f64).abs() < 1e-10);
            for q in 1..l {
                assert!((c.nq[q] - c.nq[l - q]).abs() < 1e-10);
            }
            assert!(c.nq.iter().all(|&v| v >= -1e-12));
        }
    }

    #[test]
    fn trap_renormalization() {
        let dens = [0.0, 0.5, 1.0, 0.5, 0.0];
        let out = trap_renormalize(&[1.0, 2.0], &dens, 2, 1e-4).unwrap();
        assert_eq!(out, vec![2.0 / 3.0, 4.0 / 3.0]);
        assert!(matches!(
            trap_scale(&[0.0; 4], 2, 1e-4),
            Err(Error::EmptySupport(_))
        ));
        let flat = LatticeScenario::flat(5, 2, Boundary::Open).with_trap_renorm(true);
        assert_eq!(report_scale(&flat, &dens).unwrap(), 1.0);
    }
}
