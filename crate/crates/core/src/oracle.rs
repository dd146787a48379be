//! Brute-force exact diagonalisation on small lattices.
//!
//! Ground states are found in the fixed-`N` sector of a capped Fock space.
//! Expectation values apply ladder operators one at a time to a sparse
//! vector, with true bosonic matrix elements (`b†|n> = √(n+1)|n+1>`) or
//! spin-1/2 ones (`b†|1> = 0`). Bosonic strings may pass through doubly
//! occupied intermediate states even when the ground state has none.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::PhaseTable;
use crate::fourpoint::{Ladder, NoiseMap, NoiseStats, OperatorTuple};
use crate::scenario::{Boundary, LatticeScenario, Normalization};

pub const MAX_HCB_SITES: usize = 12;
pub const MAX_NOISE_SITES: usize = 8;
pub const MAX_BOSE_HUBBARD_SITES: usize = 8;
pub const GROUND_GAP_TOL: f64 = 1e-10;

const BITS: u32 = 3;
const MASK: u64 = (1 << BITS) - 1;
/// Largest occupation representable in the packed state encoding.
pub const MAX_OCCUPATION: u8 = MASK as u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Bosonic,
    Spin,
}

#[inline]
fn occupation(state: u64, site: usize) -> u8 {
    ((state >> (BITS as usize * site)) & MASK) as u8
}

#[inline]
fn with_occupation(state: u64, site: usize, occ: u8) -> u64 {
    let shift = BITS as usize * site;
    (state & !(MASK << shift)) | ((occ as u64) << shift)
}

/// Fock states with at most `cap` bosons per site, optionally restricted to
/// a total particle number, enumerated lexicographically in the occupation
/// string `(n_0, n_1, ..)`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    pub sites: usize,
    pub cap: u8,
    pub particles: Option<usize>,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl FockBasis {
    pub fn new(sites: usize, cap: u8, particles: Option<usize>) -> Result<Self> {
        if cap > MAX_OCCUPATION {
            return Err(Error::Cap(format!("cap {cap} exceeds {MAX_OCCUPATION}")));
        }
        if sites * BITS as usize > 64 {
            return Err(Error::TooLarge {
                what: "sites",
                value: sites,
                limit: 64 / BITS as usize,
            });
        }
        let mut states = Vec::new();
        let mut occ = vec![0u8; sites];
        fn fill(site: usize, left: Option<usize>, cap: u8, occ: &mut Vec<u8>, out: &mut Vec<u64>) {
            if site == occ.len() {
                if left.is_none_or(|k| k == 0) {
                    out.push(
                        occ.iter()
                            .enumerate()
                            .fold(0, |s, (j, &n)| with_occupation(s, j, n)),
                    );
                }
                return;
            }
            for n in 0..=cap {
                let rest = match left {
                    Some(k) if (n as usize) > k => break,
                    Some(k) => Some(k - n as usize),
                    None => None,
                };
                occ[site] = n;
                fill(site + 1, rest, cap, occ, out);
            }
            occ[site] = 0;
        }
        fill(0, particles, cap, &mut occ, &mut states);
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(FockBasis {
            sites,
            cap,
            particles,
            states,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> u64 {
        self.states[i]
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn occupations(&self, i: usize) -> Vec<u8> {
        (0..self.sites)
            .map(|j| occupation(self.states[i], j))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct OracleState {
    pub basis: FockBasis,
    pub ground: Vec<f64>,
    pub energy: f64,
    /// Distance to the first excited level.
    pub gap: f64,
    pub algebra: Algebra,
    /// Occupation cap applied while evaluating operator strings.
    pub eval_cap: u8,
}

impl OracleState {
    pub fn sites(&self) -> usize {
        self.basis.sites
    }

    pub fn with_algebra(mut self, algebra: Algebra) -> Self {
        self.algebra = algebra;
        self
    }

    pub fn with_eval_cap(mut self, cap: u8) -> Self {
        self.eval_cap = cap;
        self
    }
}

fn bonds(sites: usize, bc: Boundary) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..sites.saturating_sub(1)).map(|j| (j, j + 1)).collect();
    if bc == Boundary::Periodic && sites > 2 {
        out.push((sites - 1, 0));
    }
    out
}

/// `-J Σ (b_x† b_y + h.c.) + Σ V_j n_j + U/2 Σ n_j (n_j - 1)` on `basis`.
fn hamiltonian(basis: &FockBasis, scenario: &LatticeScenario, u: f64) -> DMatrix<f64> {
    let j = scenario.hopping;
    let v = scenario.potential_values();
    let bonds = bonds(basis.sites, scenario.bc);
    let dim = basis.dim();
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let s = basis.state(i);
        let mut diag = 0.0;
        for (site, &vj) in v.iter().enumerate() {
            let n = occupation(s, site) as f64;
            diag += vj * j * n + 0.5 * u * n * (n - 1.0);
        }
        h[(i, i)] = diag;
        for &(a, b) in &bonds {
            for (to, from) in [(a, b), (b, a)] {
                let nf = occupation(s, from);
                let nt = occupation(s, to);
                if nf == 0 || nt >= basis.cap {
                    continue;
                }
                let t = with_occupation(with_occupation(s, from, nf - 1), to, nt + 1);
                let k = basis.index_of(t).expect("hop stays in the sector");
                h[(k, i)] += -j * ((nf as f64) * (nt as f64 + 1.0)).sqrt();
            }
        }
    }
    h
}

fn lowest_state(
    basis: FockBasis,
    h: DMatrix<f64>,
    algebra: Algebra,
    eval_cap: u8,
) -> Result<OracleState> {
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..basis.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energy = eig.eigenvalues[order[0]];
    let gap = if basis.dim() > 1 {
        eig.eigenvalues[order[1]] - energy
    } else {
        f64::INFINITY
    };
    if gap < GROUND_GAP_TOL {
        return Err(Error::DegenerateGround(gap));
    }
    let mut ground: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let lead = ground.iter().copied().fold(
        0.0f64,
        |best, x| if x.abs() > best.abs() { x } else { best },
    );
    if lead < 0.0 {
        ground.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(OracleState {
        basis,
        ground,
        energy,
        gap,
        algebra,
        eval_cap,
    })
}

/// Ground state of the hard-core boson Hamiltonian, bosonic evaluation
/// with one virtual extra quantum per site.
pub fn hcb_ground_state(scenario: &LatticeScenario) -> Result<OracleState> {
    scenario.check()?;
    if scenario.sites > MAX_HCB_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            value: scenario.sites,
            limit: MAX_HCB_SITES,
        });
    }
    let basis = FockBasis::new(scenario.sites, 1, Some(scenario.particles))?;
    let h = hamiltonian(&basis, scenario, 0.0);
    lowest_state(basis, h, Algebra::Bosonic, 2)
}

/// Ground state of the full Bose-Hubbard model with on-site repulsion `u`
/// (units of `J`) and at most `cap` bosons per site.
pub fn bose_hubbard_ground(scenario: &LatticeScenario, u: f64, cap: u8) -> Result<OracleState> {
    scenario.check()?;
    if cap < 3 {
        return Err(Error::Cap(format!(
            "Bose-Hubbard basis needs cap >= 3, got {cap}"
        )));
    }
    if cap + 2 > MAX_OCCUPATION {
        return Err(Error::Cap(format!(
            "cap {cap} leaves no room for virtual quanta"
        )));
    }
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::BadScenario(format!(
            "U = {u} must be positive and finite"
        )));
    }
    if scenario.sites > MAX_BOSE_HUBBARD_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            value: scenario.sites,
            limit: MAX_BOSE_HUBBARD_SITES,
        });
    }
    let basis = FockBasis::new(scenario.sites, cap, Some(scenario.particles))?;
    let h = hamiltonian(&basis, scenario, u * scenario.hopping);
    lowest_state(basis, h, Algebra::Bosonic, cap + 2)
}

/// `<ψ| O_0 O_1 .. O_k |ψ>` for `ops` read left to right.
pub fn oracle_expectation(state: &OracleState, ops: &[(Ladder, usize)]) -> Result<f64> {
    if state.algebra == Algebra::Bosonic && state.eval_cap < 2 {
        return Err(Error::Cap(format!(
            "bosonic evaluation needs cap >= 2, got {}",
            state.eval_cap
        )));
    }
    let mut vec: BTreeMap<u64, f64> = BTreeMap::new();
    for (i, &amp) in state.ground.iter().enumerate() {
        if amp != 0.0 {
            vec.insert(state.basis.state(i), amp);
        }
    }
    for &(op, site) in ops.iter().rev() {
        let mut next = BTreeMap::new();
        for (&s, &amp) in &vec {
            let n = occupation(s, site);
            let (to, factor) = match (state.algebra, op) {
                (Algebra::Bosonic, Ladder::Create) if n < state.eval_cap => {
                    (n + 1, ((n + 1) as f64).sqrt())
                }
                (Algebra::Spin, Ladder::Create) if n == 0 => (1, 1.0),
                (Algebra::Bosonic, Ladder::Annihilate) if n > 0 => (n - 1, (n as f64).sqrt()),
                (Algebra::Spin, Ladder::Annihilate) if n == 1 => (0, 1.0),
                _ => continue,
            };
            *next.entry(with_occupation(s, site, to)).or_insert(0.0) += amp * factor;
        }
        vec = next;
    }
    Ok(vec
        .iter()
        .filter_map(|(&s, &amp)| state.basis.index_of(s).map(|i| amp * state.ground[i]))
        .sum())
}

pub fn oracle_four_point(state: &OracleState, tuple: &OperatorTuple) -> Result<f64> {
    let ops: Vec<(Ladder, usize)> = tuple.ops.iter().copied().zip(tuple.sites).collect();
    oracle_expectation(state, &ops)
}

/// `B_ij = <b_i† b_j>`.
pub fn oracle_two_point(state: &OracleState) -> Result<DMatrix<f64>> {
    let l = state.sites();
    let mut b = DMatrix::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            b[(i, j)] = oracle_expectation(state, &[(Ladder::Create, i), (Ladder::Annihilate, j)])?;
        }
    }
    Ok(b)
}

pub fn oracle_density(state: &OracleState) -> Result<Vec<f64>> {
    let b = oracle_two_point(state)?;
    Ok(b.diagonal().iter().copied().collect())
}

/// Noise map by direct `L⁶` summation over oracle four-point values.
pub fn oracle_noise_map(state: &OracleState, normalization: Normalization) -> Result<NoiseMap> {
    let l = state.sites();
    if l > MAX_NOISE_SITES {
        return Err(Error::TooLarge {
            what: "sites",
            value: l,
            limit: MAX_NOISE_SITES,
        });
    }
    let mut values = vec![0.0; l.pow(4)];
    for n in 0..l {
        for m in 0..l {
            for k in 0..l {
                for j in 0..l {
                    values[((n * l + m) * l + k) * l + j] =
                        oracle_four_point(state, &OperatorTuple::density_pair(n, m, k, j))?;
                }
            }
        }
    }
    let b = oracle_two_point(state)?;
    let phases = PhaseTable::new(l);
    let (scale_nq, scale_s4) = match normalization {
        Normalization::PerSite => (1.0 / l as f64, 1.0 / (l * l) as f64),
        Normalization::Raw => (1.0, 1.0),
    };
    let nq: Vec<f64> = (0..l)
        .map(|q| {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..l {
                for m in 0..l {
                    acc += phases.phase(q, n as isize - m as isize) * b[(n, m)];
                }
            }
            acc.re * scale_nq
        })
        .collect();
    let mut s4 = vec![Complex64::new(0.0, 0.0); l * l];
    let mut delta = vec![Complex64::new(0.0, 0.0); l * l];
    for q1 in 0..l {
        for q2 in 0..l {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..l {
                for m in 0..l {
                    let p1 = phases.phase(q1, n as isize - m as isize);
                    for k in 0..l {
                        for j in 0..l {
                            let v = values[((n * l + m) * l + k) * l + j];
                            if v != 0.0 {
                                acc += p1 * phases.phase(q2, k as isize - j as isize) * v;
                            }
                        }
                    }
                }
            }
            s4[q1 * l + q2] = acc;
            delta[q1 * l + q2] = acc * scale_s4 - nq[q1] * nq[q2];
        }
    }
    Ok(NoiseMap {
        sites: l,
        delta,
        s4,
        nq,
        normalization,
        report_scale: 1.0,
        stats: NoiseStats {
            tuples: l.pow(4),
            ..NoiseStats::default()
        },
    })
}
