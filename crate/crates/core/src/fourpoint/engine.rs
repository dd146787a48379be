//! Tabulated string determinants for bulk four-point evaluation.
//!
//! `X` and `Y` depend only on the sorted site set `a<b<c<d`, and `M`, `S`
//! only on sorted triples, so each is computed once and indexed through the
//! combinatorial number system. For `L = 89` the tables hold about 5 million
//! doubles.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::chi::{chi_with, Propagators};
use super::matrices::{DirectDeterminants, StringDeterminants};
use super::ordering::{site_order, OperatorTuple};

/// `C(n, k)` for `n < sites`, `k <= 4`.
#[derive(Debug, Clone)]
struct Binomials {
    table: Vec<[usize; 5]>,
}

impl Binomials {
    fn new(sites: usize) -> Self {
        let table = (0..=sites)
            .map(|n| {
                let mut row = [0usize; 5];
                for (k, slot) in row.iter_mut().enumerate() {
                    *slot = binomial(n, k);
                }
                row
            })
            .collect();
        Binomials { table }
    }

    #[inline]
    fn c(&self, n: usize, k: usize) -> usize {
        self.table[n][k]
    }

    #[inline]
    fn triple(&self, a: usize, b: usize, c: usize) -> usize {
        self.c(a, 1) + self.c(b, 2) + self.c(c, 3)
    }

    #[inline]
    fn quad(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        self.c(a, 1) + self.c(b, 2) + self.c(c, 3) + self.c(d, 4)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All string determinants of one `G`, in colexicographic order.
#[derive(Debug, Clone)]
pub struct DeterminantTables {
    sites: usize,
    binom: Binomials,
    /// `M(a, b, d)` for `a < b < d`.
    m: Vec<f64>,
    /// `S(a, c, d)` for `a < c < d`, pivot below the window.
    s_low: Vec<f64>,
    /// `S(c, a, b)` for `a < b < c`, pivot above the window.
    s_high: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl DeterminantTables {
    pub fn build(big_g: &DMatrix<f64>) -> Self {
        let l = big_g.nrows();
        let binom = Binomials::new(l);

        // colex order: outer loop on the largest index, then the next
        let top_pairs: Vec<(usize, usize)> =
            (0..l).flat_map(|z| (0..z).map(move |y| (y, z))).collect();
        let triples: Vec<[f64; 3]> = top_pairs
            .par_iter()
            .map_init(
                || DirectDeterminants::new(big_g),
                |dets, &(y, z)| {
                    (0..y)
                        .map(|x| [dets.m(x, y, z), dets.s(x, y, z), dets.s(z, x, y)])
                        .collect::<Vec<_>>()
                },
            )
            .flatten()
            .collect();
        let m = triples.iter().map(|t| t[0]).collect();
        let s_low = triples.iter().map(|t| t[1]).collect();
        let s_high = triples.iter().map(|t| t[2]).collect();

        let quads: Vec<(f64, f64)> = top_pairs
            .par_iter()
            .map_init(
                || DirectDeterminants::new(big_g),
                |dets, &(c, d)| {
                    let mut out = Vec::with_capacity(c * c.saturating_sub(1) / 2);
                    for b in 0..c {
                        for a in 0..b {
                            out.push((dets.x(a, b, c, d), dets.y(a, b, c, d)));
                        }
                    }
                    out
                },
            )
            .flatten()
            .collect();
        let x = quads.iter().map(|q| q.0).collect();
        let y = quads.iter().map(|q| q.1).collect();

        DeterminantTables {
            sites: l,
            binom,
            m,
            s_low,
            s_high,
            x,
            y,
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Number of determinants evaluated to fill the tables.
    pub fn determinant_count(&self) -> usize {
        self.m.len() + self.s_low.len() + self.s_high.len() + self.x.len() + self.y.len()
    }

    pub fn memory_bytes(&self) -> usize {
        self.determinant_count() * std::mem::size_of::<f64>()
    }
}

/// Table lookups; `&mut` only to satisfy the trait.
struct TableLookup<'a>(&'a DeterminantTables);

impl StringDeterminants for TableLookup<'_> {
    #[inline]
    fn m(&mut self, x: usize, y: usize, z: usize) -> f64 {
        self.0.m[self.0.binom.triple(x, y, z)]
    }

    #[inline]
    fn s(&mut self, p: usize, u: usize, v: usize) -> f64 {
        let t = self.0;
        if p < u {
            t.s_low[t.binom.triple(p, u, v)]
        } else {
            t.s_high[t.binom.triple(u, v, p)]
        }
    }

    #[inline]
    fn x(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.0.x[self.0.binom.quad(a, b, c, d)]
    }

    #[inline]
    fn y(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.0.y[self.0.binom.quad(a, b, c, d)]
    }
}

/// Four-point evaluator over precomputed determinant tables.
#[derive(Debug, Clone)]
pub struct FourPointEngine<'a> {
    props: Propagators<'a>,
    tables: DeterminantTables,
}

impl<'a> FourPointEngine<'a> {
    pub fn new(props: Propagators<'a>) -> Self {
        let tables = DeterminantTables::build(props.big_g);
        FourPointEngine { props, tables }
    }

    pub fn tables(&self) -> &DeterminantTables {
        &self.tables
    }

    pub fn sites(&self) -> usize {
        self.tables.sites
    }

    /// Any tuple, evaluated as written.
    pub fn evaluate(&self, tuple: &OperatorTuple) -> f64 {
        chi_with(
            &site_order(tuple),
            &self.props,
            &mut TableLookup(&self.tables),
        )
    }

    /// `<b_n† b_m b_l† b_j>`.
    ///
    /// Always evaluated on the lexicographically smaller of the tuple and
    /// its adjoint `(j, l, m, n)`, so the two agree bit for bit.
    #[inline]
    pub fn density_pair(&self, n: usize, m: usize, l: usize, j: usize) -> f64 {
        let t = if (n, m, l, j) <= (j, l, m, n) {
            OperatorTuple::density_pair(n, m, l, j)
        } else {
            OperatorTuple::density_pair(j, l, m, n)
        };
        self.evaluate(&t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourpoint::chi::four_point;
    use crate::scenario::{Boundary, LatticeScenario, Potential};
    use crate::spectral::SpectralData;
    use crate::twopoint::two_point_matrix;

    #[test]
    fn colex_indices_are_dense() {
        let bn = Binomials::new(9);
        let mut seen = vec![false; binomial(9, 4)];
        for d in 0..9 {
            for c in 0..d {
                for b in 0..c {
                    for a in 0..b {
                        let i = bn.quad(a, b, c, d);
                        assert!(!seen[i]);
                        seen[i] = true;
                    }
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn tables_match_direct_evaluation() {
        let s = LatticeScenario::new(9, 4, Boundary::Open, Potential::Harmonic { omega: 0.05 });
        let sd = SpectralData::from_scenario(&s).unwrap();
        let b = two_point_matrix(&sd.big_g);
        let p = Propagators::new(&sd.g, &sd.big_g, &b);
        let engine = FourPointEngine::new(p);
        assert_eq!(
            engine.tables().determinant_count(),
            3 * binomial(9, 3) + 2 * binomial(9, 4)
        );
        for signs in [[-1, 1, -1, 1], [1, -1, -1, 1], [1, 1, -1, -1]] {
            for n in 0..9 {
                for m in 0..9 {
                    for l in 0..9 {
                        for j in 0..9 {
                            let t = OperatorTuple::from_signs([n, m, l, j], signs);
                            assert_eq!(engine.evaluate(&t), four_point(&t, &p));
                        }
                    }
                }
            }
        }
    }
}
