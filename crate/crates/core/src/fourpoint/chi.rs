//! Site-ordered four-point functions of hard-core bosons.
//!
//! Same-site products `b b†` carry the multiple-occupancy rule
//! `b b† -> 1 + b† b`: intermediate states may be doubly occupied, so these
//! strings differ from their spin-1/2 counterparts.

use nalgebra::DMatrix;

use super::matrices::{DirectDeterminants, StringDeterminants};
use super::ordering::{site_order, Ladder, OperatorTuple, OrderedCase, Pattern};

/// Borrowed propagators: `g`, `G = 2g - 1` and the boson one-body matrix `B`.
#[derive(Debug, Clone, Copy)]
pub struct Propagators<'a> {
    pub g: &'a DMatrix<f64>,
    pub big_g: &'a DMatrix<f64>,
    pub b: &'a DMatrix<f64>,
}

impl<'a> Propagators<'a> {
    pub fn new(g: &'a DMatrix<f64>, big_g: &'a DMatrix<f64>, b: &'a DMatrix<f64>) -> Self {
        Propagators { g, big_g, b }
    }
}

/// Hard-core block of a same-site word of bosonic ladder operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LocalOp {
    /// `empty·(1 - n) + full·n`
    Diagonal {
        empty: f64,
        full: f64,
    },
    /// `amp · b†`
    Raise(f64),
    /// `amp · b`
    Lower(f64),
    Zero,
}

/// Bosonic amplitude of `word` (applied right to left) starting from
/// occupation `occ`, with no occupancy cap.
fn word_amplitude(word: &[Ladder], mut occ: u32) -> f64 {
    let mut squared: u64 = 1;
    for op in word.iter().rev() {
        match op {
            Ladder::Create => {
                occ += 1;
                squared *= occ as u64;
            }
            Ladder::Annihilate => {
                if occ == 0 {
                    return 0.0;
                }
                squared *= occ as u64;
                occ -= 1;
            }
        }
    }
    (squared as f64).sqrt()
}

/// Projects a same-site word onto the `{|0>, |1>}` block. Operators on
/// other sites commute with it and the ground state lives in that block,
/// so the projection is exact inside any expectation value.
pub(crate) fn reduce_word(word: &[Ladder]) -> LocalOp {
    let net: i32 = word
        .iter()
        .map(|op| match op {
            Ladder::Create => 1,
            Ladder::Annihilate => -1,
        })
        .sum();
    match net {
        0 => LocalOp::Diagonal {
            empty: word_amplitude(word, 0),
            full: word_amplitude(word, 1),
        },
        1 => LocalOp::Raise(word_amplitude(word, 0)),
        -1 => LocalOp::Lower(word_amplitude(word, 1)),
        _ => LocalOp::Zero,
    }
}

fn pair_of_sites(p: &Propagators, a: usize, c: usize, left: LocalOp, right: LocalOp) -> f64 {
    let (g, b) = (p.g, p.b);
    match (left, right) {
        (
            LocalOp::Diagonal {
                empty: e1,
                full: f1,
            },
            LocalOp::Diagonal {
                empty: e2,
                full: f2,
            },
        ) => {
            let (na, nc) = (g[(a, a)], g[(c, c)]);
            let nn = na * nc - g[(a, c)] * g[(a, c)];
            e1 * e2 + e1 * (f2 - e2) * nc + e2 * (f1 - e1) * na + (f1 - e1) * (f2 - e2) * nn
        }
        (LocalOp::Raise(x), LocalOp::Lower(y)) | (LocalOp::Lower(x), LocalOp::Raise(y)) => {
            x * y * b[(a, c)]
        }
        _ => 0.0,
    }
}

/// Cases with at most two distinct sites, for any operator signs.
///
/// For the pattern `b_n† b_m b_l† b_j` these reduce to `g_nn`,
/// `g_nn g_mm - g_nm²`, `g_nn g_mm - g_nm² + g_nn` and `B_nm`.
fn few_sites(case: &OrderedCase, p: &Propagators) -> f64 {
    let [a, _, _, d] = case.sites;
    let ops = case.ops;
    match case.pattern {
        Pattern::Quad => match reduce_word(&ops) {
            LocalOp::Diagonal { empty, full } => empty + (full - empty) * p.g[(a, a)],
            _ => 0.0,
        },
        Pattern::TwoPairs => pair_of_sites(p, a, d, reduce_word(&ops[..2]), reduce_word(&ops[2..])),
        Pattern::Triple => {
            if case.sites[1] == d {
                pair_of_sites(p, a, d, reduce_word(&ops[..1]), reduce_word(&ops[1..]))
            } else {
                pair_of_sites(p, a, d, reduce_word(&ops[..3]), reduce_word(&ops[3..]))
            }
        }
        _ => unreachable!("pattern {:?} has three or more sites", case.pattern),
    }
}

#[inline]
fn indicator(p: bool) -> f64 {
    if p {
        1.0
    } else {
        0.0
    }
}

/// `χ` for a site-ordered case with string determinants from `dets`.
pub fn chi_with<D: StringDeterminants>(case: &OrderedCase, p: &Propagators, dets: &mut D) -> f64 {
    let [al, be, ga, de] = case.signs();
    if al + be + ga + de != 0 {
        return 0.0;
    }
    let [a, b, c, d] = case.sites;
    let [al, be, ga, de] = [al, be, ga, de].map(f64::from);
    let bm = p.b;
    match case.pattern {
        Pattern::PairMid => {
            let pre = (1.0 - be * ga) / 2.0;
            if pre == 0.0 {
                return 0.0;
            }
            pre * (-0.25 * dets.m(a, b, d) + (0.5 + indicator(be > 0.0)) * bm[(a, d)])
        }
        Pattern::PairLeft => {
            let pre = (1.0 - al * be) / 2.0;
            if pre == 0.0 {
                return 0.0;
            }
            pre * (0.25 * dets.s(a, c, d) + (0.5 + indicator(al > 0.0)) * bm[(c, d)])
        }
        Pattern::PairRight => {
            let pre = (1.0 - ga * de) / 2.0;
            if pre == 0.0 {
                return 0.0;
            }
            pre * (0.25 * dets.s(c, a, b) + (0.5 + indicator(ga > 0.0)) * bm[(a, b)])
        }
        Pattern::AllDistinct => {
            let wx = (2.0 - ga * de - al * be) / 16.0;
            let wy = be / 4.0 * (indicator(ga < 0.0) - indicator(al < 0.0));
            let mut acc = 0.0;
            if wx != 0.0 {
                acc += wx * dets.x(a, b, c, d);
            }
            if wy != 0.0 {
                acc += wy * dets.y(a, b, c, d);
            }
            if (b + d - c - a) % 2 == 1 {
                -acc
            } else {
                acc
            }
        }
        Pattern::TwoPairs | Pattern::Triple | Pattern::Quad => few_sites(case, p),
    }
}

/// `χ` for a site-ordered case, evaluating determinants directly.
pub fn chi_ordered(case: &OrderedCase, p: &Propagators) -> f64 {
    chi_with(case, p, &mut DirectDeterminants::new(p.big_g))
}

/// `<b^{(o0)}_{s0} b^{(o1)}_{s1} b^{(o2)}_{s2} b^{(o3)}_{s3}>` in the ground state.
pub fn four_point(tuple: &OperatorTuple, p: &Propagators) -> f64 {
    chi_ordered(&site_order(tuple), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Boundary, LatticeScenario};
    use crate::spectral::SpectralData;
    use crate::twopoint::two_point_matrix;
    use Ladder::{Annihilate as A, Create as C};

    #[test]
    fn word_reduction() {
        assert_eq!(
            reduce_word(&[C, A]),
            LocalOp::Diagonal {
                empty: 0.0,
                full: 1.0
            }
        );
        assert_eq!(
            reduce_word(&[A, C]),
            LocalOp::Diagonal {
                empty: 1.0,
                full: 2.0
            }
        );
        assert_eq!(reduce_word(&[C, A, C]), LocalOp::Raise(1.0));
        assert_eq!(reduce_word(&[A, C, A]), LocalOp::Lower(1.0));
        assert_eq!(reduce_word(&[C, C]), LocalOp::Zero);
        assert_eq!(
            reduce_word(&[C, A, C, A]),
            LocalOp::Diagonal {
                empty: 0.0,
                full: 1.0
            }
        );
        // b b b† b† = (1+n)(2+n) on the hard-core block
        assert_eq!(
            reduce_word(&[A, A, C, C]),
            LocalOp::Diagonal {
                empty: 2.0,
                full: 6.0
            }
        );
    }

    #[test]
    fn mott_special_cases() {
        let l = 5;
        let id = DMatrix::<f64>::identity(l, l);
        let p = Propagators::new(&id, &id, &id);
        assert_eq!(
            four_point(&OperatorTuple::density_pair(1, 3, 3, 1), &p),
            2.0
        );
        assert_eq!(
            four_point(&OperatorTuple::density_pair(1, 1, 3, 3), &p),
            1.0
        );
        assert_eq!(
            four_point(&OperatorTuple::density_pair(2, 2, 2, 2), &p),
            1.0
        );
        assert_eq!(
            four_point(&OperatorTuple::density_pair(2, 2, 2, 4), &p),
            0.0
        );
        assert_eq!(
            four_point(&OperatorTuple::density_pair(0, 1, 2, 4), &p),
            0.0
        );
    }

    #[test]
    fn non_conserving_is_zero() {
        let sd = SpectralData::from_scenario(&LatticeScenario::flat(6, 3, Boundary::Open)).unwrap();
        let b = two_point_matrix(&sd.big_g);
        let p = Propagators::new(&sd.g, &sd.big_g, &b);
        for sites in [[0, 1, 2, 3], [0, 0, 2, 5], [1, 3, 3, 4], [2, 2, 2, 2]] {
            assert_eq!(
                four_point(&OperatorTuple::from_signs(sites, [1, 1, 1, -1]), &p),
                0.0
            );
            assert_eq!(
                four_point(&OperatorTuple::from_signs(sites, [-1, -1, -1, -1]), &p),
                0.0
            );
        }
    }

    #[test]
    fn hermiticity() {
        let sd = SpectralData::from_scenario(&LatticeScenario::flat(7, 3, Boundary::Open)).unwrap();
        let b = two_point_matrix(&sd.big_g);
        let p = Propagators::new(&sd.g, &sd.big_g, &b);
        for n in 0..7 {
            for m in 0..7 {
                for l in 0..7 {
                    for j in 0..7 {
                        let t = OperatorTuple::density_pair(n, m, l, j);
                        let v = four_point(&t, &p);
                        let w = four_point(&t.adjoint(), &p);
                        assert!((v - w).abs() < 1e-12, "{t:?}: {v} vs {w}");
                    }
                }
            }
        }
    }
}
