//! Row and column index lists of the string matrices `M`, `S`, `X`, `Y`.
//!
//! The order of rows and columns fixes the sign of each determinant and is
//! part of the contract.

use nalgebra::DMatrix;

use crate::linalg::DetScratch;

/// Rows `x..z` and columns `x+1..=z`, both with `y` removed.
pub fn m_indices(x: usize, y: usize, z: usize) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(x < y && y < z);
    let rows = (x..z).filter(|&r| r != y).collect();
    let cols = (x + 1..=z).filter(|&c| c != y).collect();
    (rows, cols)
}

/// Rows `(p, u, u+1, .., v-1)` and columns `(p, u+1, .., v)`.
pub fn s_indices(p: usize, u: usize, v: usize) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(u < v && (p < u || p > v));
    let rows = std::iter::once(p).chain(u..v).collect();
    let cols = std::iter::once(p).chain(u + 1..=v).collect();
    (rows, cols)
}

/// Rows `(b, a+1..b, c+1..=d)` and columns `(a..b, c+1..d, c)`.
pub fn x_indices(a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(a < b && b < c && c < d);
    let rows = std::iter::once(b)
        .chain(a + 1..b)
        .chain(c + 1..=d)
        .collect();
    let cols = (a..b).chain(c + 1..d).chain(std::iter::once(c)).collect();
    (rows, cols)
}

/// Rows `(a+1..b, c+1..d, c, d)` and columns `(a, b, a+1..b, c+1..d)`.
pub fn y_indices(a: usize, b: usize, c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
    debug_assert!(a < b && b < c && c < d);
    let rows = (a + 1..b).chain(c + 1..d).chain([c, d]).collect();
    let cols = [a, b].into_iter().chain(a + 1..b).chain(c + 1..d).collect();
    (rows, cols)
}

/// Source of the four string determinants over a fixed `G`.
pub trait StringDeterminants {
    fn m(&mut self, x: usize, y: usize, z: usize) -> f64;
    fn s(&mut self, p: usize, u: usize, v: usize) -> f64;
    fn x(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64;
    fn y(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64;
}

/// Evaluates each determinant from scratch by LU.
pub struct DirectDeterminants<'a> {
    big_g: &'a DMatrix<f64>,
    scratch: DetScratch,
}

impl<'a> DirectDeterminants<'a> {
    pub fn new(big_g: &'a DMatrix<f64>) -> Self {
        DirectDeterminants {
            big_g,
            scratch: DetScratch::new(),
        }
    }
}

impl StringDeterminants for DirectDeterminants<'_> {
    fn m(&mut self, x: usize, y: usize, z: usize) -> f64 {
        let (r, c) = m_indices(x, y, z);
        self.scratch.minor(self.big_g, &r, &c)
    }

    fn s(&mut self, p: usize, u: usize, v: usize) -> f64 {
        let (r, c) = s_indices(p, u, v);
        self.scratch.minor(self.big_g, &r, &c)
    }

    fn x(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let (r, cc) = x_indices(a, b, c, d);
        self.scratch.minor(self.big_g, &r, &cc)
    }

    fn y(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let (r, cc) = y_indices(a, b, c, d);
        self.scratch.minor(self.big_g, &r, &cc)
    }
}

pub fn matrix_m(big_g: &DMatrix<f64>, x: usize, y: usize, z: usize) -> f64 {
    DirectDeterminants::new(big_g).m(x, y, z)
}

pub fn matrix_s(big_g: &DMatrix<f64>, p: usize, u: usize, v: usize) -> f64 {
    DirectDeterminants::new(big_g).s(p, u, v)
}

pub fn matrix_x(big_g: &DMatrix<f64>, a: usize, b: usize, c: usize, d: usize) -> f64 {
    DirectDeterminants::new(big_g).x(a, b, c, d)
}

pub fn matrix_y(big_g: &DMatrix<f64>, a: usize, b: usize, c: usize, d: usize) -> f64 {
    DirectDeterminants::new(big_g).y(a, b, c, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(m_indices(0, 2, 4), (vec![0, 1, 3], vec![1, 3, 4]));
        assert_eq!(s_indices(0, 2, 5), (vec![0, 2, 3, 4], vec![0, 3, 4, 5]));
        assert_eq!(s_indices(5, 1, 3), (vec![5, 1, 2], vec![5, 2, 3]));
        assert_eq!(
            x_indices(0, 3, 4, 6),
            (vec![3, 1, 2, 5, 6], vec![0, 1, 2, 5, 4])
        );
        assert_eq!(
            y_indices(0, 3, 4, 6),
            (vec![1, 2, 5, 4, 6], vec![0, 3, 1, 2, 5])
        );
        // adjacent pairs leave only the explicit entries
        assert_eq!(x_indices(1, 2, 4, 5), (vec![2, 5], vec![1, 4]));
        assert_eq!(y_indices(1, 2, 4, 5), (vec![4, 5], vec![1, 2]));
    }

    #[test]
    fn sizes() {
        for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 5, 9), (3, 7, 8, 12)] {
            let (r, cc) = x_indices(a, b, c, d);
            assert_eq!(r.len(), (b - a) + (d - c));
            assert_eq!(r.len(), cc.len());
            let (r, cc) = y_indices(a, b, c, d);
            assert_eq!(r.len(), (b - a) + (d - c));
            assert_eq!(r.len(), cc.len());
        }
        let (r, c) = m_indices(2, 5, 9);
        assert_eq!((r.len(), c.len()), (6, 6));
    }

    #[test]
    fn identity_values() {
        let id = DMatrix::<f64>::identity(8, 8);
        assert_eq!(matrix_m(&id, 1, 2, 3), 0.0);
        assert_eq!(matrix_m(&id, 0, 3, 6), 0.0);
        assert_eq!(matrix_s(&id, 0, 2, 4), 0.0);
        assert_eq!(matrix_x(&id, 0, 2, 4, 7), 0.0);
    }

    #[test]
    fn smallest_cases() {
        let g = DMatrix::from_fn(6, 6, |i, j| 1.0 / (1.0 + i as f64 + 2.0 * j as f64));
        assert_eq!(matrix_m(&g, 1, 2, 3), g[(1, 3)]);
        let s = matrix_s(&g, 0, 2, 3);
        let expect = g[(0, 0)] * g[(2, 3)] - g[(0, 3)] * g[(2, 0)];
        assert!((s - expect).abs() < 1e-14);
        let x = matrix_x(&g, 0, 1, 3, 4);
        let expect = g[(1, 0)] * g[(4, 3)] - g[(1, 3)] * g[(4, 0)];
        assert!((x - expect).abs() < 1e-14);
    }
}
