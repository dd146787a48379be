//! Small dense determinants for the correlation kernels.

use nalgebra::DMatrix;

/// Pivots below this magnitude make the determinant exactly zero.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Determinant of a row-major `k×k` matrix stored in `a`, destroyed in place.
///
/// LU factorisation with partial pivoting. `k = 0` gives 1.
pub fn det_in_place(a: &mut [f64], k: usize) -> f64 {
    debug_assert_eq!(a.len(), k * k);
    let mut det = 1.0;
    for col in 0..k {
        let mut pivot_row = col;
        let mut pivot_abs = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > pivot_abs {
                pivot_abs = v;
                pivot_row = r;
            }
        }
        if pivot_abs < PIVOT_FLOOR {
            return 0.0;
        }
        if pivot_row != col {
            for c in col..k {
                a.swap(col * k + c, pivot_row * k + c);
            }
            det = -det;
        }
        let pivot = a[col * k + col];
        det *= pivot;
        for r in col + 1..k {
            let factor = a[r * k + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r * k);
            let src = &top[col * k + col + 1..col * k + k];
            let dst = &mut bottom[col + 1..k];
            for (d, s) in dst.iter_mut().zip(src) {
                *d -= factor * s;
            }
        }
    }
    det
}

/// Reusable buffer for determinants of gathered submatrices.
#[derive(Debug, Default, Clone)]
pub struct DetScratch {
    buf: Vec<f64>,
}

impl DetScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// `det [ m[rows[r], cols[c]] ]` with rows and columns in the given order.
    pub fn minor(&mut self, m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
        assert_eq!(rows.len(), cols.len(), "minor must be square");
        let k = rows.len();
        self.buf.clear();
        self.buf.reserve(k * k);
        for &r in rows {
            for &c in cols {
                self.buf.push(m[(r, c)]);
            }
        }
        det_in_place(&mut self.buf, k)
    }
}

/// One-shot convenience wrapper around [`DetScratch::minor`].
pub fn minor_det(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    DetScratch::new().minor(m, rows, cols)
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Leibniz expansion; exponential but independent of the LU path.
    fn leibniz(m: &DMatrix<f64>) -> f64 {
        fn perms(k: usize) -> Vec<(Vec<usize>, f64)> {
            if k == 0 {
                return vec![(vec![], 1.0)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    // inserting at `pos` moves the new largest element past len-pos others
                    let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
                    out.push((q, sign));
                }
            }
            out
        }
        let k = m.nrows();
        perms(k)
            .into_iter()
            .map(|(p, s)| s * (0..k).map(|i| m[(i, p[i])]).product::<f64>())
            .sum()
    }

    #[test]
    fn empty_and_small() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(minor_det(&m, &[], &[]), 1.0);
        assert!((minor_det(&m, &[0, 1], &[0, 1]) + 2.0).abs() < 1e-15);
        // swapping the column order flips the sign
        assert!((minor_det(&m, &[0, 1], &[1, 0]) - 2.0).abs() < 1e-15);
        assert_eq!(minor_det(&m, &[1], &[0]), 3.0);
    }

    #[test]
    fn singular_is_zero() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(minor_det(&m, &[0, 1], &[0, 1]).abs() < 1e-15);
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(minor_det(&z, &[0, 1, 2], &[0, 1, 2]), 0.0);
    }

    proptest! {
        #[test]
        fn lu_matches_leibniz(k in 1usize..6, entries in proptest::collection::vec(-2.0f64..2.0, 36)) {
            let m = DMatrix::from_fn(k, k, |i, j| entries[i * 6 + j]);
            let idx: Vec<usize> = (0..k).collect();
            let lu = minor_det(&m, &idx, &idx);
            let exact = leibniz(&m);
            prop_assert!((lu - exact).abs() <= 1e-10 * (1.0 + exact.abs()));
        }
    }
}
