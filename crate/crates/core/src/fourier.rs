use std::f64::consts::PI;

use num_complex::Complex64;

/// `e^{i 2π k / L}` for `k = 0..L`, indexed modulo `L` so that every phase
/// used in a lattice sum is evaluated from an exactly reduced integer.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    roots: Vec<Complex64>,
}

impl PhaseTable {
    pub fn new(l: usize) -> Self {
        let roots = (0..l)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / l as f64))
            .collect();
        PhaseTable { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `e^{i 2π q x / L}` for a signed displacement `x`.
    #[inline]
    pub fn phase(&self, q: usize, x: isize) -> Complex64 {
        let l = self.roots.len() as isize;
        let k = ((q as isize % l) * (x % l)).rem_euclid(l);
        self.roots[k as usize]
    }

    /// Row-major `L×L` matrix `W[q][n] = e^{i 2π q n / L}`.
    pub fn matrix(&self) -> Vec<Complex64> {
        let l = self.roots.len();
        let mut w = Vec::with_capacity(l * l);
        for q in 0..l {
            for n in 0..l {
                w.push(self.roots[(q * n) % l]);
            }
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_wrap() {
        let t = PhaseTable::new(6);
        assert!((t.phase(1, 3) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(t.phase(2, -1), t.phase(2, 5));
        assert_eq!(t.phase(7, 1), t.phase(1, 1));
        assert_eq!(t.phase(0, 4), Complex64::new(1.0, 0.0));
    }
}
