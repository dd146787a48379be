//! Lattice scenarios: size, filling, boundary condition and external potential.
//!
//! Energies are in units of the hopping `J`; the potential parameters
//! (`omega`, `lambda`) are dimensionless ratios to `J`.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DENSITY_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

/// How momentum-space quantities are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Normalization {
    /// `n_q` divided by `L`, `Δ` by `L²`.
    #[default]
    #[serde(rename = "per-site")]
    PerSite,
    /// Bare lattice sums.
    #[serde(rename = "raw")]
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Potential {
    Flat,
    /// `V_j = omega (j - c)²` centred on `c = (L-1)/2`.
    Harmonic {
        omega: f64,
    },
    /// `V_j = 2 lambda cos(2π (p/q) j + phi)`.
    Quasiperiodic {
        lambda: f64,
        gamma_num: u64,
        gamma_den: u64,
        phi: f64,
    },
}

impl Potential {
    pub fn is_flat(&self) -> bool {
        match *self {
            Potential::Flat => true,
            Potential::Harmonic { omega } => omega == 0.0,
            Potential::Quasiperiodic { lambda, .. } => lambda == 0.0,
        }
    }
}

fn default_hopping() -> f64 {
    1.0
}

fn default_threshold() -> f64 {
    DEFAULT_DENSITY_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeScenario {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    #[serde(rename = "J", default = "default_hopping")]
    pub hopping: f64,
    pub bc: Boundary,
    pub potential: Potential,
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default)]
    pub trap_renorm: bool,
    #[serde(default = "default_threshold")]
    pub density_threshold: f64,
}

impl LatticeScenario {
    pub fn new(sites: usize, particles: usize, bc: Boundary, potential: Potential) -> Self {
        LatticeScenario {
            sites,
            particles,
            hopping: 1.0,
            bc,
            potential,
            normalization: Normalization::PerSite,
            trap_renorm: false,
            density_threshold: DEFAULT_DENSITY_THRESHOLD,
        }
    }

    pub fn flat(sites: usize, particles: usize, bc: Boundary) -> Self {
        Self::new(sites, particles, bc, Potential::Flat)
    }

    pub fn with_trap_renorm(mut self, on: bool) -> Self {
        self.trap_renorm = on;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn filling(&self) -> f64 {
        self.particles as f64 / self.sites as f64
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    /// Checks every invariant. On success returns non-fatal warnings.
    pub fn validate(&self) -> std::result::Result<Vec<String>, Vec<Error>> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        let l = self.sites;

        if l < 2 {
            errors.push(Error::BadScenario(format!("L = {l} must be at least 2")));
        }
        if self.particles < 1 || self.particles > l {
            errors.push(Error::BadFilling {
                n: self.particles,
                l,
            });
        }
        if !(self.hopping > 0.0 && self.hopping.is_finite()) {
            errors.push(Error::BadScenario(format!(
                "J = {} must be positive",
                self.hopping
            )));
        }
        if !(self.density_threshold > 0.0 && self.density_threshold < 1.0) {
            errors.push(Error::BadScenario(format!(
                "density_threshold = {} must lie in (0, 1)",
                self.density_threshold
            )));
        }
        match self.potential {
            Potential::Flat => {}
            Potential::Harmonic { omega } => {
                if !(omega >= 0.0 && omega.is_finite()) {
                    errors.push(Error::BadScenario(format!("omega = {omega} must be >= 0")));
                }
            }
            Potential::Quasiperiodic {
                lambda,
                gamma_num,
                gamma_den,
                phi,
            } => {
                if !(lambda >= 0.0 && lambda.is_finite()) {
                    errors.push(Error::BadScenario(format!(
                        "lambda = {lambda} must be >= 0"
                    )));
                }
                if !phi.is_finite() {
                    errors.push(Error::BadScenario("phi must be finite".into()));
                }
                if gamma_num == 0 || gamma_num >= gamma_den {
                    errors.push(Error::BadGamma(format!(
                        "gamma = {gamma_num}/{gamma_den} must lie strictly between 0 and 1"
                    )));
                } else if gcd(gamma_num, gamma_den) != 1 {
                    errors.push(Error::BadGamma(format!(
                        "gamma = {gamma_num}/{gamma_den} is not in lowest terms"
                    )));
                } else if self.bc == Boundary::Periodic && !(l as u64).is_multiple_of(gamma_den) {
                    warnings.push(format!(
                        "periodic ring of {l} sites is incommensurate with gamma = \
                         {gamma_num}/{gamma_den}; the potential has a seam at the boundary"
                    ));
                }
            }
        }

        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(errors)
        }
    }

    /// Like [`validate`](Self::validate) but reports only the first error.
    pub fn check(&self) -> Result<Vec<String>> {
        self.validate().map_err(|mut errs| errs.swap_remove(0))
    }

    /// External potential per site, in units of `J`.
    pub fn potential_values(&self) -> Vec<f64> {
        let l = self.sites;
        match self.potential {
            Potential::Flat => vec![0.0; l],
            Potential::Harmonic { omega } => {
                let centre = (l as f64 - 1.0) / 2.0;
                (0..l)
                    .map(|j| {
                        let x = j as f64 - centre;
                        omega * x * x
                    })
                    .collect()
            }
            Potential::Quasiperiodic {
                lambda,
                gamma_num,
                gamma_den,
                phi,
            } => (0..l)
                .map(|j| {
                    // reduce the phase index exactly before going to floating point
                    let k = (gamma_num * j as u64) % gamma_den;
                    2.0 * lambda * (2.0 * PI * k as f64 / gamma_den as f64 + phi).cos()
                })
                .collect(),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A ratio of consecutive Fibonacci numbers `F_n / F_{n+1}`, with
/// `F_0 = F_1 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibonacciApproximant {
    pub index: usize,
    pub numerator: u64,
    pub denominator: u64,
}

impl FibonacciApproximant {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// Fibonacci numbers `F_0..=F_n` with `F_n` the last one not exceeding `limit`.
pub fn fibonacci_up_to(limit: u64) -> Vec<u64> {
    let mut fib = vec![1u64, 1];
    loop {
        let next = fib[fib.len() - 1] + fib[fib.len() - 2];
        if next > limit {
            break;
        }
        fib.push(next);
    }
    fib
}

/// Largest approximant `F_n / F_{n+1}` with `F_{n+1} <= target_denominator`.
pub fn fibonacci_approximant(target_denominator: u64) -> Result<FibonacciApproximant> {
    if target_denominator < 2 {
        return Err(Error::BadGamma(format!(
            "target denominator {target_denominator} must be at least 2"
        )));
    }
    let fib = fibonacci_up_to(target_denominator);
    let top = fib.len() - 1;
    Ok(FibonacciApproximant {
        index: top - 1,
        numerator: fib[top - 1],
        denominator: fib[top],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quasi(l: usize, n: usize, num: u64, den: u64) -> LatticeScenario {
        LatticeScenario::new(
            l,
            n,
            Boundary::Periodic,
            Potential::Quasiperiodic {
                lambda: 1.0,
                gamma_num: num,
                gamma_den: den,
                phi: PI / 4.0,
            },
        )
    }

    #[test]
    fn flat_potential_is_zero() {
        let s = LatticeScenario::flat(3, 1, Boundary::Open);
        assert_eq!(s.potential_values(), vec![0.0; 3]);
    }

    #[test]
    fn harmonic_is_centred() {
        let s = LatticeScenario::new(
            55,
            19,
            Boundary::Periodic,
            Potential::Harmonic { omega: 0.17 },
        );
        let v = s.potential_values();
        assert_eq!(v[27], 0.0);
        assert!((v[0] - 0.17 * 27.0 * 27.0).abs() < 1e-12);
        for j in 0..55 {
            assert_eq!(v[j], v[54 - j]);
        }
    }

    #[test]
    fn quasiperiodic_at_origin() {
        let v = quasi(89, 25, 55, 89).potential_values();
        assert!((v[0] - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn fibonacci_examples() {
        let f = fibonacci_approximant(89).unwrap();
        assert_eq!((f.numerator, f.denominator), (55, 89));
        let f = fibonacci_approximant(34).unwrap();
        assert_eq!((f.numerator, f.denominator), (21, 34));
        let f = fibonacci_approximant(2).unwrap();
        assert_eq!((f.numerator, f.denominator), (1, 2));
        // 90 is between F_10 = 89 and F_11 = 144
        assert_eq!(fibonacci_approximant(90).unwrap().denominator, 89);
        assert!(fibonacci_approximant(1).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(LatticeScenario::flat(55, 19, Boundary::Periodic)
            .validate()
            .is_ok());
        let errs = LatticeScenario::flat(10, 11, Boundary::Periodic)
            .validate()
            .unwrap_err();
        assert!(matches!(errs[0], Error::BadFilling { n: 11, l: 10 }));
        assert!(quasi(89, 25, 55, 89).validate().unwrap().is_empty());
    }

    #[test]
    fn bad_gamma_rejected_and_seam_warned() {
        assert!(matches!(
            quasi(10, 3, 4, 6).validate().unwrap_err()[0],
            Error::BadGamma(_)
        ));
        assert!(matches!(
            quasi(10, 3, 7, 5).validate().unwrap_err()[0],
            Error::BadGamma(_)
        ));
        let warnings = quasi(6, 3, 3, 5).validate().unwrap();
        assert_eq!(warnings.len(), 1);
        let mut open = quasi(6, 3, 3, 5);
        open.bc = Boundary::Open;
        assert!(open.validate().unwrap().is_empty());
    }

    #[test]
    fn collects_every_error() {
        let mut s = LatticeScenario::flat(10, 0, Boundary::Open);
        s.hopping = -1.0;
        s.density_threshold = 2.0;
        assert_eq!(s.validate().unwrap_err().len(), 3);
    }

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let text = r#"{"L":89,"N":25,"J":1.0,"bc":"periodic",
            "potential":{"type":"quasiperiodic","lambda":0.5,"gamma_num":55,"gamma_den":89,"phi":0.7853981633974483},
            "normalization":"per-site","trap_renorm":false,"density_threshold":0.0001}"#;
        let s = LatticeScenario::from_json_str(text).unwrap();
        assert_eq!(s.sites, 89);
        assert_eq!(
            LatticeScenario::from_json_str(&serde_json::to_string(&s).unwrap()).unwrap(),
            s
        );

        let minimal = r#"{"L":4,"N":2,"bc":"open","potential":{"type":"harmonic","omega":0.1}}"#;
        let s = LatticeScenario::from_json_str(minimal).unwrap();
        assert_eq!(s.hopping, 1.0);
        assert_eq!(s.normalization, Normalization::PerSite);
        assert_eq!(s.density_threshold, DEFAULT_DENSITY_THRESHOLD);

        let extra = r#"{"L":4,"N":2,"bc":"open","potential":{"type":"flat"},"seed":3}"#;
        assert!(LatticeScenario::from_json_str(extra).is_err());
        let extra_pot =
            r#"{"L":4,"N":2,"bc":"open","potential":{"type":"harmonic","omega":0.1,"x":1}}"#;
        assert!(LatticeScenario::from_json_str(extra_pot).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn fibonacci_recurrence(target in 2u64..1_000_000) {
                let f = fibonacci_approximant(target).unwrap();
                prop_assert!(f.denominator <= target);
                prop_assert_eq!(gcd(f.numerator, f.denominator), 1);
                let fib = fibonacci_up_to(target);
                for w in fib.windows(3) {
                    prop_assert_eq!(w[2], w[0] + w[1]);
                }
                prop_assert!(f.denominator + f.numerator > target);
            }

            #[test]
            fn harmonic_reflection(half in 1usize..40, omega in 0.0f64..1.0) {
                let l = 2 * half + 1;
                let s = LatticeScenario::new(l, 1, Boundary::Open, Potential::Harmonic { omega });
                let v = s.potential_values();
                for j in 0..l {
                    prop_assert_eq!(v[j], v[l - 1 - j]);
                }
                prop_assert_eq!(v.clone(), s.potential_values());
            }
        }
    }
}
