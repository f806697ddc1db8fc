//! Seeded polynomial family generators used by the CLI and the verification
//! suite. Each family carries its root data alongside the expanded
//! coefficients; for clustered high-degree families (e.g. (z-1)^100) the
//! roots are the only numerically faithful representation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polynomial::{ComplexPolynomial, Root, RootSet};

/// Built-in polynomial families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// z^N - 1.
    Cyclotomic,
    /// (z - 1)^N.
    PowerOfLinear,
    /// Roots uniform on the unit circle.
    RandomUnit,
    /// Roots with moduli uniform in [1/2, 2] and uniform angles.
    RandomDisk,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclotomic" => Ok(FamilyKind::Cyclotomic),
            "power-of-linear" => Ok(FamilyKind::PowerOfLinear),
            "random-unit" => Ok(FamilyKind::RandomUnit),
            "random-disk" => Ok(FamilyKind::RandomDisk),
            other => Err(Error::invalid(format!(
                "unknown family '{other}' (expected cyclotomic|power-of-linear|random-unit|random-disk)"
            ))),
        }
    }
}

/// A generated polynomial with its construction-time root data.
#[derive(Debug, Clone)]
pub struct GeneratedPolynomial {
    pub polynomial: ComplexPolynomial,
    pub roots: RootSet,
}

/// Deterministic per (kind, n, seed).
pub fn generate_family(kind: FamilyKind, n: usize, seed: u64) -> Result<GeneratedPolynomial> {
    if n == 0 {
        return Err(Error::invalid("family degree must be at least 1"));
    }
    let roots = match kind {
        FamilyKind::Cyclotomic => RootSet::new(
            (0..n)
                .map(|j| Root {
                    rho: 1.0,
                    theta: j as f64 / n as f64,
                })
                .collect(),
        )?,
        FamilyKind::PowerOfLinear => RootSet::new(vec![Root { rho: 1.0, theta: 0.0 }; n])?,
        FamilyKind::RandomUnit => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            RootSet::new(
                (0..n)
                    .map(|_| Root {
                        rho: 1.0,
                        theta: rng.gen::<f64>(),
                    })
                    .collect(),
            )?
        }
        FamilyKind::RandomDisk => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            RootSet::new(
                (0..n)
                    .map(|_| Root {
                        rho: rng.gen_range(0.5..2.0),
                        theta: rng.gen::<f64>(),
                    })
                    .collect(),
            )?
        }
    };
    let polynomial = match kind {
        // Exact coefficients where they are known in closed form.
        FamilyKind::Cyclotomic => {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
            coeffs[0] = Complex64::new(-1.0, 0.0);
            ComplexPolynomial::new(coeffs)?
        }
        FamilyKind::PowerOfLinear => {
            // (z-1)^N: a_k = C(N,k)(-1)^{N-k}, built by the Pascal recurrence.
            let mut coeffs = vec![0.0f64; n];
            let mut binom = 1.0f64; // C(N,0)
            for (k, c) in coeffs.iter_mut().enumerate() {
                let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
                *c = sign * binom;
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            ComplexPolynomial::from_real(&coeffs)?
        }
        _ => roots.expand(),
    };
    Ok(GeneratedPolynomial { polynomial, roots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::find_roots;

    #[test]
    fn power_of_linear_coefficients() {
        let g = generate_family(FamilyKind::PowerOfLinear, 3, 0).unwrap();
        let c = g.polynomial.coefficients();
        // (z-1)^3 = z³ - 3z² + 3z - 1 → ascending (-1, 3, -3)
        assert_eq!(c[0].re, -1.0);
        assert_eq!(c[1].re, 3.0);
        assert_eq!(c[2].re, -3.0);
    }

    #[test]
    fn cyclotomic_coefficients() {
        let g = generate_family(FamilyKind::Cyclotomic, 2, 0).unwrap();
        assert_eq!(g.polynomial.coefficients()[0].re, -1.0);
        assert_eq!(g.polynomial.coefficients()[1].re, 0.0);
    }

    #[test]
    fn random_families_are_seed_deterministic() {
        let a = generate_family(FamilyKind::RandomUnit, 10, 42).unwrap();
        let b = generate_family(FamilyKind::RandomUnit, 10, 42).unwrap();
        assert_eq!(a.polynomial, b.polynomial);
        let c = generate_family(FamilyKind::RandomUnit, 10, 43).unwrap();
        assert_ne!(a.polynomial, c.polynomial);
    }

    #[test]
    fn random_disk_moduli_in_range() {
        let g = generate_family(FamilyKind::RandomDisk, 30, 7).unwrap();
        assert!(g.roots.roots().iter().all(|r| r.rho >= 0.5 && r.rho < 2.0));
    }

    #[test]
    fn generated_roots_match_expanded_coefficients() {
        let g = generate_family(FamilyKind::RandomUnit, 12, 11).unwrap();
        let solved = find_roots(&g.polynomial, 1e-10).unwrap();
        let targets = g.roots.to_complex();
        for z in solved.to_complex() {
            let d = targets.iter().map(|t| (t - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-8, "root {z} off by {d}");
        }
    }
}
