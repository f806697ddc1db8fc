//! Monic complex polynomials, evaluation on the unit circle, simultaneous
//! root extraction (Aberth-Ehrlich), and the Schur projection of roots onto
//! the unit circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Monic polynomial z^N + a_{N-1} z^{N-1} + ... + a_0 with a_0 ≠ 0.
///
/// Only the non-leading coefficients are stored, in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

/// A root in polar form: modulus ρ > 0, normalized angle θ ∈ [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub rho: f64,
    pub theta: f64,
}

/// Multiset of roots; repeated entries carry multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    roots: Vec<Root>,
}

/// Reduces an angle to [0, 1).
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % 1.0;
    if t < 0.0 {
        t += 1.0;
    }
    if t >= 1.0 {
        t = 0.0;
    }
    t
}

/// Circular distance between two normalized angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl ComplexPolynomial {
    /// Builds a monic polynomial from ascending non-leading coefficients.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial must have degree at least 1"));
        }
        if coeffs[0].norm() == 0.0 {
            return Err(Error::invalid("constant coefficient a_0 must be nonzero"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Non-leading coefficients in ascending order (the leading 1 is implicit).
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Horner evaluation of P(z).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation of (P(z), P'(z)).
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// P(e^{2πiθ}).
    pub fn evaluate_on_circle(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, TAU * theta);
        self.eval(z)
    }

    /// Σ |a_k| r^k + r^N, the scale used for backward-error acceptance.
    fn coefficient_scale(&self, r: f64) -> f64 {
        let mut acc = 0.0;
        let mut rk = 1.0;
        for c in &self.coeffs {
            acc += c.norm() * rk;
            rk *= r;
        }
        acc + rk
    }
}

impl RootSet {
    /// Builds a root set; angles are normalized into [0, 1).
    pub fn new(roots: Vec<Root>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::invalid("root set must be nonempty"));
        }
        if roots.iter().any(|r| !(r.rho > 0.0)) {
            return Err(Error::invalid("root moduli must be positive (a_0 ≠ 0)"));
        }
        Ok(Self {
            roots: roots
                .into_iter()
                .map(|r| Root {
                    rho: r.rho,
                    theta: normalize_angle(r.theta),
                })
                .collect(),
        })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(rho, theta)| Root { rho, theta }).collect())
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn angles(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.theta).collect()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .map(|r| Complex64::from_polar(r.rho, TAU * r.theta))
            .collect()
    }

    /// Schur projection: every modulus replaced by 1, angles unchanged.
    ///
    /// The projected polynomial Q satisfies |Q| ≤ |P|/√|a₀| on the unit
    /// circle, so no height functional increases.
    pub fn schur_project(&self) -> RootSet {
        RootSet {
            roots: self
                .roots
                .iter()
                .map(|r| Root {
                    rho: 1.0,
                    theta: r.theta,
                })
                .collect(),
        }
    }

    /// Coefficient expansion ∏ (z - ρ_j e^{2πiθ_j}), monic output.
    pub fn expand(&self) -> ComplexPolynomial {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for alpha in self.to_complex() {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * alpha;
            }
            coeffs = next;
        }
        coeffs.pop(); // implicit leading 1
        ComplexPolynomial { coeffs }
    }
}

/// Convenience: expansion entry point named like the operation.
pub fn expand_from_roots(roots: &RootSet) -> ComplexPolynomial {
    roots.expand()
}

const MAX_SWEEPS: usize = 400;

/// Aberth-Ehrlich simultaneous root iteration.
///
/// Initial guesses sit on a circle of radius max(1, Fujiwara bound) with an
/// asymmetric angular offset. The sweep is Gauss-Seidel (each update sees the
/// freshest neighbors). Iteration runs to correction stagnation, roots are
/// accepted on a scale-free backward-error criterion, and stagnated clusters
/// (multiple roots) are merged to their centroid with multiplicity.
pub fn find_roots(p: &ComplexPolynomial, tolerance: f64) -> Result<RootSet> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = p.degree();
    if n == 1 {
        let alpha = -p.coeffs[0];
        return RootSet::new(vec![Root {
            rho: alpha.norm(),
            theta: normalize_angle(alpha.arg() / TAU),
        }]);
    }

    // Fujiwara-style radius: 2 max_k |a_{N-k}|^{1/k}, floored at 1.
    let mut radius: f64 = 1.0;
    for (idx, c) in p.coeffs.iter().enumerate() {
        let k = (n - idx) as f64;
        let mut m = c.norm();
        if idx == 0 {
            m *= 0.5;
        }
        radius = radius.max(2.0 * m.powf(1.0 / k));
    }

    let mut z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(radius, TAU * (i as f64 + 0.25) / n as f64 + 0.42))
        .collect();
    let mut corr = vec![1.0f64; n];

    let mut best_max_corr = f64::INFINITY;
    let mut stale = 0usize;
    let mut sweeps = 0usize;
    'outer: while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_corr = 0.0f64;
        for i in 0..n {
            let (pv, dpv) = p.eval_with_derivative(z[i]);
            if !pv.is_finite() || !dpv.is_finite() {
                break 'outer;
            }
            if pv.norm() == 0.0 {
                corr[i] = 0.0;
                continue;
            }
            let newton = if dpv.norm() > 0.0 {
                pv / dpv
            } else {
                // Derivative vanished (perfectly centered multiple root);
                // nudge off the critical point.
                z[i] += Complex64::new(1e-8, 1e-8);
                corr[i] = 2e-8;
                continue;
            };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let w = if denom.norm() > 1e-290 { newton / denom } else { newton };
            z[i] -= w;
            if !z[i].is_finite() {
                break 'outer;
            }
            corr[i] = w.norm();
            max_corr = max_corr.max(corr[i]);
        }
        let floor = 1e-15 * (1.0 + z.iter().map(|v| v.norm()).fold(0.0, f64::max));
        if max_corr < floor {
            break;
        }
        if max_corr < 0.9 * best_max_corr {
            best_max_corr = max_corr;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 12 {
                break; // stagnation: multiple-root cluster at attainable accuracy
            }
        }
    }

    // Scale-free residual acceptance.
    let machine_floor = 64.0 * n as f64 * f64::EPSILON;
    let accept = tolerance.max(machine_floor);
    let mut worst = 0.0f64;
    for &zi in &z {
        if !zi.is_finite() {
            worst = f64::INFINITY;
            break;
        }
        let scale = p.coefficient_scale(zi.norm()).max(f64::MIN_POSITIVE);
        let resid = p.eval(zi).norm() / scale;
        if !resid.is_finite() {
            worst = f64::INFINITY;
            break;
        }
        worst = worst.max(resid);
    }
    if worst > accept {
        return Err(Error::SolverFailure {
            iterations: sweeps,
            residual: worst,
        });
    }

    // Cluster stagnated roots: radius max(1e-6, 10·(corr_i + corr_j)).
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let tau = 1e-6f64.max(10.0 * (corr[i].min(1.0) + corr[j].min(1.0)));
            if (z[i] - z[j]).norm() <= tau {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::new(0.0, 0.0), 0); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sums[r].0 += z[i];
        sums[r].1 += 1;
    }
    let mut roots = Vec::with_capacity(n);
    for (sum, count) in sums {
        if count == 0 {
            continue;
        }
        let center = sum / count as f64;
        let root = Root {
            rho: center.norm(),
            theta: normalize_angle(center.arg() / TAU),
        };
        for _ in 0..count {
            roots.push(root);
        }
    }
    RootSet::new(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(reals: &[f64]) -> ComplexPolynomial {
        ComplexPolynomial::from_real(reals).unwrap()
    }

    #[test]
    fn constructor_rejects_zero_constant_term() {
        assert!(ComplexPolynomial::from_real(&[0.0, 1.0]).is_err());
        assert!(ComplexPolynomial::from_real(&[]).is_err());
    }

    #[test]
    fn circle_evaluation_trivia() {
        // P = z - 1
        let p = poly(&[-1.0]);
        assert!(p.evaluate_on_circle(0.0).norm() < 1e-15);
        let v = p.evaluate_on_circle(0.5);
        assert!((v - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
        // P = z² + 1 at θ = 1/4: i² + 1 = 0
        let q = poly(&[1.0, 0.0]);
        assert!(q.evaluate_on_circle(0.25).norm() < 1e-14);
    }

    #[test]
    fn roots_of_unity_are_recovered() {
        let n = 8;
        let mut coeffs = vec![0.0; n];
        coeffs[0] = -1.0;
        let p = poly(&coeffs);
        let roots = find_roots(&p, 1e-12).unwrap();
        let mut angles = roots.angles();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (j, &theta) in angles.iter().enumerate() {
            assert!(angle_distance(theta, j as f64 / n as f64) < 1e-10, "theta = {theta}");
            assert!((roots.roots()[j].rho - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn repeated_linear_factor_clusters_to_full_multiplicity() {
        // The attainable accuracy for an N-fold root from f64 coefficients is
        // ~(eps·scale)^{1/N}; the cluster centroid does noticeably better.
        for n in [2usize, 3, 5, 8] {
            let roots = RootSet::from_pairs(&vec![(1.0, 0.0); n]).unwrap();
            let p = roots.expand();
            let found = find_roots(&p, 1e-10).unwrap();
            assert_eq!(found.degree(), n);
            let first = found.roots()[0];
            for r in found.roots() {
                assert_eq!(r.rho, first.rho, "cluster must collapse to one center");
                assert_eq!(r.theta, first.theta);
            }
            assert!((first.rho - 1.0).abs() < 5e-3, "n={n}: rho = {}", first.rho);
            assert!(
                angle_distance(first.theta, 0.0) < 5e-3,
                "n={n}: theta = {}",
                first.theta
            );
        }
    }

    #[test]
    fn planted_degree_12_roots_are_found_to_1e8() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let planted: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                (
                    rng.gen_range(0.5..2.0),
                    (i as f64 + rng.gen_range(0.1..0.9)) / 12.0,
                )
            })
            .collect();
        let roots = RootSet::from_pairs(&planted).unwrap();
        let p = roots.expand();
        let found = find_roots(&p, 1e-12).unwrap();
        let targets = roots.to_complex();
        for f in found.to_complex() {
            let d = targets.iter().map(|t| (t - f).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-8, "root {f} off by {d}");
        }
    }

    #[test]
    fn real_coefficients_give_conjugate_closed_angles() {
        let p = poly(&[2.0, -1.5, 0.75, 0.3, -0.2]);
        let roots = find_roots(&p, 1e-12).unwrap();
        for r in roots.roots() {
            let mirrored = normalize_angle(1.0 - r.theta);
            let ok = roots.roots().iter().any(|s| {
                (s.rho - r.rho).abs() < 1e-8 && angle_distance(s.theta, mirrored) < 1e-8
            });
            assert!(ok, "no conjugate partner for {r:?}");
        }
    }

    #[test]
    fn expand_then_solve_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [4usize, 9, 20] {
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|i| {
                    (
                        rng.gen_range(0.6..1.7),
                        (i as f64 + rng.gen_range(0.2..0.8)) / n as f64,
                    )
                })
                .collect();
            let roots = RootSet::from_pairs(&pairs).unwrap();
            let found = find_roots(&roots.expand(), 1e-12).unwrap();
            let targets = roots.to_complex();
            for f in found.to_complex() {
                let d = targets.iter().map(|t| (t - f).norm()).fold(f64::INFINITY, f64::min);
                assert!(d < 1e-8, "n={n}: root {f} off by {d}");
            }
        }
    }

    #[test]
    fn schur_projection_is_idempotent_and_unit_modulus() {
        let roots = RootSet::from_pairs(&[(2.0, 0.1), (0.5, 0.7)]).unwrap();
        let q = roots.schur_project();
        assert!(q.roots().iter().all(|r| r.rho == 1.0));
        assert_eq!(q.roots()[0].theta, 0.1);
        assert_eq!(q.roots()[1].theta, 0.7);
        assert_eq!(q.schur_project(), q);
    }

    #[test]
    fn expansion_trivia() {
        let roots = RootSet::from_pairs(&[(1.0, 0.0)]).unwrap();
        let p = roots.expand();
        assert_eq!(p.degree(), 1);
        assert!((p.coefficients()[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let unity = RootSet::from_pairs(&[(1.0, 0.0), (1.0, 0.25), (1.0, 0.5), (1.0, 0.75)]).unwrap();
        let q = unity.expand();
        assert!((q.coefficients()[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        for k in 1..4 {
            assert!(q.coefficients()[k].norm() < 1e-14);
        }
    }

    #[test]
    fn solver_failure_reports_residual() {
        // Coefficients at the overflow edge drive the iteration non-finite;
        // the solver must report a failure instead of returning garbage.
        let p = poly(&[1e300, 1e300]);
        match find_roots(&p, 1e-10) {
            Err(Error::SolverFailure { residual, .. }) => assert!(residual > 1.0),
            other => panic!("expected solver failure, got {other:?}"),
        }
    }
}
