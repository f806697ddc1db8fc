//! Height functionals on the unit circle: the mean log⁺ height h(P), the sup
//! height log H(P), the root-modulus product log M(P), and the Jensen
//! integral, plus the Fourier coefficients of ψ(θ) = log|2 sin(πθ)|.
//!
//! Two evaluation routes exist for everything that integrates |P| over the
//! circle: Horner on the coefficients (fine at moderate degree) and the root
//! product (stable at any degree, exact breakpoints for the quadrature). The
//! high-degree families in the verification suite use the root route.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{find_roots, ComplexPolynomial, RootSet};
use crate::quad::{adaptive_split, graded_adaptive};

/// The four height functionals of one polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct HeightReport {
    /// ∫₀¹ log⁺(|P(e^{2πiθ})|/√|a₀|) dθ.
    pub h: f64,
    /// log max_{|z|=1} |P(z)|/√|a₀|.
    #[serde(rename = "H_log")]
    pub h_log: f64,
    /// Σ log max(ρ_j, 1/ρ_j).
    #[serde(rename = "logM")]
    pub log_m: f64,
    /// ∫₀¹ log|P(e^{2πiθ})| dθ, via Jensen's closed form.
    pub jensen: f64,
}

/// log|P(e^{2πiθ})| evaluated some way, together with what is known about
/// where the integrand can be non-smooth.
pub(crate) trait CircleLogAbs {
    fn log_abs(&self, theta: f64) -> f64;
    /// (1/2) log|a₀|.
    fn half_log_a0(&self) -> f64;
    /// Angles forced as quadrature breakpoints (root angles when known).
    fn breakpoints(&self) -> Vec<f64>;
    fn degree(&self) -> usize;
}

impl CircleLogAbs for ComplexPolynomial {
    fn log_abs(&self, theta: f64) -> f64 {
        self.evaluate_on_circle(theta).norm().ln()
    }

    fn half_log_a0(&self) -> f64 {
        0.5 * self.constant_term().norm().ln()
    }

    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn degree(&self) -> usize {
        self.degree()
    }
}

impl CircleLogAbs for RootSet {
    fn log_abs(&self, theta: f64) -> f64 {
        // |e^{2πiθ} - ρ e^{2πiθ_j}|² = (1-ρ)² + 4ρ sin²(π(θ-θ_j)): the
        // half-angle form stays exact arbitrarily close to the root angle,
        // where 1 + ρ² - 2ρcos would cancel to zero.
        let mut acc = 0.0;
        for r in self.roots() {
            let s = (std::f64::consts::PI * (theta - r.theta)).sin();
            let d = 1.0 - r.rho;
            let sq = d * d + 4.0 * r.rho * s * s;
            acc += 0.5 * sq.ln();
        }
        acc
    }

    fn half_log_a0(&self) -> f64 {
        // |a₀| = Π ρ_j for a monic polynomial.
        0.5 * self.roots().iter().map(|r| r.rho.ln()).sum::<f64>()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.angles()
    }

    fn degree(&self) -> usize {
        self.degree()
    }
}

pub(crate) fn height_h_impl<E: CircleLogAbs>(eval: &E, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let shift = eval.half_log_a0();
    let f = |theta: f64| (eval.log_abs(theta) - shift).max(0.0);
    adaptive_split(&f, 0.0, 1.0, &eval.breakpoints(), tolerance, 44)
}

/// h(P) from the coefficients.
///
/// At moderate degree the roots are solved first purely to place quadrature
/// breakpoints at the log⁺ kinks; evaluation stays on Horner.
pub fn height_h(p: &ComplexPolynomial, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if p.degree() <= 64 {
        if let Ok(roots) = find_roots(p, 1e-8) {
            let shift = CircleLogAbs::half_log_a0(p);
            let f = |theta: f64| (CircleLogAbs::log_abs(p, theta) - shift).max(0.0);
            return adaptive_split(&f, 0.0, 1.0, &roots.angles(), tolerance, 44);
        }
    }
    height_h_impl(p, tolerance)
}

/// h(P) from a known root multiset; stable at any degree.
pub fn height_h_from_roots(roots: &RootSet, tolerance: f64) -> Result<f64> {
    height_h_impl(roots, tolerance)
}

fn height_big_h_impl<E: CircleLogAbs>(eval: &E, grid: usize) -> f64 {
    let shift = eval.half_log_a0();
    let n = grid.max(256).max(16 * eval.degree());
    let f = |theta: f64| eval.log_abs(theta) - shift;
    let mut samples: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let theta = i as f64 / n as f64;
            (theta, f(theta))
        })
        .collect();
    samples.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = f64::NEG_INFINITY;
    let step = 1.0 / n as f64;
    for &(theta, _) in samples.iter().take(5) {
        let (_, v) = crate::special::golden_max(&f, theta - step, theta + step, 1e-10);
        best = best.max(v);
    }
    best
}

/// log H(P): grid maximum of log(|P|/√|a₀|), refined by golden-section
/// ascent around the top five grid points.
pub fn height_big_h(p: &ComplexPolynomial, grid: usize) -> f64 {
    height_big_h_impl(p, grid)
}

/// log H from a known root multiset.
pub fn height_big_h_from_roots(roots: &RootSet, grid: usize) -> f64 {
    height_big_h_impl(roots, grid)
}

/// log M(P) = Σ log max(ρ_j, 1/ρ_j); exact, no quadrature.
pub fn height_log_m(roots: &RootSet) -> f64 {
    roots
        .roots()
        .iter()
        .map(|r| r.rho.max(1.0 / r.rho).ln())
        .sum()
}

/// Jensen's formula: ∫₀¹ log|P(e^{2πiθ})| dθ = Σ log max(ρ_j, 1).
pub fn jensen_integral(roots: &RootSet) -> f64 {
    roots.roots().iter().map(|r| r.rho.max(1.0).ln()).sum()
}

/// Direct quadrature of ∫₀¹ log|P| dθ, the oracle against [`jensen_integral`].
///
/// Roots within 1e-3 of the unit circle get a window of width 1e-2 with
/// dyadically graded panels toward the (integrable) logarithmic singularity.
pub fn jensen_quadrature(roots: &RootSet, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let f = |theta: f64| CircleLogAbs::log_abs(roots, theta);
    let mut singular: Vec<f64> = roots
        .roots()
        .iter()
        .filter(|r| (r.rho - 1.0).abs() < 1e-3)
        .map(|r| r.theta)
        .collect();
    singular.sort_by(|a, b| a.partial_cmp(b).unwrap());
    singular.dedup();
    if singular.is_empty() {
        return adaptive_split(&f, 0.0, 1.0, &roots.angles(), tolerance, 44);
    }

    // Window half-width: 5e-3, clamped so neighboring windows stay disjoint.
    let mut half: f64 = 5e-3;
    for w in singular.windows(2) {
        half = half.min(0.4 * (w[1] - w[0]));
    }
    let wrap_gap = 1.0 - (singular.last().unwrap() - singular.first().unwrap());
    half = half.min(0.4 * wrap_gap).max(1e-9);

    let mut total = 0.0;
    let budget = tolerance / (2 * singular.len() + 1) as f64;
    // Singular windows.
    for &s in &singular {
        total += graded_adaptive(&f, s - half, s, false, 52, budget)?;
        total += graded_adaptive(&f, s, s + half, true, 52, budget)?;
    }
    // Smooth remainder: integrate over [s_0 - half + 1 wrap] piecewise.
    let mut cuts: Vec<f64> = Vec::new();
    for &s in &singular {
        cuts.push(s + half);
    }
    for (i, &s) in singular.iter().enumerate() {
        let next_cut = if i + 1 < singular.len() {
            singular[i + 1] - half
        } else {
            singular[0] - half + 1.0
        };
        let start = s + half;
        if next_cut > start {
            let inner: Vec<f64> = roots
                .angles()
                .iter()
                .map(|&a| {
                    // unwrap the angle into [start, next_cut) when possible
                    let mut a = a;
                    while a < start {
                        a += 1.0;
                    }
                    a
                })
                .filter(|&a| a > start && a < next_cut)
                .collect();
            total += adaptive_split(&f, start, next_cut, &inner, budget, 44)?;
        }
    }
    Ok(total)
}

/// The Fourier coefficients of ψ(θ) = log|2 sin(πθ)|: 0 at k = 0 and
/// -1/(2|k|) otherwise.
pub fn psi_fourier(k: i64) -> f64 {
    if k == 0 {
        0.0
    } else {
        -0.5 / k.abs() as f64
    }
}

/// Quadrature cross-check of [`psi_fourier`]: ∫₀¹ log|2 sin πθ| e^{-2πikθ} dθ
/// (real part; the imaginary part vanishes by symmetry).
pub fn psi_fourier_quadrature(k: i64, tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let f = move |theta: f64| {
        (2.0 * (std::f64::consts::PI * theta).sin().abs()).ln()
            * (std::f64::consts::TAU * k as f64 * theta).cos()
    };
    // Work on [-1/2, 1/2] where the only singularity sits at θ = 0.
    let left = graded_adaptive(&f, -0.5, 0.0, false, 52, tolerance / 2.0)?;
    let right = graded_adaptive(&f, 0.0, 0.5, true, 52, tolerance / 2.0)?;
    Ok(left + right)
}

/// Full report for one polynomial: solves for roots when only coefficients
/// are available (logM and Jensen need moduli).
pub fn height_report(p: &ComplexPolynomial, tolerance: f64, grid: usize) -> Result<HeightReport> {
    let roots = find_roots(p, 1e-8)?;
    Ok(HeightReport {
        h: height_h(p, tolerance)?,
        h_log: height_big_h(p, grid),
        log_m: height_log_m(&roots),
        jensen: jensen_integral(&roots),
    })
}

/// Full report from a known root multiset (stable at any degree).
pub fn height_report_from_roots(roots: &RootSet, tolerance: f64, grid: usize) -> Result<HeightReport> {
    Ok(HeightReport {
        h: height_h_from_roots(roots, tolerance)?,
        h_log: height_big_h_from_roots(roots, grid),
        log_m: height_log_m(roots),
        jensen: jensen_integral(roots),
    })
}
