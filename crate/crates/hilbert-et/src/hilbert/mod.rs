//! Hilbert transforms of compactly supported functions: the function shapes,
//! the real-line engine, the periodized circle engine, and the transform-grid
//! scanner used for sup-norm extraction.

mod fourier;
mod line;
mod periodic;

pub use fourier::fourier_transform_hat;
pub use line::{hilbert_line, hilbert_line_pv_quadrature};
pub use line::default_pv_schedule;
pub use periodic::{
    cot_expansion_check, hilbert_periodic, lemma4_rhs, periodic_pv_quadrature, periodic_transform,
    PeriodicSeries, PeriodicValue, PeriodizedFunction,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::gk15;
use crate::special::golden_max;

/// Where a transform lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Line,
    Circle,
}

/// Parity of a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// Kind of integrable singularity a shape carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SingKind {
    Log,
    InvSqrt,
}

/// Continuous piecewise-linear function supported in [-1/2, 1/2].
///
/// Stored as strictly increasing breakpoints with values; the function is
/// zero outside the first and last breakpoint, whose values must be zero so
/// the extension to the line is continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<(f64, f64)>,
}

impl Polyline {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("polyline needs at least two breakpoints"));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::invalid("polyline breakpoints must strictly increase"));
            }
        }
        let (first, last) = (points[0], points[points.len() - 1]);
        if first.0 < -0.5 - 1e-12 || last.0 > 0.5 + 1e-12 {
            return Err(Error::invalid("polyline support must lie in [-1/2, 1/2]"));
        }
        if first.1 != 0.0 || last.1 != 0.0 {
            return Err(Error::invalid(
                "polyline must vanish at its support endpoints (continuity on the line)",
            ));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 || x >= pts[pts.len() - 1].0 {
            return 0.0;
        }
        let i = pts.partition_point(|p| p.0 <= x) - 1;
        let (x0, v0) = pts[i];
        let (x1, v1) = pts[i + 1];
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    /// Segment slopes, one per breakpoint gap.
    pub(crate) fn slopes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    /// Exact integral (trapezoid on the exact geometry).
    pub fn mass(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum()
    }

    pub fn scaled_values(&self, factor: f64) -> Polyline {
        Polyline {
            points: self.points.iter().map(|&(x, v)| (x, v * factor)).collect(),
        }
    }

    /// The polyline of F_δ(x) = F(x/δ)/δ.
    pub fn rescaled(&self, delta: f64) -> Polyline {
        Polyline {
            points: self
                .points
                .iter()
                .map(|&(x, v)| (x * delta, v / delta))
                .collect(),
        }
    }

    fn is_even(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            let (x, v) = self.points[i];
            let (xm, vm) = self.points[n - 1 - i];
            (x + xm).abs() < 1e-12 && (v - vm).abs() < 1e-12
        })
    }

    fn is_nonneg(&self) -> bool {
        self.points.iter().all(|&(_, v)| v >= 0.0)
    }

    fn is_radial_decreasing(&self) -> bool {
        if !self.is_even() {
            return false;
        }
        let mut prev = f64::NEG_INFINITY;
        for &(x, v) in self.points.iter().filter(|&&(x, _)| x >= -1e-15) {
            let _ = x;
            if v > prev + 1e-12 && prev != f64::NEG_INFINITY {
                return false;
            }
            prev = v;
        }
        true
    }
}

/// A compactly supported function on [-1/2, 1/2], as a closed-form tag or a
/// polyline, optionally rescaled-and-mollified.
#[derive(Debug, Clone, PartialEq)]
pub enum CompactFunction {
    /// F▲(x) = 2 max(1 - 2|x|, 0); unit mass.
    Triangle,
    /// (2/π) log((1+√(1-4x²))/(2|x|)); the even extremizer, unit mass,
    /// logarithmic singularity at 0.
    MagicF,
    /// 2x/√(1-4x²); the odd dual certificate, |𝔊| has unit mass.
    MagicG,
    /// (1-4x²)^{-1/2}; the annihilated Chebyshev weight, mass π/2.
    ChebyshevWeight,
    PiecewiseLinear(Polyline),
    /// base_{1-ε} * φ_ε with φ the bump-squared mollifier.
    Mollified {
        base: Box<CompactFunction>,
        epsilon: f64,
    },
}

impl CompactFunction {
    pub fn triangle() -> Self {
        CompactFunction::Triangle
    }

    /// The circle-dominant piecewise-linear example: zero on [0, 1/4],
    /// 64|x|-16 on [1/4, 5/16], (32-64|x|)/3 on [5/16, 1/2]; unit mass.
    pub fn outlier() -> Self {
        let pts = vec![
            (-0.5, 0.0),
            (-5.0 / 16.0, 4.0),
            (-0.25, 0.0),
            (0.25, 0.0),
            (5.0 / 16.0, 4.0),
            (0.5, 0.0),
        ];
        CompactFunction::PiecewiseLinear(Polyline::new(pts).expect("static outlier polyline"))
    }

    pub fn polyline(points: Vec<(f64, f64)>) -> Result<Self> {
        Ok(CompactFunction::PiecewiseLinear(Polyline::new(points)?))
    }

    pub fn mollified(base: CompactFunction, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid("mollifier epsilon must lie in (0, 1)"));
        }
        Ok(CompactFunction::Mollified {
            base: Box::new(base),
            epsilon,
        })
    }

    /// Pointwise value; singular points evaluate to +∞.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CompactFunction::Triangle => 2.0 * (1.0 - 2.0 * x.abs()).max(0.0),
            CompactFunction::MagicF => {
                let ax = x.abs();
                if ax >= 0.5 {
                    0.0
                } else if ax == 0.0 {
                    f64::INFINITY
                } else {
                    let s = (1.0 - 4.0 * x * x).max(0.0).sqrt();
                    (2.0 / std::f64::consts::PI) * ((1.0 + s) / (2.0 * ax)).ln()
                }
            }
            CompactFunction::MagicG => {
                let ax = x.abs();
                if ax >= 0.5 {
                    0.0
                } else {
                    2.0 * x / (1.0 - 4.0 * x * x).sqrt()
                }
            }
            CompactFunction::ChebyshevWeight => {
                let ax = x.abs();
                if ax >= 0.5 {
                    0.0
                } else {
                    1.0 / (1.0 - 4.0 * x * x).sqrt()
                }
            }
            CompactFunction::PiecewiseLinear(p) => p.eval(x),
            CompactFunction::Mollified { base, epsilon } => {
                // (base_{1-ε} * φ_ε)(x), graded toward the base singularity.
                let eps = *epsilon;
                let scale = 1.0 - eps;
                let g = |y: f64| {
                    base.eval((x - y) / scale) / scale * crate::special::mollifier_phi(y / eps) / eps
                };
                let a = -eps / 2.0;
                let b = eps / 2.0;
                let log_sing = matches!(**base, CompactFunction::MagicF) && x.abs() < eps / 2.0 + 1e-15;
                if log_sing {
                    let s = x.clamp(a, b);
                    crate::quad::graded_toward(&g, a, s, false, 50)
                        + crate::quad::graded_toward(&g, s, b, true, 50)
                } else {
                    let n = 12;
                    let mut total = 0.0;
                    for i in 0..n {
                        let pa = a + (b - a) * i as f64 / n as f64;
                        let pb = a + (b - a) * (i + 1) as f64 / n as f64;
                        total += gk15(&g, pa, pb).0;
                    }
                    total
                }
            }
        }
    }

    pub fn parity(&self) -> Parity {
        match self {
            CompactFunction::MagicG => Parity::Odd,
            CompactFunction::PiecewiseLinear(p) => {
                if p.is_even() {
                    Parity::Even
                } else {
                    Parity::None
                }
            }
            CompactFunction::Mollified { base, .. } => base.parity(),
            _ => Parity::Even,
        }
    }

    /// L¹ norm, exact where a closed form exists.
    pub fn l1_norm(&self) -> f64 {
        match self {
            CompactFunction::Triangle | CompactFunction::MagicF | CompactFunction::MagicG => 1.0,
            CompactFunction::ChebyshevWeight => std::f64::consts::FRAC_PI_2,
            CompactFunction::PiecewiseLinear(p) => {
                if p.is_nonneg() {
                    p.mass()
                } else {
                    p.points()
                        .windows(2)
                        .map(|w| {
                            let f = |x: f64| p.eval(x).abs();
                            gk15(&f, w[0].0, w[1].0).0
                        })
                        .sum()
                }
            }
            // Convolution of unit-mass pieces preserves mass and signs.
            CompactFunction::Mollified { base, .. } => base.l1_norm(),
        }
    }

    /// Even, continuous, non-negative, support in [-1/2,1/2], integrable hat.
    pub fn is_class_a(&self) -> bool {
        match self {
            CompactFunction::Triangle => true,
            CompactFunction::MagicF => false, // unbounded at the origin
            CompactFunction::MagicG => false,
            CompactFunction::ChebyshevWeight => false, // unbounded at ±1/2
            CompactFunction::PiecewiseLinear(p) => p.is_even() && p.is_nonneg(),
            CompactFunction::Mollified { base, .. } => base.is_class_a_star() && base.parity() == Parity::Even,
        }
    }

    /// Non-negative and integrable with support in [-1/2, 1/2].
    pub fn is_class_a_star(&self) -> bool {
        match self {
            CompactFunction::Triangle
            | CompactFunction::MagicF
            | CompactFunction::ChebyshevWeight => true,
            CompactFunction::MagicG => false,
            CompactFunction::PiecewiseLinear(p) => p.is_nonneg(),
            CompactFunction::Mollified { base, .. } => base.is_class_a_star(),
        }
    }

    /// Even and non-increasing in |x|.
    pub fn is_radial_decreasing(&self) -> bool {
        match self {
            CompactFunction::Triangle | CompactFunction::MagicF => true,
            CompactFunction::MagicG | CompactFunction::ChebyshevWeight => false,
            CompactFunction::PiecewiseLinear(p) => p.is_radial_decreasing(),
            CompactFunction::Mollified { base, .. } => base.is_radial_decreasing(),
        }
    }

    /// The underlying polyline when the shape is exactly piecewise linear.
    pub(crate) fn as_polyline(&self) -> Option<Polyline> {
        match self {
            CompactFunction::Triangle => {
                Some(Polyline::new(vec![(-0.5, 0.0), (0.0, 2.0), (0.5, 0.0)]).expect("triangle"))
            }
            CompactFunction::PiecewiseLinear(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Integrable singularities of the shape itself.
    pub(crate) fn singularities(&self) -> Vec<(f64, SingKind)> {
        match self {
            CompactFunction::MagicF => vec![(0.0, SingKind::Log)],
            CompactFunction::MagicG | CompactFunction::ChebyshevWeight => {
                vec![(-0.5, SingKind::InvSqrt), (0.5, SingKind::InvSqrt)]
            }
            _ => Vec::new(),
        }
    }

    /// Kink/support locations worth splitting quadrature panels at.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            CompactFunction::PiecewiseLinear(p) => p.points().iter().map(|&(x, _)| x).collect(),
            CompactFunction::Triangle => vec![-0.5, 0.0, 0.5],
            _ => vec![-0.5, 0.0, 0.5],
        }
    }

    /// A scaled unit-mass copy factor: F/‖F‖₁ values are obtained by dividing
    /// transform values by this.
    pub fn normalization(&self) -> f64 {
        self.l1_norm()
    }
}

/// Sampled transform with refined extrema.
#[derive(Debug, Clone, Serialize)]
pub struct TransformGrid {
    pub domain: Domain,
    pub samples: Vec<(f64, f64)>,
    /// max |value|, refined by golden-section ascent around grid maxima.
    pub sup_norm: f64,
    /// Location where the refined |value| maximum is attained.
    pub argmax: f64,
    /// Series cutoff behind the samples, when a multiplier series was used.
    pub truncation_k: Option<usize>,
}

impl TransformGrid {
    /// Scans `eval` over `n` points of `[a, b]`, then refines |value| around
    /// the top five grid maxima and every extra candidate.
    pub(crate) fn scan<F: Fn(f64) -> f64>(
        domain: Domain,
        eval: &F,
        a: f64,
        b: f64,
        n: usize,
        extra_candidates: &[f64],
        truncation_k: Option<usize>,
    ) -> TransformGrid {
        let n = n.max(64);
        let step = (b - a) / n as f64;
        let samples: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let x = a + step * i as f64;
                (x, eval(x))
            })
            .collect();
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&i, &j| {
            samples[j]
                .1
                .abs()
                .partial_cmp(&samples[i].1.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut sup = 0.0f64;
        let mut argmax = samples[0].0;
        let absf = |x: f64| eval(x).abs();
        let mut refine = |x: f64| {
            let lo = (x - step).max(a);
            let hi = (x + step).min(b);
            let (xm, vm) = golden_max(&absf, lo, hi, 1e-10);
            if vm > sup {
                sup = vm;
                argmax = xm;
            }
        };
        for &i in order.iter().take(5) {
            refine(samples[i].0);
        }
        for &x in extra_candidates {
            if x >= a && x <= b {
                refine(x);
            }
        }
        TransformGrid {
            domain,
            samples,
            sup_norm: sup,
            argmax,
            truncation_k,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_shape() {
        let f = CompactFunction::triangle();
        assert_eq!(f.eval(0.0), 2.0);
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(0.25), 1.0);
        assert_eq!(f.l1_norm(), 1.0);
        assert!(f.is_class_a());
        assert!(f.is_radial_decreasing());
    }

    #[test]
    fn outlier_shape() {
        let f = CompactFunction::outlier();
        assert_eq!(f.eval(0.2), 0.0);
        assert!((f.eval(5.0 / 16.0) - 4.0).abs() < 1e-12);
        assert!((f.l1_norm() - 1.0).abs() < 1e-12);
        assert!(f.is_class_a());
        assert!(!f.is_radial_decreasing());
    }

    #[test]
    fn magic_shapes_class_flags() {
        assert!(!CompactFunction::MagicF.is_class_a());
        assert!(CompactFunction::MagicF.is_class_a_star());
        assert!(!CompactFunction::MagicG.is_class_a_star());
        assert!(CompactFunction::ChebyshevWeight.is_class_a_star());
        let moll = CompactFunction::mollified(CompactFunction::MagicF, 0.1).unwrap();
        assert!(moll.is_class_a());
        assert!(moll.is_radial_decreasing());
    }

    #[test]
    fn magic_f_mass_by_quadrature() {
        let f = CompactFunction::MagicF;
        let g = |x: f64| f.eval(x);
        let v = crate::quad::graded_adaptive(&g, 0.0, 0.5, true, 60, 1e-12).unwrap();
        assert!((2.0 * v - 1.0).abs() < 1e-9, "mass = {}", 2.0 * v);
    }

    #[test]
    fn magic_g_mass_by_quadrature() {
        // The inverse-square-root edge limits the graded scheme to the mass
        // of the dropped ulp-scale sliver, about √(32·eps/2) ≈ 2e-7.
        let f = CompactFunction::MagicG;
        let g = |x: f64| f.eval(x).abs();
        let v = crate::quad::graded_adaptive(&g, 0.0, 0.5, false, 60, 1e-12).unwrap();
        assert!((2.0 * v - 1.0).abs() < 1e-6, "mass = {}", 2.0 * v);
    }

    #[test]
    fn mollified_preserves_mass_and_support() {
        let f = CompactFunction::mollified(CompactFunction::MagicF, 0.2).unwrap();
        assert_eq!(f.eval(0.51), 0.0);
        // mass by quadrature over [-1/2, 1/2]
        let g = |x: f64| f.eval(x);
        let mut total = 0.0;
        let n = 64;
        for i in 0..n {
            let a = -0.5 + i as f64 / n as f64;
            let b = -0.5 + (i + 1) as f64 / n as f64;
            total += gk15(&g, a, b).0;
        }
        assert!((total - 1.0).abs() < 1e-6, "mass = {total}");
    }

    #[test]
    fn polyline_validation() {
        assert!(Polyline::new(vec![(-0.5, 0.0), (0.5, 1.0)]).is_err()); // endpoint not zero
        assert!(Polyline::new(vec![(-0.6, 0.0), (0.5, 0.0)]).is_err()); // support too wide
        assert!(Polyline::new(vec![(0.0, 0.0)]).is_err());
        let p = Polyline::new(vec![(-0.4, 0.0), (0.0, 1.0), (0.4, 0.0)]).unwrap();
        assert!((p.mass() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn scan_finds_interior_peak() {
        let g = TransformGrid::scan(
            Domain::Line,
            &|x: f64| (-(x - 0.3).powi(2)).exp(),
            0.0,
            1.0,
            128,
            &[],
            None,
        );
        assert!((g.argmax - 0.3).abs() < 1e-7);
        assert!((g.sup_norm - 1.0).abs() < 1e-10);
        assert!(g.sup_norm >= g.samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max));
    }
}
