//! The periodic Hilbert transform H(f)(θ) = p.v. ∫ f(θ-α) cot(πα) dα of
//! periodized rescalings f_δ(θ) = Σ_k F_δ(θ+k), via three routes:
//!
//! * the Fourier multiplier series Σ -i·sgn(k) F̂(δk) e^{2πikθ} (the
//!   general engine, with a reported truncation tail bound);
//! * exact Clausen-function evaluation for piecewise-linear shapes;
//! * symmetric-window cotangent-kernel quadrature (the oracle).
//!
//! Plus the rescaling identity that ties δ·H(f_δ)(θ) to H(F)(θ/δ) through a
//! correction series, and the partial-fraction expansion of cot.

use std::f64::consts::{PI, TAU};

use super::fourier::{hat_closed, MagicFHatWalker};
use super::line::hilbert_line;
use super::{CompactFunction, Polyline};
use crate::error::{Error, Result};
use crate::quad::{adaptive_split, graded_adaptive, richardson};
use crate::special::{log_two_sin_antiderivative, mollifier_phi_hat, zeta2_tail, zeta4_tail};

/// f_δ(θ) = Σ_k F_δ(θ+k) with F_δ(x) = F(x/δ)/δ; δ ∈ (0, 1] keeps the
/// translates disjoint, so on the fundamental domain f_δ is just F_δ.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodizedFunction {
    pub base: CompactFunction,
    pub delta: f64,
}

impl PeriodizedFunction {
    pub fn new(base: CompactFunction, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::invalid("delta must lie in (0, 1]"));
        }
        Ok(Self { base, delta })
    }

    /// Value at a circle point (any real representative).
    pub fn eval(&self, theta: f64) -> f64 {
        let mut u = theta.rem_euclid(1.0);
        if u >= 0.5 {
            u -= 1.0;
        }
        self.base.eval(u / self.delta) / self.delta
    }

    /// The circle polyline of f_δ when the base is piecewise linear.
    fn circle_polyline(&self) -> Option<Polyline> {
        self.base.as_polyline().map(|p| p.rescaled(self.delta))
    }
}

/// A periodic-transform value with the truncation tail bound that backs it.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicValue {
    pub value: f64,
    /// Upper bound (or estimate, see [`PeriodicSeries`]) for the dropped tail.
    pub tail_bound: f64,
}

/// The truncated multiplier series of one periodized function, built once and
/// evaluated at many angles.
pub struct PeriodicSeries {
    coeffs: Vec<num_complex::Complex64>,
    tail_bound: f64,
}

impl PeriodicSeries {
    /// Computes F̂(δk) for k = 1..=K, stopping early once coefficients die
    /// below 1e-18 of their peak for 64 consecutive k.
    ///
    /// Tail accounting: piecewise-linear shapes get the rigorous envelope
    /// Σ|Δslope|/(4π²(δk)²); mollified shapes that die early get the
    /// threshold-level estimate; a mollified series still alive at K gets a
    /// √k-exponential continuation fit; shapes with non-summable coefficient
    /// envelopes (bare MagicF/MagicG/Chebyshev) report an infinite bound.
    pub fn build(pf: &PeriodizedFunction, k_max: usize) -> Result<Self> {
        if k_max < 64 {
            return Err(Error::invalid("multiplier series needs K >= 64"));
        }
        let delta = pf.delta;
        let mut walker = MagicFHatWalker::new();
        let hat = |walker: &mut MagicFHatWalker, t: f64| -> num_complex::Complex64 {
            match &pf.base {
                CompactFunction::MagicF => num_complex::Complex64::new(walker.hat(t), 0.0),
                CompactFunction::Mollified { base, epsilon }
                    if matches!(**base, CompactFunction::MagicF) =>
                {
                    num_complex::Complex64::new(
                        walker.hat((1.0 - epsilon) * t) * mollifier_phi_hat(epsilon * t),
                        0.0,
                    )
                }
                other => hat_closed(other, t),
            }
        };

        let mut coeffs = Vec::with_capacity(k_max.min(1 << 20));
        let mut peak = 0.0f64;
        let mut dead_run = 0usize;
        for k in 1..=k_max {
            let c = hat(&mut walker, delta * k as f64);
            peak = peak.max(c.norm());
            coeffs.push(c);
            if c.norm() < 1e-18 * peak {
                dead_run += 1;
                if dead_run >= 64 {
                    break;
                }
            } else {
                dead_run = 0;
            }
        }

        let k_used = coeffs.len();
        let tail_bound = if dead_run >= 64 {
            512.0 * 1e-18 * peak
        } else {
            match &pf.base {
                CompactFunction::Triangle | CompactFunction::PiecewiseLinear(_) => {
                    let p = pf.base.as_polyline().expect("polyline shape");
                    let jump_sum = slope_jump_sum(&p);
                    2.0 * jump_sum / (4.0 * PI * PI * delta * delta) * zeta2_tail(k_used)
                }
                CompactFunction::Mollified { base, .. }
                    if matches!(**base, CompactFunction::PiecewiseLinear(_))
                        || matches!(**base, CompactFunction::Triangle) =>
                {
                    let p = base.as_polyline().expect("polyline base");
                    let jump_sum = slope_jump_sum(&p);
                    2.0 * jump_sum / (4.0 * PI * PI * delta * delta) * zeta2_tail(k_used)
                }
                CompactFunction::Mollified { .. } => {
                    // Fit |c_k| ≈ A e^{-c√k} on the last computed decade.
                    let k1 = k_used / 2;
                    let a1 = coeffs[k1 - 1].norm();
                    let a2 = coeffs[k_used - 1].norm();
                    if a2 > 0.0 && a1 > a2 {
                        let c_fit = (a1 / a2).ln() / ((k_used as f64).sqrt() - (k1 as f64).sqrt());
                        // ∫_K^∞ e^{-c√u} du = 2(c√K + 1)e^{-c√K}/c²
                        let rk = (k_used as f64).sqrt();
                        2.0 * a2 * 2.0 * (c_fit * rk + 1.0) / (c_fit * c_fit) * (0.0f64).exp()
                    } else {
                        f64::INFINITY
                    }
                }
                _ => f64::INFINITY,
            }
        };

        Ok(Self { coeffs, tail_bound })
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Σ_{0<|k|≤K} -i sgn(k) F̂(δk) e^{2πikθ}, real for real input.
    pub fn eval(&self, theta: f64) -> PeriodicValue {
        let mut acc = 0.0f64;
        let (s1, c1) = (TAU * theta).sin_cos();
        // Rotate e^{2πikθ} incrementally; renormalize periodically.
        let mut sk = s1;
        let mut ck = c1;
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += 2.0 * (c.re * sk + c.im * ck);
            let ns = sk * c1 + ck * s1;
            let nc = ck * c1 - sk * s1;
            sk = ns;
            ck = nc;
            if i % 512 == 511 {
                let k = (i + 2) as f64;
                let (es, ec) = (TAU * theta * k).sin_cos();
                sk = es;
                ck = ec;
            }
        }
        PeriodicValue {
            value: acc,
            tail_bound: self.tail_bound,
        }
    }
}

fn slope_jump_sum(p: &Polyline) -> f64 {
    let slopes = p.slopes();
    let mut total = slopes[0].abs() + slopes[slopes.len() - 1].abs();
    for w in slopes.windows(2) {
        total += (w[1] - w[0]).abs();
    }
    total
}

/// Truncated multiplier series at a single angle.
pub fn hilbert_periodic(pf: &PeriodizedFunction, theta: f64, k_max: usize) -> Result<PeriodicValue> {
    Ok(PeriodicSeries::build(pf, k_max)?.eval(theta))
}

/// Exact transform of a circle polyline through the Clausen antiderivative
/// Λ(φ) = ∫₀^φ log|2 sin πu| du.
pub(crate) fn circle_polyline_transform(p: &Polyline, theta: f64) -> f64 {
    let pts = p.points();
    let slopes = p.slopes();
    let mut acc = 0.0;
    for (i, s) in slopes.iter().enumerate() {
        if *s != 0.0 {
            acc += s
                * (log_two_sin_antiderivative(theta - pts[i].0)
                    - log_two_sin_antiderivative(theta - pts[i + 1].0));
        }
    }
    acc / PI
}

/// H(f_δ)(θ) through the best engine: exact Clausen evaluation for
/// piecewise-linear shapes, the multiplier series (K = 4096) otherwise.
pub fn periodic_transform(pf: &PeriodizedFunction, theta: f64) -> Result<f64> {
    if let Some(p) = pf.circle_polyline() {
        return Ok(circle_polyline_transform(&p, theta));
    }
    let v = hilbert_periodic(pf, theta, 4096)?;
    if !v.tail_bound.is_finite() {
        return Err(Error::numeric(
            "multiplier series does not converge absolutely for this shape",
        ));
    }
    Ok(v.value)
}

/// Cotangent-kernel symmetric-window quadratures, Richardson-extrapolated:
/// the independent oracle for the periodic engines.
pub fn periodic_pv_quadrature(
    pf: &PeriodizedFunction,
    theta: f64,
    epsilon_schedule: &[f64],
) -> Result<f64> {
    if epsilon_schedule.is_empty() {
        return Err(Error::invalid("epsilon schedule must be nonempty"));
    }
    if epsilon_schedule.iter().any(|&e| !(e > 0.0 && e < 0.5)) {
        return Err(Error::invalid("epsilon schedule must lie in (0, 1/2)"));
    }
    if epsilon_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("epsilon schedule must strictly decrease"));
    }

    let g = |alpha: f64| pf.eval(theta - alpha) / (PI * alpha).tan();

    // Split points: α where θ-α meets a scaled breakpoint or singularity.
    let mut splits: Vec<f64> = Vec::new();
    let mut sing: Vec<f64> = Vec::new();
    for &bpt in &pf.base.breakpoints() {
        for m in [-1.0, 0.0, 1.0] {
            let a = theta - pf.delta * bpt + m;
            if a > -0.5 && a < 0.5 {
                splits.push(a);
            }
        }
    }
    for &(s, _) in &pf.base.singularities() {
        for m in [-1.0, 0.0, 1.0] {
            let a = theta - pf.delta * s + m;
            if a > -0.5 && a < 0.5 {
                sing.push(a);
            }
        }
    }
    sing.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sing.dedup();

    let window = |eps: f64| -> Result<f64> {
        let mut total = 0.0;
        for (a, b) in [(-0.5, -eps), (eps, 0.5)] {
            if b <= a {
                continue;
            }
            let mut cuts = vec![a, b];
            for &s in &sing {
                if s > a && s < b {
                    cuts.push(s);
                }
            }
            cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
            cuts.dedup();
            let is_sing = |v: f64| sing.iter().any(|&s| s == v);
            for w in cuts.windows(2) {
                let inner: Vec<f64> = splits
                    .iter()
                    .copied()
                    .filter(|&s| s > w[0] && s < w[1])
                    .collect();
                total += match (is_sing(w[0]), is_sing(w[1])) {
                    (false, false) => adaptive_split(&g, w[0], w[1], &inner, 1e-11, 36)?,
                    (true, false) => graded_adaptive(&g, w[0], w[1], true, 52, 1e-11)?,
                    (false, true) => graded_adaptive(&g, w[0], w[1], false, 52, 1e-11)?,
                    (true, true) => {
                        let mid = 0.5 * (w[0] + w[1]);
                        graded_adaptive(&g, w[0], mid, true, 52, 1e-11)?
                            + graded_adaptive(&g, mid, w[1], false, 52, 1e-11)?
                    }
                };
            }
        }
        Ok(total)
    };

    let values = epsilon_schedule
        .iter()
        .map(|&e| window(e))
        .collect::<Result<Vec<f64>>>()?;
    let (limit, _) = richardson(epsilon_schedule, &values)?;
    Ok(limit)
}

/// Right-hand side of the rescaling identity:
/// H(F)(θ/δ) + (δ/π) Σ_{k≥1} ∫₀^{δ/2} f_δ(α) · 4θ(θ²-α²-k²) /
/// (((θ-α)²-k²)((θ+α)²-k²)) dα, which equals δ·H(f_δ)(θ).
///
/// The k-sum is truncated at `k_terms` and completed with the analytic tail
/// from the kernel's -4θ/k² - 4θ(θ²+3α²)/k⁴ expansion, leaving a O(K⁻⁵)
/// truncation error.
pub fn lemma4_rhs(
    f: &CompactFunction,
    delta: f64,
    theta: f64,
    k_terms: usize,
) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    if !(theta > -0.5 && theta < 0.5) {
        return Err(Error::invalid("theta must lie in (-1/2, 1/2)"));
    }
    if k_terms < 16 {
        return Err(Error::invalid("lemma-4 sum needs at least 16 terms"));
    }

    // Work in β = α/δ: ∫₀^{δ/2} f_δ(α) g(α) dα = ∫₀^{1/2} F(β) g(δβ) dβ.
    let sing_at_zero = f
        .singularities()
        .iter()
        .any(|&(s, _)| s == 0.0);
    let split_pts: Vec<f64> = f
        .breakpoints()
        .iter()
        .copied()
        .filter(|&b| b > 0.0 && b < 0.5)
        .collect();
    let integrate = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        let h = |beta: f64| f.eval(beta) * g(delta * beta);
        if sing_at_zero {
            graded_adaptive(&h, 0.0, 0.5, true, 50, 1e-12)
        } else {
            adaptive_split(&h, 0.0, 0.5, &split_pts, 1e-12, 36)
        }
    };

    let mut series = 0.0;
    for k in 1..=k_terms {
        let kk = (k * k) as f64;
        let g = move |alpha: f64| {
            let num = 4.0 * theta * (theta * theta - alpha * alpha - kk);
            let d1 = (theta - alpha) * (theta - alpha) - kk;
            let d2 = (theta + alpha) * (theta + alpha) - kk;
            num / (d1 * d2)
        };
        series += integrate(&g)?;
    }
    // Analytic tail: Σ_{k>K} ∫ f_δ R_k ≈ -4θ (M₀S₂ + (θ²M₀ + 3M₂)S₄).
    let m0 = integrate(&|_| 1.0)?;
    let m2 = integrate(&|alpha| alpha * alpha)?;
    let tail = -4.0 * theta
        * (m0 * zeta2_tail(k_terms) + (theta * theta * m0 + 3.0 * m2) * zeta4_tail(k_terms));
    series += tail;

    let line = hilbert_line(f, theta / delta)?;
    Ok(line + delta / PI * series)
}

/// Partial-fraction check for the cotangent:
/// (1/π)(1/α + Σ_{k≤K} 2α/(α²-k²)) → cot(πα).
pub fn cot_expansion_check(alpha: f64, k_terms: usize) -> Result<f64> {
    if alpha == alpha.round() {
        return Err(Error::invalid("alpha must not be an integer"));
    }
    let mut acc = 1.0 / alpha;
    for k in 1..=k_terms {
        let kk = (k * k) as f64;
        acc += 2.0 * alpha / (alpha * alpha - kk);
    }
    Ok(acc / PI)
}
