//! The extremal-problem layer: the functional C(F) = max of the two
//! Hilbert-transform sup norms, the line/circle dichotomy, the δ-rescaling
//! sweep and its endpoint law, the majorant bound G_δ, the optimal δ of the
//! discrepancy argument, the duality pairing against the odd magic function,
//! and the interior annihilation check for the Chebyshev weight.

use serde::Serialize;

use crate::constants;
use crate::discrepancy::CircleInterval;
use crate::error::{Error, Result};
use crate::hilbert::{
    default_pv_schedule, hilbert_line, hilbert_line_pv_quadrature, periodic_transform, CompactFunction,
    Domain, PeriodicSeries, PeriodizedFunction, TransformGrid,
};
use crate::quad::adaptive_split;

/// Which sup norm wins in C(F).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dichotomy {
    LineDominant,
    CircleDominant,
    TieWithinTolerance,
}

/// C(F) and everything measured on the way to it. All values are normalized
/// to unit L¹ mass of F.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub norm_line: f64,
    pub norm_circle: f64,
    pub c_of_f: f64,
    pub argmax_line: f64,
    pub argmax_circle: f64,
    pub dichotomy: Dichotomy,
    /// c_of_f ≤ π²/(3√3 L(2,χ₃)), the threshold keeping the optimal δ ≤ 1.
    pub passes_threshold: bool,
}

/// Grid density used by the sup-norm scans.
const SCAN_POINTS: usize = 2048;

/// Two norms closer than this cannot be ordered by grid refinement.
const TIE_TOLERANCE: f64 = 1e-6;

fn line_scan(f: &CompactFunction, norm: f64) -> Result<TransformGrid> {
    // H decays like ‖F‖₁/(πx), so for unit mass the sup over [0, 4] is the
    // global sup whenever C(F) ≥ 1/(3.5π) ≈ 0.09, which holds for class A.
    let eval = |x: f64| hilbert_line(f, x).map(|v| v / norm);
    for probe in [0.1, 0.3] {
        eval(probe)?;
    }
    let candidates: Vec<f64> = f.breakpoints().into_iter().filter(|&x| x >= 0.0).collect();
    Ok(TransformGrid::scan(
        Domain::Line,
        &|x| eval(x).unwrap_or(f64::NAN),
        0.0,
        4.0,
        SCAN_POINTS,
        &candidates,
        None,
    ))
}

fn circle_scan(f: &CompactFunction, norm: f64, k_max: usize) -> Result<TransformGrid> {
    let pf = PeriodizedFunction::new(f.clone(), 1.0)?;
    let candidates: Vec<f64> = f.breakpoints().into_iter().filter(|&x| x >= 0.0).collect();
    if f.as_polyline().is_some() {
        Ok(TransformGrid::scan(
            Domain::Circle,
            &|theta| periodic_transform(&pf, theta).unwrap_or(f64::NAN) / norm,
            0.0,
            0.5,
            SCAN_POINTS,
            &candidates,
            None,
        ))
    } else {
        let series = PeriodicSeries::build(&pf, k_max)?;
        if !series.tail_bound().is_finite() {
            return Err(Error::numeric(
                "periodic multiplier series does not converge absolutely for this shape",
            ));
        }
        let terms = series.terms();
        Ok(TransformGrid::scan(
            Domain::Circle,
            &|theta| series.eval(theta).value / norm,
            0.0,
            0.5,
            SCAN_POINTS,
            &candidates,
            Some(terms),
        ))
    }
}

/// Evaluates C(F) = max(‖H(F)‖_∞, ‖H(f_F)‖_∞)/‖F‖₁ for class-A F.
pub fn c_functional(f: &CompactFunction) -> Result<ExtremalReport> {
    c_functional_with_k(f, 4096)
}

/// [`c_functional`] with an explicit multiplier-series cutoff.
pub fn c_functional_with_k(f: &CompactFunction, k_max: usize) -> Result<ExtremalReport> {
    if !f.is_class_a() {
        return Err(Error::invalid(
            "C(F) is defined on class A (even, continuous, non-negative, supported in [-1/2,1/2])",
        ));
    }
    let norm = f.l1_norm();
    if !(norm > 0.0) {
        return Err(Error::invalid("F must not be identically zero"));
    }

    let line = line_scan(f, norm)?;
    let circle = circle_scan(f, norm, k_max)?;

    let dichotomy = if (line.sup_norm - circle.sup_norm).abs() < TIE_TOLERANCE {
        Dichotomy::TieWithinTolerance
    } else if line.sup_norm > circle.sup_norm {
        Dichotomy::LineDominant
    } else {
        Dichotomy::CircleDominant
    };
    if f.is_radial_decreasing() && dichotomy == Dichotomy::CircleDominant {
        return Err(Error::numeric(
            "radial-decreasing input classified circle-dominant; engines disagree",
        ));
    }

    let c_of_f = line.sup_norm.max(circle.sup_norm);
    Ok(ExtremalReport {
        norm_line: line.sup_norm,
        norm_circle: circle.sup_norm,
        c_of_f,
        argmax_line: line.argmax,
        argmax_circle: circle.argmax,
        dichotomy,
        passes_threshold: c_of_f <= constants::shared().c_threshold,
    })
}

/// δ ↦ δ·‖H(f_δ)‖_∞ over a sweep of rescalings, with the endpoint targets.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaSweep {
    pub deltas: Vec<f64>,
    /// δ·‖H(f_δ)‖_∞ per δ, unit-normalized.
    pub values: Vec<f64>,
    pub sup: f64,
    /// The δ→0⁺ endpoint target, ‖H(F)‖_∞.
    pub endpoint_line: f64,
    /// The δ=1 endpoint, ‖H(f_F)‖_∞.
    pub endpoint_circle: f64,
}

/// δ·sup-norm of the periodized rescaling, unit-normalized.
pub fn scaled_circle_norm(f: &CompactFunction, delta: f64) -> Result<f64> {
    let norm = f.l1_norm();
    let pf = PeriodizedFunction::new(f.clone(), delta)?;
    let candidates: Vec<f64> = f
        .breakpoints()
        .into_iter()
        .filter(|&x| x >= 0.0)
        .map(|x| x * delta)
        .collect();
    let grid = if f.as_polyline().is_some() {
        TransformGrid::scan(
            Domain::Circle,
            &|theta| periodic_transform(&pf, theta).unwrap_or(f64::NAN) / norm,
            0.0,
            0.5,
            SCAN_POINTS,
            &candidates,
            None,
        )
    } else {
        let series = PeriodicSeries::build(&pf, 4096)?;
        let terms = series.terms();
        TransformGrid::scan(
            Domain::Circle,
            &|theta| series.eval(theta).value / norm,
            0.0,
            0.5,
            SCAN_POINTS,
            &candidates,
            Some(terms),
        )
    };
    Ok(delta * grid.sup_norm)
}

/// Runs the δ-sweep; the supremum stays below C(F) and is approached at the
/// endpoint the dichotomy predicts (δ→0⁺ when line-dominant, δ=1 otherwise).
pub fn delta_sweep(f: &CompactFunction, deltas: &[f64]) -> Result<DeltaSweep> {
    if deltas.is_empty() {
        return Err(Error::invalid("delta list must be nonempty"));
    }
    if deltas.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::invalid("deltas must lie in (0, 1]"));
    }
    let report = c_functional(f)?;
    let mut values = Vec::with_capacity(deltas.len());
    for &d in deltas {
        values.push(scaled_circle_norm(f, d)?);
    }
    let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DeltaSweep {
        deltas: deltas.to_vec(),
        values,
        sup,
        endpoint_line: report.norm_line,
        endpoint_circle: report.norm_circle,
    })
}

/// G_δ for the majorant g_δ = χ_{I_δ} * f_δ of the widened interval:
/// max_θ |Σ_{k≠0} 2|k| ĝ_δ(k) e^{2πikθ}|, evaluated through the identity
/// with the periodic transform at the two widened endpoints. Returns 0 when
/// the widening covers the whole circle (only the constant mode survives).
pub fn g_delta_bound(f: &CompactFunction, delta: f64, interval: &CircleInterval) -> Result<f64> {
    if !f.is_class_a() {
        return Err(Error::invalid("the majorant bound needs class-A F"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    if interval.length + delta >= 1.0 {
        return Ok(0.0);
    }
    let norm = f.l1_norm();
    let alpha = interval.start - delta / 2.0;
    let beta = interval.start + interval.length + delta / 2.0;
    let pf = PeriodizedFunction::new(f.clone(), delta)?;

    let h: Box<dyn Fn(f64) -> f64> = if f.as_polyline().is_some() {
        Box::new(move |theta: f64| periodic_transform(&pf, theta).unwrap_or(f64::NAN) / norm)
    } else {
        let series = PeriodicSeries::build(&pf, 4096)?;
        Box::new(move |theta: f64| series.eval(theta).value / norm)
    };
    let g = |theta: f64| (h(theta - alpha) - h(theta - beta)) / std::f64::consts::PI;
    let grid = TransformGrid::scan(Domain::Circle, &g, 0.0, 1.0, SCAN_POINTS, &[alpha, beta], None);
    Ok(grid.sup_norm)
}

/// Flags carried by the optimal rescaling width.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OptimalDelta {
    pub delta: f64,
    /// The unclamped value exceeded 1.
    pub clamped: bool,
    /// h = 0 forced the machine floor.
    pub degenerate: bool,
}

/// δ = √(4 C(F) h / (π N)), the width minimizing Nδ + (4/(πδ)) C(F) h,
/// clamped into (0, 1].
pub fn optimal_delta(f: &CompactFunction, n: usize, h: f64) -> Result<OptimalDelta> {
    if n == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    if h < 0.0 {
        return Err(Error::invalid("height must be non-negative"));
    }
    let c = c_functional(f)?.c_of_f;
    if h == 0.0 {
        return Ok(OptimalDelta {
            delta: f64::MIN_POSITIVE,
            clamped: false,
            degenerate: true,
        });
    }
    let raw = (4.0 * c * h / (std::f64::consts::PI * n as f64)).sqrt();
    Ok(OptimalDelta {
        delta: raw.min(1.0),
        clamped: raw > 1.0,
        degenerate: false,
    })
}

/// ∫ H(F)(x) 𝔊(x) dx over (-1/2, 1/2), which equals ∫F = 1 for unit-mass
/// class-A* F because H(𝔊) ≡ -1 on the support: the duality certificate
/// that forces ‖H(F)‖_∞ ≥ 1.
///
/// The endpoint blow-up of 𝔊 is removed exactly by the substitution
/// u = √(1-4x²), under which each half becomes (1/2)∫₀¹ H(F)(x(u)) du.
pub fn duality_lower_bound(f: &CompactFunction) -> Result<f64> {
    if !f.is_class_a_star() {
        return Err(Error::invalid("the duality pairing needs class-A* F"));
    }
    if (f.l1_norm() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("the duality pairing needs unit L1 mass"));
    }
    // Breakpoint images under u = √(1-4x²).
    let mut cuts: Vec<f64> = f
        .breakpoints()
        .iter()
        .map(|&b| (1.0 - 4.0 * b * b).max(0.0).sqrt())
        .filter(|&u| u > 0.0 && u < 1.0)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let right = {
        let g = |u: f64| {
            let x = 0.5 * (1.0 - u * u).max(0.0).sqrt();
            hilbert_line(f, x).unwrap_or(f64::NAN)
        };
        adaptive_split(&g, 0.0, 1.0, &cuts, 1e-9, 40)?
    };
    let left = {
        let g = |u: f64| {
            let x = -0.5 * (1.0 - u * u).max(0.0).sqrt();
            -hilbert_line(f, x).unwrap_or(f64::NAN)
        };
        adaptive_split(&g, 0.0, 1.0, &cuts, 1e-9, 40)?
    };
    Ok(0.5 * (right + left))
}

/// Max over an interior grid (|x| ≤ 0.45) of |H((1-4x²)^{-1/2})| computed by
/// the principal-value oracle. The closed form vanishes identically there;
/// this measures how well the quadrature sees the annihilation.
pub fn tricomi_annihilation_check(grid: usize) -> Result<f64> {
    if grid < 101 {
        return Err(Error::invalid("annihilation check needs at least 101 grid points"));
    }
    let f = CompactFunction::ChebyshevWeight;
    let mut worst = 0.0f64;
    for i in 0..grid {
        let x = -0.45 + 0.9 * i as f64 / (grid - 1) as f64;
        let v = hilbert_line_pv_quadrature(&f, x, &default_pv_schedule(0.05))?;
        worst = worst.max(v.abs());
    }
    Ok(worst)
}

/// Seeded generator of random unit-mass class-A polylines (even,
/// non-negative, vanishing at ±1/2).
pub fn random_class_a_polyline(rng: &mut impl rand::Rng) -> CompactFunction {
    loop {
        let segments = rng.gen_range(2..6usize);
        let mut xs: Vec<f64> = (0..segments).map(|_| rng.gen_range(0.02..0.48)).collect();
        xs.push(0.5);
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup_by(|a, b| (*a - *b).abs() < 0.02);
        if xs.last().map(|&v| v < 0.5).unwrap_or(true) {
            xs.push(0.5);
        }
        let mut pts: Vec<(f64, f64)> = vec![(0.0, rng.gen_range(0.1..1.0))];
        for (i, &x) in xs.iter().enumerate() {
            let v = if i + 1 == xs.len() { 0.0 } else { rng.gen_range(0.0..1.0) };
            pts.push((x, v));
        }
        // Even extension.
        let mut full: Vec<(f64, f64)> = pts.iter().skip(1).map(|&(x, v)| (-x, v)).collect();
        full.reverse();
        full.extend(pts);
        full.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        full.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
        let Ok(p) = crate::hilbert::Polyline::new(full) else {
            continue;
        };
        let mass = p.mass();
        if mass < 1e-3 {
            continue;
        }
        return CompactFunction::PiecewiseLinear(p.scaled_values(1.0 / mass));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_certificate() {
        let report = c_functional(&CompactFunction::triangle()).unwrap();
        let t = constants::shared();
        assert!(
            (report.c_of_f - t.c_triangle).abs() < 1e-9,
            "C(triangle) = {}",
            report.c_of_f
        );
        assert!(
            (report.argmax_line - 1.0 / (2.0 * 2.0f64.sqrt())).abs() < 1e-7,
            "argmax = {}",
            report.argmax_line
        );
        assert_eq!(report.dichotomy, Dichotomy::LineDominant);
        assert!(report.passes_threshold);
    }

    #[test]
    fn outlier_is_circle_dominant() {
        let report = c_functional(&CompactFunction::outlier()).unwrap();
        assert_eq!(report.dichotomy, Dichotomy::CircleDominant, "report: {report:?}");
        assert!(report.c_of_f >= 1.0 - 1e-4);
    }

    #[test]
    fn class_a_is_required() {
        assert!(c_functional(&CompactFunction::MagicG).is_err());
        assert!(c_functional(&CompactFunction::MagicF).is_err());
    }

    #[test]
    fn functional_floor_holds_on_random_polylines() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..8 {
            let f = random_class_a_polyline(&mut rng);
            let report = c_functional(&f).unwrap();
            assert!(report.c_of_f >= 1.0 - 1e-4, "C(F) = {}", report.c_of_f);
        }
    }

    #[test]
    fn triangle_delta_sweep_peaks_at_small_delta() {
        let deltas = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0];
        let sweep = delta_sweep(&CompactFunction::triangle(), &deltas).unwrap();
        let c = constants::shared().c_triangle;
        assert!(sweep.sup <= c + 1e-3, "sup = {}", sweep.sup);
        assert!((sweep.values[0] - c).abs() < 1e-3, "delta->0 value = {}", sweep.values[0]);
        assert!((sweep.values[6] - sweep.endpoint_circle).abs() < 1e-12);
    }

    #[test]
    fn outlier_delta_sweep_peaks_at_one() {
        let deltas = [0.05, 0.25, 0.5, 1.0];
        let sweep = delta_sweep(&CompactFunction::outlier(), &deltas).unwrap();
        let report = c_functional(&CompactFunction::outlier()).unwrap();
        assert!(sweep.sup <= report.c_of_f + 1e-3);
        assert!((sweep.values[3] - report.c_of_f).abs() < 1e-3);
    }

    #[test]
    fn sweep_rejects_bad_deltas() {
        assert!(delta_sweep(&CompactFunction::triangle(), &[]).is_err());
        assert!(delta_sweep(&CompactFunction::triangle(), &[0.0]).is_err());
        assert!(delta_sweep(&CompactFunction::triangle(), &[1.5]).is_err());
    }

    #[test]
    fn g_delta_full_circle_is_zero() {
        let i = CircleInterval { start: 0.1, length: 0.6 };
        let v = g_delta_bound(&CompactFunction::triangle(), 0.5, &i).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn g_delta_respects_the_two_over_pi_bound() {
        let f = CompactFunction::triangle();
        let delta = 0.5;
        let circle_norm = scaled_circle_norm(&f, delta).unwrap() / delta;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut best = 0.0f64;
        use rand::Rng;
        for _ in 0..64 {
            let length = rng.gen_range(0.01..(1.0 - delta - 0.01));
            let start = rng.gen_range(0.0..1.0);
            let v = g_delta_bound(&f, delta, &CircleInterval { start, length }).unwrap();
            assert!(
                v <= 2.0 / std::f64::consts::PI * circle_norm + 1e-6,
                "G_delta = {v} exceeds (2/pi)||H|| = {}",
                2.0 / std::f64::consts::PI * circle_norm
            );
            best = best.max(v);
        }
        // Maximizing over intervals approaches equality.
        assert!(
            best >= 2.0 / std::f64::consts::PI * circle_norm - 1e-2,
            "best G_delta = {best} vs {}",
            2.0 / std::f64::consts::PI * circle_norm
        );
    }

    #[test]
    fn optimal_delta_cases() {
        let f = CompactFunction::triangle();
        let smyth = constants::shared().smyth;
        // h = 0 degenerates to the machine floor.
        let d0 = optimal_delta(&f, 10, 0.0).unwrap();
        assert!(d0.degenerate);
        assert!(d0.delta > 0.0);
        // N = 100, h = N·smyth.
        let d = optimal_delta(&f, 100, 100.0 * smyth).unwrap();
        let c = constants::shared().c_triangle;
        let expected = (4.0 * c * smyth / std::f64::consts::PI).sqrt();
        assert!((d.delta - expected).abs() < 1e-9, "delta = {}", d.delta);
        assert!(!d.clamped);
        assert!((expected - 0.6795).abs() < 1e-3);
    }

    #[test]
    fn duality_pairing_is_one_for_triangle_and_magic_f() {
        let tri = duality_lower_bound(&CompactFunction::triangle()).unwrap();
        assert!((tri - 1.0).abs() < 1e-6, "triangle pairing = {tri}");
        let mf = duality_lower_bound(&CompactFunction::MagicF).unwrap();
        assert!((mf - 1.0).abs() < 1e-12, "magic-F pairing = {mf}");
        assert!(duality_lower_bound(&CompactFunction::MagicG).is_err());
        assert!(duality_lower_bound(&CompactFunction::ChebyshevWeight).is_err());
    }

    #[test]
    fn duality_pairing_is_one_for_random_polylines() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..6 {
            let f = random_class_a_polyline(&mut rng);
            let v = duality_lower_bound(&f).unwrap();
            assert!((v - 1.0).abs() < 1e-5, "pairing = {v}");
        }
    }

    #[test]
    fn mollified_family_approaches_one() {
        let mut prev = f64::INFINITY;
        for &eps in &[0.2, 0.1] {
            let f = CompactFunction::mollified(CompactFunction::MagicF, eps).unwrap();
            let report = c_functional(&f).unwrap();
            let expected = 1.0 / (1.0 - eps);
            assert!(
                (report.c_of_f - expected).abs() < 1e-3,
                "eps={eps}: C = {} vs {expected}",
                report.c_of_f
            );
            assert!(report.c_of_f < prev);
            assert_ne!(report.dichotomy, Dichotomy::CircleDominant);
            prev = report.c_of_f;
        }
    }
}
