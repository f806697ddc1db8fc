//! The real-line Hilbert transform H(F)(x) = p.v. (1/π) ∫ F(x-t)/t dt:
//! exact log-kernel evaluation for piecewise-linear shapes, the closed forms
//! of the magic functions and the Chebyshev weight, the mollified
//! convolution, and the symmetric-window principal-value oracle.

use std::f64::consts::PI;

use super::{CompactFunction, Polyline};
use crate::error::{Error, Result};
use crate::quad::{adaptive_split, gk15, graded_adaptive, richardson};

/// Antiderivative of log|u|: A(u) = u ln|u| - u, with A(0) = 0.
fn log_antiderivative(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.abs().ln() - u
    }
}

/// Exact transform of a continuous polyline via integration by parts:
/// H(F)(x) = (1/π) Σ_i s_i (A(x - t_i) - A(x - t_{i+1})).
pub(crate) fn polyline_line_transform(p: &Polyline, x: f64) -> f64 {
    let pts = p.points();
    let slopes = p.slopes();
    let mut acc = 0.0;
    for (i, s) in slopes.iter().enumerate() {
        if *s != 0.0 {
            acc += s * (log_antiderivative(x - pts[i].0) - log_antiderivative(x - pts[i + 1].0));
        }
    }
    acc / PI
}

/// H(F)(x) through the fastest exact route available for the shape.
///
/// Closed forms: H(𝔊) = -1 inside the support and -1 + 2|x|/√(4x²-1)
/// outside; H(𝔉) = sgn(x) inside and (2/π) arcsin(1/(2x)) outside; the
/// Chebyshev weight is annihilated inside and transforms to sgn(x)/√(4x²-1)
/// outside. Mollified shapes convolve the base closed form with φ_ε.
pub fn hilbert_line(f: &CompactFunction, x: f64) -> Result<f64> {
    match f {
        CompactFunction::Triangle | CompactFunction::PiecewiseLinear(_) => {
            Ok(polyline_line_transform(&f.as_polyline().expect("polyline shape"), x))
        }
        CompactFunction::MagicF => {
            let ax = x.abs();
            if ax <= 0.5 {
                Ok(x.signum() * if x == 0.0 { 0.0 } else { 1.0 })
            } else {
                Ok((2.0 / PI) * (1.0 / (2.0 * x)).asin())
            }
        }
        CompactFunction::MagicG => {
            let ax = x.abs();
            if ax == 0.5 {
                Err(Error::SingularPoint(x))
            } else if ax < 0.5 {
                Ok(-1.0)
            } else {
                Ok(-1.0 + 2.0 * ax / (4.0 * x * x - 1.0).sqrt())
            }
        }
        CompactFunction::ChebyshevWeight => {
            let ax = x.abs();
            if ax == 0.5 {
                Err(Error::SingularPoint(x))
            } else if ax < 0.5 {
                Ok(0.0)
            } else {
                Ok(x.signum() / (4.0 * x * x - 1.0).sqrt())
            }
        }
        CompactFunction::Mollified { base, epsilon } => {
            let eps = *epsilon;
            let scale = 1.0 - eps;
            // H(base_{1-ε} * φ_ε)(x) = ∫ H(base)((x-y)/(1-ε))/(1-ε) · φ_ε(y) dy
            let g = |y: f64| -> f64 {
                let u = (x - y) / scale;
                let h = match hilbert_line(base, u) {
                    Ok(v) => v,
                    // φ_ε is bounded and the kernel singularity is integrable;
                    // a measure-zero hit contributes nothing.
                    Err(_) => 0.0,
                };
                h / scale * crate::special::mollifier_phi(y / eps) / eps
            };
            // Split at images of the base transform's kinks (|u| = 1/2) and

            // at y = x (sign change for the sgn-type core).
            let mut cuts = vec![-eps / 2.0, eps / 2.0];
            for c in [x - scale / 2.0, x + scale / 2.0, x] {
                if c > -eps / 2.0 && c < eps / 2.0 {
                    cuts.push(c);
                }
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            let mut total = 0.0;
            for w in cuts.windows(2) {
                let n = 10;
                for i in 0..n {
                    let a = w[0] + (w[1] - w[0]) * i as f64 / n as f64;
                    let b = w[0] + (w[1] - w[0]) * (i + 1) as f64 / n as f64;
                    total += gk15(&g, a, b).0;
                }
            }
            Ok(total)
        }
    }
}

/// One symmetric-window truncation H_ε(F)(x) = (1/π) ∫_{|t|≥ε} F(x-t)/t dt.
fn pv_window(f: &CompactFunction, x: f64, eps: f64) -> Result<f64> {
    let lo = x - 0.5;
    let hi = x + 0.5;
    let g = |t: f64| f.eval(x - t) / t;

    // Split points in t-space: shape kinks and singularities at t = x - s.
    let mut sing: Vec<f64> = f.singularities().iter().map(|&(s, _)| x - s).collect();
    sing.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let splits: Vec<f64> = f.breakpoints().iter().map(|&bpt| x - bpt).collect();

    let mut total = 0.0;
    for (a, b) in [(lo, -eps), (eps, hi)] {
        if b <= a {
            continue;
        }
        // Carve the segment at singular points and integrate each piece,
        // grading toward singular endpoints.
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
            let (pa, pb) = (w[0], w[1]);
            let inner: Vec<f64> = splits
                .iter()
                .copied()
                .filter(|&s| s > pa && s < pb)
                .collect();
            match (is_sing(pa), is_sing(pb)) {
                (false, false) => {
                    total += adaptive_split(&g, pa, pb, &inner, 1e-11, 36)?;
                }
                (true, false) => total += graded_adaptive(&g, pa, pb, true, 54, 1e-11)?,
                (false, true) => total += graded_adaptive(&g, pa, pb, false, 54, 1e-11)?,
                (true, true) => {
                    let mid = 0.5 * (pa + pb);
                    total += graded_adaptive(&g, pa, mid, true, 54, 1e-11)?;
                    total += graded_adaptive(&g, mid, pb, false, 54, 1e-11)?;
                }
            }
        }
    }
    Ok(total / PI)
}

/// Principal-value oracle: symmetric-window quadratures at each ε of the
/// schedule, Richardson-extrapolated to ε → 0. Lives on the test side of
/// every cross-check against the closed forms.
pub fn hilbert_line_pv_quadrature(
    f: &CompactFunction,
    x: f64,
    epsilon_schedule: &[f64],
) -> Result<f64> {
    if epsilon_schedule.is_empty() {
        return Err(Error::invalid("epsilon schedule must be nonempty"));
    }
    if epsilon_schedule.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::invalid("epsilon schedule must be positive"));
    }
    if epsilon_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("epsilon schedule must strictly decrease"));
    }
    let values = epsilon_schedule
        .iter()
        .map(|&e| pv_window(f, x, e))
        .collect::<Result<Vec<f64>>>()?;
    let (limit, err) = richardson(epsilon_schedule, &values)?;
    if values.len() >= 3 && !err.is_finite() {
        return Err(Error::numeric("principal-value extrapolation diverged"));
    }
    Ok(limit)
}

/// Default ε schedule for a point at distance `gap` from the nearest
/// integrand singularity.
pub fn default_pv_schedule(gap: f64) -> Vec<f64> {
    let top = (gap / 4.0).min(0.05).max(1e-6);
    (0..5).map(|i| top / 2f64.powi(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;

    #[test]
    fn triangle_transform_peak_is_the_silver_log() {
        let f = CompactFunction::triangle();
        let x = 1.0 / (2.0 * 2.0f64.sqrt());
        let v = hilbert_line(&f, x).unwrap();
        let expected = constants::shared().c_triangle;
        assert!((v - expected).abs() < 1e-12, "H at peak = {v}");
    }

    #[test]
    fn triangle_transform_is_odd_and_decays() {
        let f = CompactFunction::triangle();
        for &x in &[0.1, 0.3, 0.7, 2.0] {
            let plus = hilbert_line(&f, x).unwrap();
            let minus = hilbert_line(&f, -x).unwrap();
            assert!((plus + minus).abs() < 1e-12, "x={x}");
        }
        let far = hilbert_line(&f, 100.0).unwrap();
        assert!(far.abs() < 1e-2, "H(100) = {far}");
        assert!((far - 1.0 / (PI * 100.0)).abs() < 1e-4);
    }

    #[test]
    fn class_a_transform_nonpositive_left_of_support() {
        let f = CompactFunction::outlier();
        for &x in &[-0.5, -0.6, -1.0, -3.0] {
            let v = hilbert_line(&f, x).unwrap();
            assert!(v <= 1e-12, "H({x}) = {v}");
        }
    }

    #[test]
    fn magic_g_closed_form_and_singular_point() {
        let f = CompactFunction::MagicG;
        assert_eq!(hilbert_line(&f, 0.2).unwrap(), -1.0);
        let out = hilbert_line(&f, 0.8).unwrap();
        assert!((out - (-1.0 + 1.6 / (4.0 * 0.64f64 - 1.0).sqrt())).abs() < 1e-12);
        assert!(matches!(hilbert_line(&f, 0.5), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn magic_f_closed_form_is_continuous_at_support_edge() {
        let f = CompactFunction::MagicF;
        assert_eq!(hilbert_line(&f, 0.3).unwrap(), 1.0);
        assert_eq!(hilbert_line(&f, -0.3).unwrap(), -1.0);
        let just_out = hilbert_line(&f, 0.5 + 1e-12).unwrap();
        assert!((just_out - 1.0).abs() < 1e-5);
        let far = hilbert_line(&f, 5.0).unwrap();
        assert!((far - (2.0 / PI) * (0.1f64).asin()).abs() < 1e-14);
    }

    #[test]
    fn pv_oracle_matches_triangle_closed_form() {
        let f = CompactFunction::triangle();
        let x = 0.25;
        let closed = hilbert_line(&f, x).unwrap();
        let pv = hilbert_line_pv_quadrature(&f, x, &default_pv_schedule(0.25)).unwrap();
        assert!((closed - pv).abs() < 1e-5, "closed {closed} vs pv {pv}");
    }

    #[test]
    fn pv_oracle_matches_magic_g_inside() {
        let f = CompactFunction::MagicG;
        let pv = hilbert_line_pv_quadrature(&f, 0.2, &default_pv_schedule(0.2)).unwrap();
        assert!((pv + 1.0).abs() < 1e-4, "pv = {pv}");
    }

    #[test]
    fn pv_oracle_annihilates_chebyshev_inside() {
        let f = CompactFunction::ChebyshevWeight;
        let pv = hilbert_line_pv_quadrature(&f, 0.3, &default_pv_schedule(0.2)).unwrap();
        assert!(pv.abs() < 1e-4, "pv = {pv}");
    }

    #[test]
    fn pv_oracle_rejects_bad_schedules() {
        let f = CompactFunction::triangle();
        assert!(hilbert_line_pv_quadrature(&f, 0.2, &[]).is_err());
        assert!(hilbert_line_pv_quadrature(&f, 0.2, &[0.1, 0.2]).is_err());
        assert!(hilbert_line_pv_quadrature(&f, 0.2, &[0.1, -0.05]).is_err());
    }

    #[test]
    fn mollified_transform_has_the_rescaled_plateau() {
        let eps = 0.2;
        let f = CompactFunction::mollified(CompactFunction::MagicF, eps).unwrap();
        // For ε/2 < x < (1-ε)/2 - ε/2 the whole mollifier window sees the
        // +1 plateau of H(𝔉), so the value is exactly 1/(1-ε).
        let v = hilbert_line(&f, 0.2).unwrap();
        assert!((v - 1.0 / (1.0 - eps)).abs() < 1e-9, "plateau = {v}");
        // And the transform is odd.
        let vm = hilbert_line(&f, -0.2).unwrap();
        assert!((v + vm).abs() < 1e-9);
    }
}
