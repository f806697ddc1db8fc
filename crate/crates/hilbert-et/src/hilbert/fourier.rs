//! Fourier transforms F̂(t) = ∫ e^{-2πitx} F(x) dx of the compact shapes:
//! closed forms where they exist (sinc² for the triangle, Bessel integrals
//! for the magic functions and the Chebyshev weight, exact per-segment
//! integration for polylines) and a generic singularity-splitting quadrature
//! as the cross-checkable operation.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{CompactFunction, Polyline, SingKind};
use crate::error::{Error, Result};
use crate::quad::{adaptive_split, graded_adaptive};
use crate::special::{j0_integral_from, mollifier_phi_hat};

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0 + z.powi(4) / 120.0
    } else {
        z.sin() / z
    }
}

/// g(z) = (sin z - z cos z)/z², with g(z) ~ z/3 for small z.
fn sin_minus_zcos_over_z2(z: f64) -> f64 {
    if z.abs() < 1e-2 {
        z / 3.0 - z.powi(3) / 30.0 + z.powi(5) / 840.0
    } else {
        (z.sin() - z * z.cos()) / (z * z)
    }
}

/// Exact ∫_a^b (linear segment) e^{-2πitx} dx, stable for all t.
fn segment_hat(a: f64, va: f64, b: f64, vb: f64, t: f64) -> Complex64 {
    let omega = 2.0 * PI * t;
    let x0 = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let slope = (vb - va) / (b - a);
    let c0 = 0.5 * (va + vb); // value at the midpoint
    let z = omega * h;
    // ∫_{-h}^{h} (c0 + slope·u) e^{-iωu} du
    let i0 = 2.0 * h * sinc(z);
    let i1 = Complex64::new(0.0, -2.0 * h * h * sin_minus_zcos_over_z2(z));
    let phase = Complex64::from_polar(1.0, -omega * x0);
    phase * (c0 * i0 + slope * i1)
}

pub(crate) fn polyline_hat(p: &Polyline, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in p.points().windows(2) {
        acc += segment_hat(w[0].0, w[0].1, w[1].0, w[1].1, t);
    }
    acc
}

/// 𝔉̂(t) = (1/(πt)) ∫₀^{πt} J₀(w) dw; even, 𝔉̂(0) = 1.
pub(crate) fn magic_f_hat(t: f64) -> f64 {
    let z = PI * t.abs();
    if z < 1e-8 {
        return 1.0 - z * z / 6.0;
    }
    j0_integral_from(0.0, 0.0, z) / z
}

/// Walks ∫₀^z J₀ forward so a monotone sequence of arguments reuses work.
pub(crate) struct MagicFHatWalker {
    z: f64,
    acc: f64,
}

impl MagicFHatWalker {
    pub(crate) fn new() -> Self {
        Self { z: 0.0, acc: 0.0 }
    }

    pub(crate) fn hat(&mut self, t: f64) -> f64 {
        let z = PI * t.abs();
        if z < 1e-8 {
            return 1.0 - z * z / 6.0;
        }
        if z < self.z {
            // non-monotone query; restart
            self.z = 0.0;
            self.acc = 0.0;
        }
        self.acc = j0_integral_from(self.z, self.acc, z);
        self.z = z;
        self.acc / z
    }
}

/// Closed/semi-closed F̂ for every shape; the engine path.
pub(crate) fn hat_closed(f: &CompactFunction, t: f64) -> Complex64 {
    match f {
        CompactFunction::Triangle => {
            let z = PI * t / 2.0;
            let s = sinc(z);
            Complex64::new(s * s, 0.0)
        }
        CompactFunction::PiecewiseLinear(p) => polyline_hat(p, t),
        CompactFunction::MagicF => Complex64::new(magic_f_hat(t), 0.0),
        CompactFunction::MagicG => Complex64::new(0.0, -(PI / 2.0) * libm::j1(PI * t)),
        CompactFunction::ChebyshevWeight => Complex64::new((PI / 2.0) * libm::j0(PI * t), 0.0),
        CompactFunction::Mollified { base, epsilon } => {
            hat_closed(base, (1.0 - epsilon) * t) * mollifier_phi_hat(epsilon * t)
        }
    }
}

/// F̂(t) by direct quadrature over [-1/2, 1/2], splitting panels at the
/// shape's kinks and grading toward its integrable singularities.
pub fn fourier_transform_hat(f: &CompactFunction, t: f64, tolerance: f64) -> Result<Complex64> {
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let re = quadrature_part(f, t, tolerance / 2.0, false)?;
    let im = quadrature_part(f, t, tolerance / 2.0, true)?;
    Ok(Complex64::new(re, -im))
}

fn quadrature_part(f: &CompactFunction, t: f64, tol: f64, sine: bool) -> Result<f64> {
    let g = |x: f64| {
        let w = 2.0 * PI * t * x;
        f.eval(x) * if sine { w.sin() } else { w.cos() }
    };
    let sing = f.singularities();
    if sing.is_empty() {
        return adaptive_split(&g, -0.5, 0.5, &f.breakpoints(), tol, 40);
    }
    // Split at singular points, grade toward each.
    let mut cuts = vec![-0.5, 0.5];
    for &(s, _) in &sing {
        if s > -0.5 && s < 0.5 {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let is_sing = |x: f64| sing.iter().any(|&(s, _)| s == x);
    let mut total = 0.0;
    let budget = tol / (cuts.len() - 1) as f64;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (is_sing(a), is_sing(b)) {
            (false, false) => total += adaptive_split(&g, a, b, &[], budget, 40)?,
            (true, false) => total += graded_adaptive(&g, a, b, true, 54, budget)?,
            (false, true) => total += graded_adaptive(&g, a, b, false, 54, budget)?,
            (true, true) => {
                let mid = 0.5 * (a + b);
                total += graded_adaptive(&g, a, mid, true, 54, budget / 2.0)?;
                total += graded_adaptive(&g, mid, b, false, 54, budget / 2.0)?;
            }
        }
    }
    let _ = SingKind::Log; // kinds share the graded treatment
    Ok(total)
}
