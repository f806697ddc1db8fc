//! Special functions and smaller numeric helpers: the Clausen function,
//! Bessel-integral Fourier transforms, the smooth bump mollifier, compensated
//! summation, zeta tails, and golden-section refinement.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::quad::gk15;

/// Kahan-compensated accumulator.
#[derive(Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// ζ(2m) for m = 1..=40, computed once by direct summation with an
/// Euler-Maclaurin tail.
fn zeta_even(m: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (1..=40)
            .map(|m| {
                let s = 2 * m as i32;
                let cut = 64.0f64;
                let mut acc = Kahan::default();
                let mut k = 1.0f64;
                while k < cut {
                    acc.add(k.powi(-s));
                    k += 1.0;
                }
                // Tail from Euler-Maclaurin at a = cut.
                let a = cut;
                let sf = s as f64;
                let tail = a.powi(1 - s) / (sf - 1.0) + 0.5 * a.powi(-s)
                    + sf / 12.0 * a.powi(-s - 1)
                    - sf * (sf + 1.0) * (sf + 2.0) / 720.0 * a.powi(-s - 3);
                acc.add(tail);
                acc.value()
            })
            .collect()
    });
    table[m - 1]
}

/// Σ_{k>K} k^{-2}, Euler-Maclaurin with four terms.
pub fn zeta2_tail(k: usize) -> f64 {
    let a = (k + 1) as f64;
    1.0 / a + 1.0 / (2.0 * a * a) + 1.0 / (6.0 * a * a * a) - 1.0 / (30.0 * a.powi(5))
}

/// Σ_{k>K} k^{-4}, Euler-Maclaurin with four terms.
pub fn zeta4_tail(k: usize) -> f64 {
    let a = (k + 1) as f64;
    1.0 / (3.0 * a.powi(3)) + 1.0 / (2.0 * a.powi(4)) + 1.0 / (3.0 * a.powi(5))
        - 1.0 / (6.0 * a.powi(7))
}

/// Clausen function Cl₂(θ) = Σ_{k≥1} sin(kθ)/k² = -∫₀^θ ln|2 sin(t/2)| dt.
///
/// Reduction to [0, π] plus the series
/// Cl₂(θ) = θ - θ ln θ + θ Σ_{m≥1} ζ(2m)/(m(2m+1)) (θ/2π)^{2m},
/// which converges geometrically with ratio ≤ 1/4 on that range.
pub fn clausen2(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut x = theta % two_pi;
    if x < 0.0 {
        x += two_pi;
    }
    let sign = if x > PI {
        x = two_pi - x;
        -1.0
    } else {
        1.0
    };
    if x == 0.0 {
        return 0.0;
    }
    let r = x / two_pi;
    let r2 = r * r;
    let mut series = 0.0;
    let mut pow = r2;
    for m in 1..=40 {
        let mf = m as f64;
        let term = zeta_even(m) / (mf * (2.0 * mf + 1.0)) * pow;
        series += term;
        if term < 1e-18 * (1.0 + series) {
            break;
        }
        pow *= r2;
    }
    sign * (x - x * x.ln() + x * series)
}

/// ∫₀^φ ln|2 sin(πu)| du = -Cl₂(2πφ)/(2π); the antiderivative used by the
/// periodic piecewise-linear transform.
pub fn log_two_sin_antiderivative(phi: f64) -> f64 {
    -clausen2(2.0 * PI * phi) / (2.0 * PI)
}

/// Extends a running value of ∫₀^{z0} J₀ to ∫₀^{z1} (monotone walks reuse work).
pub fn j0_integral_from(z0: f64, acc0: f64, z1: f64) -> f64 {
    let mut acc = acc0;
    let mut z = z0;
    let sign = if z1 >= z0 { 1.0 } else { -1.0 };
    let target = z1;
    while (target - z) * sign > 0.0 {
        let step = 2.0f64.min((target - z).abs());
        let next = z + sign * step;
        let (v, _) = gk15(&libm::j0, z, next);
        acc += v;
        z = next;
    }
    acc
}

const BUMP_SAMPLES: usize = 8192;

/// The bump ψ(x) = exp(-1/(1-(4x)²)) on (-1/4, 1/4), zero outside.
pub fn bump_psi(x: f64) -> f64 {
    let u = 4.0 * x;
    let d = 1.0 - u * u;
    if d <= 0.0 {
        0.0
    } else {
        (-1.0 / d).exp()
    }
}

fn bump_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=BUMP_SAMPLES)
            .map(|j| bump_psi(0.25 * j as f64 / BUMP_SAMPLES as f64))
            .collect()
    })
}

/// ψ̂(s) = ∫ ψ(x) e^{-2πisx} dx, real by evenness.
///
/// Trapezoid sums are spectrally accurate here because every derivative of ψ
/// vanishes at the support endpoints.
pub fn bump_psi_hat(s: f64) -> f64 {
    let table = bump_table();
    let h = 0.25 / BUMP_SAMPLES as f64;
    let mut acc = Kahan::default();
    acc.add(0.5 * table[0]);
    for (j, &v) in table.iter().enumerate().skip(1) {
        let x = h * j as f64;
        acc.add(v * (2.0 * PI * s * x).cos());
    }
    2.0 * h * acc.value()
}

/// ∫ψ, the normalization of the bump.
pub fn bump_psi_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| bump_psi_hat(0.0))
}

/// The convolution (ψ*ψ)(y)/(∫ψ)² evaluated by quadrature.
fn mollifier_phi_exact(y: f64) -> f64 {
    let y = y.abs();
    if y >= 0.5 {
        return 0.0;
    }
    let lo = (-0.25f64).max(y - 0.25);
    let hi = 0.25f64.min(y + 0.25);
    if hi <= lo {
        return 0.0;
    }
    // ψ is smooth; a handful of fixed panels reaches ~1e-14.
    let n = 8;
    let mut total = 0.0;
    for i in 0..n {
        let a = lo + (hi - lo) * i as f64 / n as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / n as f64;
        let (v, _) = gk15(&|t: f64| bump_psi(t) * bump_psi(y - t), a, b);
        total += v;
    }
    let m = bump_psi_mass();
    total / (m * m)
}

const PHI_SAMPLES: usize = 4096;

fn phi_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=PHI_SAMPLES)
            .map(|j| mollifier_phi_exact(0.5 * j as f64 / PHI_SAMPLES as f64))
            .collect()
    })
}

/// The mollifier φ = (ψ*ψ)/(∫ψ)², a C^∞ bump on [-1/2, 1/2] of unit mass
/// with non-negative Fourier transform.
///
/// Evaluated from a cached table by Catmull-Rom interpolation; φ is smooth,
/// so the interpolation error sits near 1e-13.
pub fn mollifier_phi(y: f64) -> f64 {
    let y = y.abs();
    if y >= 0.5 {
        return 0.0;
    }
    let table = phi_table();
    let pos = y / 0.5 * PHI_SAMPLES as f64;
    let i = (pos as usize).min(PHI_SAMPLES - 1);
    let t = pos - i as f64;
    let get = |j: isize| -> f64 {
        if j < 0 {
            // even extension through 0
            table[(-j) as usize]
        } else if j as usize > PHI_SAMPLES {
            0.0
        } else {
            table[j as usize]
        }
    };
    let (p0, p1, p2, p3) = (get(i as isize - 1), get(i as isize), get(i as isize + 1), get(i as isize + 2));
    let a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    let b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    let c = -0.5 * p0 + 0.5 * p2;
    ((a * t + b) * t + c) * t + p1
}

/// φ̂(s) = (ψ̂(s)/ψ̂(0))², non-negative by construction.
pub fn mollifier_phi_hat(s: f64) -> f64 {
    let r = bump_psi_hat(s) / bump_psi_mass();
    r * r
}

/// Golden-section maximization of `f` on `[a, b]` to x-tolerance `xtol`.
///
/// Returns `(argmax, max)`. Assumes `f` is continuous; on multimodal brackets
/// it returns a local maximum, which is why callers seed it from grid scans.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let xm = 0.5 * (a + b);
    let fm = f(xm);
    if fm >= fc && fm >= fd {
        (xm, fm)
    } else if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
